#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "formwave/form_field.hpp"

namespace formwave {

struct AdmissibilityReport {
  double symmetry_defect = 0.0;  ///< max over nodes of ||A - A^T||
  double min_eigenvalue = 1.0;   ///< positive-definiteness constant c
  double decay_bound = 0.0;      ///< max over nodes of ||A_hat(x)|| (1 + |x|)^tau
  bool admissible = true;
};

/// Pointwise symmetric positive-definite transformations eps on q-forms and mu on
/// (q+1)-forms, stored as Id + perturbation on the nodes where the perturbation is
/// nonzero.
class MaterialMap {
 public:
  /// Perturbation of one transformation: node list and row-major m x m blocks.
  struct Perturbation {
    std::size_t size = 0;
    std::vector<std::size_t> nodes;
    std::vector<double> blocks;
  };

  MaterialMap(const GridSpec& grid, int rank, Perturbation eps, Perturbation mu, double tau,
              double support_radius);

  static MaterialMap identity(const GridSpec& grid, int rank);
  /// amplitude * profile(|x|) * B with a seeded symmetric B of unit spectral norm.
  /// Compact family: profile = 1 - eta with cutoff radii (r1, r2), tau = infinity.
  static MaterialMap compact_family(const GridSpec& grid, int rank, double amplitude, double r1,
                                    double r2, std::uint64_t seed = 11);
  /// Decaying family: profile = (1 + r^2)^(-tau/2), full support.
  static MaterialMap decaying_family(const GridSpec& grid, int rank, double amplitude, double tau,
                                     std::uint64_t seed = 11);
  /// From field dumps: binom(N,q) rank-q records (columns eps dx^I) followed by
  /// binom(N,q+1) rank-(q+1) records (columns mu dx^J). Imaginary parts must vanish.
  static MaterialMap from_columns(std::span<const FormField> records, double tau);

  const GridSpec& grid() const noexcept { return grid_; }
  int rank() const noexcept { return rank_; }
  double tau() const noexcept { return tau_; }
  double support_radius() const noexcept { return support_radius_; }
  bool is_identity() const noexcept { return eps_.nodes.empty() && mu_.nodes.empty(); }
  const Perturbation& eps_hat() const noexcept { return eps_; }
  const Perturbation& mu_hat() const noexcept { return mu_; }

  /// max over nodes of the spectral norm of the perturbation.
  double perturbation_norm() const;
  AdmissibilityReport check(double min_eigenvalue_floor = 1e-12) const;
  /// Throws not_admissible when check() fails.
  const MaterialMap& validated() const;

  /// out = A_hat u (perturbation only) for eps (rank q) or mu (rank q+1) inputs.
  FormField apply_perturbation(const FormField& u) const;
  FormField apply(const FormField& u) const;

 private:
  GridSpec grid_;
  int rank_;
  Perturbation eps_;
  Perturbation mu_;
  double tau_;
  double support_radius_;
};

}  // namespace formwave
