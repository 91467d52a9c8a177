#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "formwave/forms.hpp"
#include "formwave/material.hpp"

namespace formwave {

/// Frequency omega in the closed upper half plane plus absorption delta >= 0.
struct FrequencySpec {
  cplx omega{1.0, 0.0};
  double delta = 0.0;

  cplx effective() const noexcept { return omega + cplx(0.0, delta); }
};

/// R(xi), T(xi) = R(xi)^T and S(xi) = [0 T; R 0] at one wavevector.
struct ModeSymbol {
  ModeSymbol(int dim, int rank, std::span<const double> xi);

  Eigen::MatrixXd R;
  Eigen::MatrixXd T;
  Eigen::MatrixXd S;
  double radius_squared = 0.0;
};

/// u = L_omega f for Lambda = Id: u_hat = -i (S(xi) + omega)^-1 f_hat per mode.
/// Real effective omega is refused when some |xi| lies within `resonance_tol` of |omega|.
FormPair solve_whole_space_id(const FormPair& f, FrequencySpec freq, double resonance_tol = 1e-8);

struct HelmholtzParts {
  FormField irrotational;  ///< R T u_hat / |xi|^2, in the range of rot
  FormField solenoidal;    ///< T R u_hat / |xi|^2, in the range of div
  FormField mean;          ///< the xi = 0 mode
};

HelmholtzParts helmholtz_project(const FormField& u);

/// L_0 for Lambda = Id: rot E = G, div E = 0, div H = F, rot H = 0.
/// F must be divergence free, G rotation free, both with zero mean (relative to `tol`).
FormPair solve_static_id(const FormField& F, const FormField& G, double tol = 1e-8);

struct IterationReport {
  std::vector<double> residuals;
  int iterations = 0;
};

/// L_0 for Lambda = Id + Lambda_hat: div eps E = 0 and rot mu H = 0 replace the Id
/// constraints. Solved by projected fixed-point iteration on the correction.
FormPair solve_static_material(const FormField& F, const FormField& G, const MaterialMap& m,
                               IterationReport* report = nullptr, double tol = 1e-12,
                               int max_iter = 200);

struct BornResult {
  FormPair solution;
  IterationReport report;
};

/// Fixed point of u = L_omega^Id (f - i omega Lambda_hat u). Residuals are
/// ||(M + i omega Lambda) u - f|| / ||f|| per iterate.
BornResult born_solve(const FormPair& f, FrequencySpec freq, const MaterialMap& m,
                      int max_iter = 200, double tol = 1e-10);

struct AbsorptionResult {
  FormPair linear;     ///< extrapolation through the last two absorption levels
  FormPair quadratic;  ///< through the last three
  std::vector<double> deltas;
  /// Window norms of u(delta_{j+1}) - u(delta_j).
  std::vector<double> cauchy;
};

/// Solves at omega + i delta_j for a decreasing list and extrapolates delta -> 0.
/// Throws non_cauchy when the window differences fail to decrease.
AbsorptionResult limiting_absorption(const FormPair& f, double omega, std::span<const double> deltas,
                                     Window window = {});

/// Polynomial extrapolation to delta = 0 through the last order+1 samples.
FormPair richardson(std::span<const FormPair> samples, std::span<const double> deltas, int order);

}  // namespace formwave
