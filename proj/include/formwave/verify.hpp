#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "formwave/form_field.hpp"

namespace formwave {

/// One measured quantity. `pass` is decided by the producer; `tolerance` is the bound it
/// was compared against (its meaning depends on the quantity, see the README).
struct ReportRow {
  int dim = 3;
  int rank = 1;
  int n = 0;
  double half_width = 0.0;
  cplx omega = 0.0;
  double delta = 0.0;
  double s = 0.0;
  double t_tilde = 0.0;
  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct SolveReport {
  std::string command;
  std::vector<ReportRow> rows;
  /// Wall-clock seconds per phase; reported in the JSON summary only.
  std::vector<std::pair<std::string, double>> timings;

  bool passed() const;
  void append(const SolveReport& other);
};

enum class DataMode {
  clean,    ///< div F = 0 and rot G = 0
  generic,  ///< seeded affine coefficients, neither constraint holds
  zero,
};

/// Experiment parameters shared by all verify procedures; each uses the subset it needs.
struct SweepConfig {
  int dim = 3;
  int rank = 1;
  int n = 32;
  double half_width = 8.0;

  double r1 = 1.0;  ///< data cut-off radii
  double r2 = 3.0;
  DataMode mode = DataMode::clean;
  std::uint64_t seed = 1;
  std::string data_file_e;  ///< field dumps replacing the bump data (both or neither)
  std::string data_file_h;

  cplx omega{0.5, 0.0};         ///< single-frequency commands; Re omega starts the schedule
  std::vector<double> deltas;   ///< absorption levels (solve command)
  double schedule_factor = 0.5;
  int schedule_steps = 6;
  double damping = 0.25;        ///< schedule runs along omega_k (1 + i damping)

  double s = 1.0;
  double t_tilde = -1.5;
  double window_fraction = 0.75;  ///< windows stop at this fraction of L

  double material_amplitude = 0.0;  ///< > 0 switches to Id + Lambda_hat via Born series
  double material_r1 = 1.0;
  double material_r2 = 3.0;
  std::string material_file;  ///< column records, see MaterialMap::from_columns
  double material_tau = 2.0;

  bool refine = true;       ///< oracle: repeat on the refined grid
  int point_stride = 2;     ///< oracle: window nodes subsampled on the base grid
  double shell_min = 8.0;   ///< radiation probe shells
  double shell_max = 64.0;
  int shells = 8;
  int shell_points = 256;

  /// Throws invalid_argument naming the offending parameter.
  void validate() const;
  double t() const noexcept { return s - 0.5 * (dim + 1); }
  double window_radius() const noexcept { return window_fraction * half_width; }
  std::vector<cplx> schedule() const;
};

/// rot rot, div div, rot div + div rot = Delta, partial integration, the product rules and
/// the Fourier correspondences on grid `grid` for rank q. Band-limited rows must reach
/// 1e-8; the product rules pass at 1e-8 or with refinement order >= 2 from n/2 to n.
SolveReport run_identity_suite(const GridSpec& grid, int rank, std::uint64_t seed = 1, bool zero_data = false);

/// ||L_omega_k(F, G) - L_0(F, G)||_{t_tilde} on the window along the schedule.
SolveReport run_lowfreq_sweep(const SweepConfig& cfg);
/// ||L_omega(F, G)||_{t} / ||(F, G)||_{s} along the schedule: spread and log-log slope.
SolveReport run_uniform_bound_probe(const SweepConfig& cfg);
/// Spectral solve against the convolution representation on [r2 + 2h, window].
SolveReport run_oracle_equivalence(const SweepConfig& cfg);
/// Radial decay of the real-omega convolution solution and of its radiation defect.
SolveReport run_radiation_probe(const SweepConfig& cfg);
/// Kernel bound ratios, ODE residuals, recurrence and the N = 3 calibration.
SolveReport run_kernel_check(const SweepConfig& cfg);
/// Single time-harmonic solve (Born series when a material is set, limiting absorption
/// when deltas are given).
SolveReport run_solve(const SweepConfig& cfg, FormPair* solution = nullptr);
/// Static solve with residuals of the four static equations.
SolveReport run_static(const SweepConfig& cfg);

struct RadialFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
};

/// Least-squares slope of log(value) against log(radius). Needs >= 5 shells.
RadialFit fit_radial_exponent(std::span<const double> radii, std::span<const double> values);

}  // namespace formwave
