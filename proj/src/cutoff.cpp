#include "formwave/cutoff.hpp"

#include <cmath>
#include <random>

#include "formwave/errors.hpp"
#include "formwave/forms.hpp"

namespace formwave {

namespace {

double bridge(double s) noexcept { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

}  // namespace

double smooth_step(double s) noexcept {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = bridge(s);
  const double b = bridge(1.0 - s);
  return a / (a + b);
}

double smooth_step_derivative(double s) noexcept {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = bridge(s);
  const double b = bridge(1.0 - s);
  const double da = a / (s * s);
  const double db = b / ((1.0 - s) * (1.0 - s));
  return (da * b + a * db) / ((a + b) * (a + b));
}

CutoffProfile::CutoffProfile(double inner_radius, double outer_radius)
    : r1_(inner_radius), r2_(outer_radius) {
  require(inner_radius > 0.0 && inner_radius < outer_radius, ErrorCode::invalid_argument,
          "cutoff radii must satisfy 0 < r1 < r2");
}

double CutoffProfile::operator()(double r) const noexcept { return smooth_step((r - r1_) / (r2_ - r1_)); }

double CutoffProfile::derivative(double r) const noexcept {
  return smooth_step_derivative((r - r1_) / (r2_ - r1_)) / (r2_ - r1_);
}

namespace {

FormField generic_bump(const GridSpec& grid, int rank, const CutoffProfile& profile,
                       std::uint64_t seed) {
  FormField out(grid, rank);
  if (out.trivial()) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int dim = grid.dim();
  const double scale = 1.0 / profile.outer_radius();
  std::vector<double> x(dim);
  for (std::size_t c = 0; c < out.component_count(); ++c) {
    const cplx a0{dist(rng), dist(rng)};
    std::vector<cplx> a1(dim);
    for (auto& v : a1) v = {dist(rng), dist(rng)};
    auto comp = out.component(c);
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      const double b = profile.bump(grid.node_radius(node));
      if (b == 0.0) continue;
      grid.node_position(node, x);
      cplx v = a0;
      for (int d = 0; d < dim; ++d) v += a1[d] * (x[d] * scale);
      comp[node] = b * v;
    }
  }
  return out;
}

}  // namespace

FormField make_bump_form(const GridSpec& grid, int rank, const CutoffProfile& profile,
                         BumpMode mode, std::uint64_t seed) {
  require(profile.outer_radius() < grid.half_width() - 2.0 * grid.spacing(),
          ErrorCode::support_out_of_box, "bump support reaches the box boundary");
  require(rank >= 0 && rank <= grid.dim(), ErrorCode::rank_overflow, "bump rank outside [0, N]");
  switch (mode) {
    case BumpMode::generic: return generic_bump(grid, rank, profile, seed);
    case BumpMode::div_free: return div(generic_bump(grid, rank + 1, profile, seed));
    case BumpMode::rot_free: return rot(generic_bump(grid, rank - 1, profile, seed));
  }
  return FormField(grid, rank);
}

}  // namespace formwave
