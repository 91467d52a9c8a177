#pragma once

#include <cstdint>

#include "formwave/form_field.hpp"

namespace formwave {

/// C-infinity step: 0 for s <= 0, 1 for s >= 1, built from exp(-1/s).
double smooth_step(double s) noexcept;
double smooth_step_derivative(double s) noexcept;

/// eta(x) = step((|x| - r1) / (r2 - r1)): zero inside r1, one outside r2.
class CutoffProfile {
 public:
  CutoffProfile(double inner_radius, double outer_radius);

  double inner_radius() const noexcept { return r1_; }
  double outer_radius() const noexcept { return r2_; }
  double operator()(double r) const noexcept;
  double derivative(double r) const noexcept;
  /// 1 - eta, supported in |x| <= r2.
  double bump(double r) const noexcept { return 1.0 - (*this)(r); }

 private:
  double r1_;
  double r2_;
};

enum class BumpMode { generic, div_free, rot_free };

/// Smooth form supported in |x| <= r2: (1 - eta) times seeded affine coefficients.
/// div_free returns div of such a (q+1)-form, rot_free returns rot of a (q-1)-form;
/// both are computed spectrally.
FormField make_bump_form(const GridSpec& grid, int rank, const CutoffProfile& profile,
                         BumpMode mode, std::uint64_t seed = 1);

}  // namespace formwave
