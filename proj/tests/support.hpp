#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "formwave/form_field.hpp"
#include "formwave/forms.hpp"

namespace formwave::testing {

inline double l2(const FormField& u) {
  double s = 0.0;
  for (const auto& v : u.data()) s += std::norm(v);
  return std::sqrt(s);
}

inline double l2(const FormPair& p) { return std::hypot(l2(p.e), l2(p.h)); }

inline double rel(const FormField& a, const FormField& b) {
  const double d = l2(a - b);
  const double s = std::max(l2(a), l2(b));
  return s > 0.0 ? d / s : d;
}

/// Every component set to f(x) times a fixed complex coefficient per component.
inline FormField sampled(const GridSpec& grid, int rank,
                         const std::function<double(std::span<const double>)>& f,
                         unsigned seed = 5) {
  FormField u(grid, rank);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> x(grid.dim());
  for (std::size_t c = 0; c < u.component_count(); ++c) {
    const cplx a{d(rng), d(rng)};
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      grid.node_position(node, x);
      u.at(c, node) = a * f(x);
    }
  }
  return u;
}

inline double gaussian(std::span<const double> x, double width = 1.0) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return std::exp(-r2 / (width * width));
}

inline std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& c : v) c = {d(rng), d(rng)};
  return v;
}

}  // namespace formwave::testing
