#include "formwave/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "formwave/errors.hpp"

namespace formwave {

GridSpec::GridSpec(int dim, int n, double half_width)
    : dim_(dim), n_(n), half_width_(half_width) {
  require(dim >= 3 && dim % 2 == 1, ErrorCode::invalid_argument,
          "grid dimension must be odd and >= 3, got " + std::to_string(dim));
  require(n >= 8 && n % 2 == 0, ErrorCode::invalid_argument,
          "points per axis must be even and >= 8, got " + std::to_string(n));
  require(half_width > 0.0 && std::isfinite(half_width), ErrorCode::invalid_argument,
          "box half-width must be positive");
  node_count_ = 1;
  for (int a = 0; a < dim; ++a) node_count_ *= static_cast<std::size_t>(n);
}

double GridSpec::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

double GridSpec::wavenumber(int k) const noexcept {
  const int signed_k = k < n_ / 2 ? k : k - n_;
  return std::numbers::pi * signed_k / half_width_;
}

std::vector<double> GridSpec::coordinates() const {
  std::vector<double> x(n_);
  for (int k = 0; k < n_; ++k) x[k] = coordinate(k);
  return x;
}

std::vector<double> GridSpec::wavenumbers() const {
  std::vector<double> xi(n_);
  for (int k = 0; k < n_; ++k) xi[k] = wavenumber(k);
  return xi;
}

std::size_t GridSpec::origin_node() const noexcept {
  std::size_t node = 0;
  for (int a = 0; a < dim_; ++a) node = node * n_ + n_ / 2;
  return node;
}

void GridSpec::node_indices(std::size_t node, std::span<int> out) const noexcept {
  for (int a = dim_ - 1; a >= 0; --a) {
    out[a] = static_cast<int>(node % n_);
    node /= n_;
  }
}

void GridSpec::node_position(std::size_t node, std::span<double> out) const noexcept {
  const double h = spacing();
  for (int a = dim_ - 1; a >= 0; --a) {
    out[a] = -half_width_ + static_cast<double>(node % n_) * h;
    node /= n_;
  }
}

double GridSpec::node_radius(std::size_t node) const noexcept {
  const double h = spacing();
  double r2 = 0.0;
  for (int a = 0; a < dim_; ++a) {
    const double x = -half_width_ + static_cast<double>(node % n_) * h;
    r2 += x * x;
    node /= n_;
  }
  return std::sqrt(r2);
}

std::size_t GridSpec::node_at(std::span<const int> idx) const noexcept {
  std::size_t node = 0;
  for (int a = 0; a < dim_; ++a) node = node * n_ + static_cast<std::size_t>(idx[a]);
  return node;
}

}  // namespace formwave
