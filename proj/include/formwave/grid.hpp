#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace formwave {

/// Uniform periodic grid on [-L, L)^N with n nodes per axis, node k at -L + k*h.
///
/// Nodes are stored row-major: axis 0 varies slowest. Fourier index k maps to the
/// signed wavenumber pi*k'/L with k' in {-n/2, ..., n/2 - 1}.
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(int dim, int n, double half_width);

  int dim() const noexcept { return dim_; }
  int points_per_axis() const noexcept { return n_; }
  double half_width() const noexcept { return half_width_; }
  double spacing() const noexcept { return 2.0 * half_width_ / n_; }
  double cell_volume() const noexcept;
  std::size_t node_count() const noexcept { return node_count_; }

  double coordinate(int k) const noexcept { return -half_width_ + k * spacing(); }
  double wavenumber(int k) const noexcept;
  /// Axis values x_k for k = 0..n-1.
  std::vector<double> coordinates() const;
  /// Signed wavenumbers in FFT storage order.
  std::vector<double> wavenumbers() const;

  std::size_t origin_node() const noexcept;
  void node_indices(std::size_t node, std::span<int> out) const noexcept;
  void node_position(std::size_t node, std::span<double> out) const noexcept;
  double node_radius(std::size_t node) const noexcept;
  std::size_t node_at(std::span<const int> idx) const noexcept;

  /// Same dimension and box, n scaled by `factor`.
  GridSpec refined(int factor = 2) const { return GridSpec(dim_, n_ * factor, half_width_); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int dim_ = 3;
  int n_ = 8;
  double half_width_ = 1.0;
  std::size_t node_count_ = 512;
};

}  // namespace formwave
