#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "formwave/grid.hpp"

namespace formwave {

using cplx = std::complex<double>;

enum class Space : std::uint8_t { physical = 0, fourier = 1 };

/// Complex q-form sampled on a grid: one scalar array per basis multi-index.
///
/// Rank -1 and N+1 are allowed and carry no components; they are what rot of an
/// N-form and div of a 0-form return.
class FormField {
 public:
  FormField() = default;
  FormField(const GridSpec& grid, int rank, Space space = Space::physical);

  const GridSpec& grid() const noexcept { return grid_; }
  int rank() const noexcept { return rank_; }
  Space space() const noexcept { return space_; }
  std::size_t component_count() const noexcept { return components_; }
  std::size_t node_count() const noexcept { return grid_.node_count(); }
  bool trivial() const noexcept { return components_ == 0; }

  std::span<cplx> component(std::size_t c) noexcept {
    return {data_.data() + c * grid_.node_count(), grid_.node_count()};
  }
  std::span<const cplx> component(std::size_t c) const noexcept {
    return {data_.data() + c * grid_.node_count(), grid_.node_count()};
  }
  cplx& at(std::size_t c, std::size_t node) noexcept { return data_[c * grid_.node_count() + node]; }
  cplx at(std::size_t c, std::size_t node) const noexcept {
    return data_[c * grid_.node_count() + node];
  }
  std::span<cplx> data() noexcept { return data_; }
  std::span<const cplx> data() const noexcept { return data_; }

  void set_space(Space s) noexcept { space_ = s; }

  FormField& operator+=(const FormField& other);
  FormField& operator-=(const FormField& other);
  FormField& operator*=(cplx factor);

  double max_abs() const noexcept;

 private:
  GridSpec grid_;
  int rank_ = 0;
  Space space_ = Space::physical;
  std::size_t components_ = 0;
  std::vector<cplx> data_;
};

FormField operator+(FormField a, const FormField& b);
FormField operator-(FormField a, const FormField& b);
FormField operator*(cplx factor, FormField a);

void require_compatible(const FormField& a, const FormField& b);

/// The state (E, H): a q-form and a (q+1)-form on one grid.
class FormPair {
 public:
  FormPair() = default;
  FormPair(FormField e, FormField h);
  static FormPair zero(const GridSpec& grid, int rank, Space space = Space::physical);

  int rank() const noexcept { return e.rank(); }
  const GridSpec& grid() const noexcept { return e.grid(); }

  FormPair& operator+=(const FormPair& other);
  FormPair& operator-=(const FormPair& other);
  FormPair& operator*=(cplx factor);

  FormField e;
  FormField h;
};

FormPair operator+(FormPair a, const FormPair& b);
FormPair operator-(FormPair a, const FormPair& b);
FormPair operator*(cplx factor, FormPair a);

}  // namespace formwave
