#include "formwave/form_field.hpp"

#include <algorithm>
#include <cmath>

#include "formwave/errors.hpp"
#include "formwave/multi_index.hpp"

namespace formwave {

FormField::FormField(const GridSpec& grid, int rank, Space space)
    : grid_(grid), rank_(rank), space_(space), components_(binomial(grid.dim(), rank)) {
  require(rank >= -1 && rank <= grid.dim() + 1, ErrorCode::rank_overflow,
          "form rank must lie in [-1, N+1]");
  data_.assign(components_ * grid.node_count(), cplx{});
}

void require_compatible(const FormField& a, const FormField& b) {
  require(a.grid() == b.grid(), ErrorCode::grid_mismatch, "fields live on different grids");
  require(a.rank() == b.rank(), ErrorCode::rank_mismatch, "fields have different ranks");
  require(a.space() == b.space(), ErrorCode::wrong_space, "fields are in different spaces");
}

FormField& FormField::operator+=(const FormField& other) {
  require_compatible(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

FormField& FormField::operator-=(const FormField& other) {
  require_compatible(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

FormField& FormField::operator*=(cplx factor) {
  for (auto& v : data_) v *= factor;
  return *this;
}

double FormField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

FormField operator+(FormField a, const FormField& b) { return a += b; }
FormField operator-(FormField a, const FormField& b) { return a -= b; }
FormField operator*(cplx factor, FormField a) { return a *= factor; }

FormPair::FormPair(FormField e_, FormField h_) : e(std::move(e_)), h(std::move(h_)) {
  require(e.grid() == h.grid(), ErrorCode::grid_mismatch, "pair components on different grids");
  require(h.rank() == e.rank() + 1, ErrorCode::rank_mismatch, "pair needs rank(H) = rank(E) + 1");
  require(e.space() == h.space(), ErrorCode::wrong_space, "pair components in different spaces");
}

FormPair FormPair::zero(const GridSpec& grid, int rank, Space space) {
  return {FormField(grid, rank, space), FormField(grid, rank + 1, space)};
}

FormPair& FormPair::operator+=(const FormPair& other) {
  e += other.e;
  h += other.h;
  return *this;
}

FormPair& FormPair::operator-=(const FormPair& other) {
  e -= other.e;
  h -= other.h;
  return *this;
}

FormPair& FormPair::operator*=(cplx factor) {
  e *= factor;
  h *= factor;
  return *this;
}

FormPair operator+(FormPair a, const FormPair& b) { return a += b; }
FormPair operator-(FormPair a, const FormPair& b) { return a -= b; }
FormPair operator*(cplx factor, FormPair a) { return a *= factor; }

}  // namespace formwave
