#pragma once

#include <complex>
#include <span>
#include <vector>

#include "formwave/multi_index.hpp"

namespace formwave::detail {

using cplx = std::complex<double>;

/// out (rank q+1) = a ^ in (rank q) at one point, a given per axis.
template <class A>
inline void wedge_point(const std::vector<CovectorTerm>& terms, const A& a,
                        const cplx* in, cplx* out, std::size_t out_size) {
  for (std::size_t k = 0; k < out_size; ++k) out[k] = 0.0;
  for (const auto& t : terms) out[t.high] += static_cast<double>(t.sign) * a[t.axis] * in[t.low];
}

/// out (rank q) = transpose of wedge_point applied to in (rank q+1).
template <class A>
inline void interior_point(const std::vector<CovectorTerm>& terms, const A& a,
                           const cplx* in, cplx* out, std::size_t out_size) {
  for (std::size_t k = 0; k < out_size; ++k) out[k] = 0.0;
  for (const auto& t : terms) out[t.low] += static_cast<double>(t.sign) * a[t.axis] * in[t.high];
}

}  // namespace formwave::detail
