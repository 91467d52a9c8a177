#pragma once

#include <span>

#include "formwave/form_field.hpp"

namespace formwave {

/// Forward transform with kernel exp(-i k.x) per component; no normalization.
FormField to_fourier(const FormField& u);
/// Inverse transform, normalized by 1/n^N.
FormField to_physical(const FormField& u);

/// Grid whose nodes are the discrete frequencies of `g`: spacing pi/L, half-width n pi/(2L).
GridSpec frequency_grid(const GridSpec& g);
/// Unitary continuous transform (2 pi)^(-N/2) h^N sum_x exp(-i xi.x) u(x), sampled at the
/// nodes of frequency_grid(u.grid()) and returned there as a physical-space field.
FormField continuous_fourier(const FormField& u);

/// In-place N-dimensional DFT of one component array. sign = -1 forward, +1 backward
/// (unnormalized). Plans are cached and shared; execution is thread-safe.
void dft_inplace(const GridSpec& grid, std::span<cplx> values, int sign);

}  // namespace formwave
