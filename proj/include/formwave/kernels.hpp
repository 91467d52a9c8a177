#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference in
// `kernels::serial` and an OpenMP version in `kernels::parallel` with the same
// signature; the library uses the parallel path, tests compare the two.

#include <complex>
#include <cstddef>
#include <span>

#include "formwave/grid.hpp"
#include "formwave/radial_kernel.hpp"

namespace formwave::kernels {

using cplx = std::complex<double>;

/// Covector a = scale * sum_n values[k_n] dx^n, with the same axis table on every axis
/// (node coordinates or wavenumbers).
struct SeparableCovector {
  std::span<const double> values;
  cplx scale = 1.0;
};

/// Spherical shell restricting a reduction: inner <= |x| <= outer.
struct RadialWindow {
  double inner = 0.0;
  double outer = 1e300;
};

/// Point sources for the direct representation quadrature. Component arrays are
/// source-major: values[j * comps + c].
struct SourceSet {
  int dim = 3;
  int rank = 1;
  std::span<const double> positions;  // j * dim + axis
  std::span<const cplx> f;            // rank q
  std::span<const cplx> g;            // rank q+1
  std::span<const cplx> div_f;        // rank q-1 (may be empty)
  std::span<const cplx> rot_g;        // rank q+2 (may be empty)
  double weight = 1.0;                // quadrature weight per source
};

namespace serial {

/// out (rank q+1) = a ^ in (rank q); component-major arrays, out overwritten.
void wedge_covector(const GridSpec& grid, int rank, const SeparableCovector& a,
                    std::span<const cplx> in, std::span<cplx> out);
/// out (rank q) = a-interior of in (rank q+1), the pointwise transpose of wedge_covector.
void interior_covector(const GridSpec& grid, int rank, const SeparableCovector& a,
                       std::span<const cplx> in, std::span<cplx> out);
/// sum over window nodes of rho^(2s) <a, b> * cell volume.
cplx weighted_inner(const GridSpec& grid, double s, const RadialWindow& window,
                    std::span<const cplx> a, std::span<const cplx> b, std::size_t components);
/// Per-mode u = -i (S(xi) + omega)^-1 f on a Fourier-space pair of rank q.
void mode_solve(const GridSpec& grid, int rank, cplx omega, std::span<const cplx> f_e,
                std::span<const cplx> f_h, std::span<cplx> u_e, std::span<cplx> u_h);
/// Representation-formula quadrature at `points` (point-major, dim coords each).
/// Sources closer than `exclusion` to a point are skipped.
void representation(const SourceSet& sources, const RadialProfile& kernel, cplx omega,
                    std::span<const double> points, double exclusion, std::span<cplx> e_out,
                    std::span<cplx> h_out);

}  // namespace serial

namespace parallel {

void wedge_covector(const GridSpec& grid, int rank, const SeparableCovector& a,
                    std::span<const cplx> in, std::span<cplx> out);
void interior_covector(const GridSpec& grid, int rank, const SeparableCovector& a,
                       std::span<const cplx> in, std::span<cplx> out);
cplx weighted_inner(const GridSpec& grid, double s, const RadialWindow& window,
                    std::span<const cplx> a, std::span<const cplx> b, std::size_t components);
void mode_solve(const GridSpec& grid, int rank, cplx omega, std::span<const cplx> f_e,
                std::span<const cplx> f_h, std::span<cplx> u_e, std::span<cplx> u_h);
void representation(const SourceSet& sources, const RadialProfile& kernel, cplx omega,
                    std::span<const double> points, double exclusion, std::span<cplx> e_out,
                    std::span<cplx> h_out);

}  // namespace parallel

/// Worker threads used by the parallel kernels; 0 leaves the OpenMP default.
void set_thread_count(int threads);
int thread_count();

}  // namespace formwave::kernels
