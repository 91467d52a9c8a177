#pragma once

#include <limits>
#include <span>

#include "formwave/form_field.hpp"

namespace formwave {

enum class Backend { spectral, finite_difference };

/// Weight rho^s with rho = (1 + r^2)^(1/2).
struct WeightSpec {
  double s = 0.0;
};

/// Radial shell inner <= |x| <= outer over which weighted quantities are summed.
struct Window {
  double inner = 0.0;
  double outer = std::numeric_limits<double>::infinity();
};

FormField wedge(const FormField& u, const FormField& v);
FormField hodge_star(const FormField& u);

/// sum_nodes rho^(2s) <u, v>_q h^N over the window; conjugate-linear in v.
cplx inner_weighted(const FormField& u, const FormField& v, WeightSpec w = {}, Window win = {});
double norm_weighted(const FormField& u, WeightSpec w = {}, Window win = {});
double norm_weighted(const FormPair& p, WeightSpec w = {}, Window win = {});

/// Exterior derivative. Accepts physical or Fourier input and returns the same space
/// (Fourier input requires the spectral backend).
FormField rot(const FormField& u, Backend backend = Backend::spectral);
/// Codifferential (-1)^((k-1)N) * rot * on a k-form, by composition.
FormField div(const FormField& u, Backend backend = Backend::spectral);
/// Same operator through the Fourier symbol i T(xi) directly.
FormField div_symbol(const FormField& u);
/// Componentwise Laplacian through the -|xi|^2 multiplier.
FormField laplacian(const FormField& u);

/// Sign of the codifferential on rank-k input.
int codifferential_sign(int dim, int rank) noexcept;

/// Pointwise product with a scalar field given per node.
FormField multiply(std::span<const double> scalar, const FormField& u);
/// Constant form with the given basis coefficients.
FormField constant_form(const GridSpec& grid, int rank, std::span<const cplx> coefficients);
/// Random trigonometric polynomial with wavenumber indices |k_n| <= max_mode.
FormField random_band_limited(const GridSpec& grid, int rank, int max_mode, unsigned long long seed);

}  // namespace formwave
