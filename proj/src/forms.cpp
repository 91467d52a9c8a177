#include "formwave/forms.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "formwave/errors.hpp"
#include "formwave/fft.hpp"
#include "formwave/kernels.hpp"
#include "formwave/multi_index.hpp"

namespace formwave {

namespace {

constexpr cplx I{0.0, 1.0};

// iR(xi) or iT(xi) applied to Fourier coefficients.
FormField spectral_wedge(const FormField& uhat) {
  FormField out(uhat.grid(), uhat.rank() + 1, Space::fourier);
  if (out.trivial() || uhat.trivial()) return out;
  const auto xi = uhat.grid().wavenumbers();
  kernels::parallel::wedge_covector(uhat.grid(), uhat.rank(), {xi, I}, uhat.data(), out.data());
  return out;
}

FormField finite_difference_rot(const FormField& u) {
  const GridSpec& grid = u.grid();
  FormField out(grid, u.rank() + 1, Space::physical);
  if (out.trivial() || u.trivial()) return out;
  const std::size_t nodes = grid.node_count();
  const std::size_t n = grid.points_per_axis();
  const double inv_2h = 1.0 / (2.0 * grid.spacing());
  for (const auto& t : covector_terms(grid.dim(), u.rank())) {
    std::size_t stride = 1;
    for (int a = grid.dim() - 1; a > t.axis; --a) stride *= n;
    const auto src = u.component(t.low);
    auto dst = out.component(t.high);
    const double w = t.sign * inv_2h;
    const auto count = static_cast<long>(nodes);
#pragma omp parallel for schedule(static)
    for (long node = 0; node < count; ++node) {
      const std::size_t k = (node / stride) % n;
      const std::size_t up = k + 1 == n ? node + stride - n * stride : node + stride;
      const std::size_t down = k == 0 ? node + (n - 1) * stride : node - stride;
      dst[node] += w * (src[up] - src[down]);
    }
  }
  return out;
}

}  // namespace

int codifferential_sign(int dim, int rank) noexcept { return ((rank - 1) * dim) % 2 == 0 ? 1 : -1; }

FormField wedge(const FormField& u, const FormField& v) {
  require(u.grid() == v.grid(), ErrorCode::grid_mismatch, "wedge operands on different grids");
  require(u.rank() + v.rank() <= u.grid().dim(), ErrorCode::rank_overflow,
          "wedge rank " + std::to_string(u.rank() + v.rank()) + " exceeds the dimension");
  require(u.space() == Space::physical && v.space() == Space::physical, ErrorCode::wrong_space,
          "wedge is pointwise and needs physical-space operands");
  FormField out(u.grid(), u.rank() + v.rank());
  const std::size_t nodes = u.node_count();
  for (const auto& t : wedge_terms(u.grid().dim(), u.rank(), v.rank())) {
    const auto a = u.component(t.left);
    const auto b = v.component(t.right);
    auto dst = out.component(t.out);
    for (std::size_t k = 0; k < nodes; ++k) dst[k] += static_cast<double>(t.sign) * a[k] * b[k];
  }
  return out;
}

FormField hodge_star(const FormField& u) {
  const int dim = u.grid().dim();
  FormField out(u.grid(), dim - u.rank(), u.space());
  if (u.trivial()) return out;
  const auto& table = star_table(dim, u.rank());
  for (std::size_t c = 0; c < u.component_count(); ++c) {
    const auto src = u.component(c);
    auto dst = out.component(table.target[c]);
    const double sign = table.sign[c];
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = sign * src[k];
  }
  return out;
}

cplx inner_weighted(const FormField& u, const FormField& v, WeightSpec w, Window win) {
  require_compatible(u, v);
  require(u.space() == Space::physical, ErrorCode::wrong_space, "inner product needs physical fields");
  const kernels::RadialWindow window{win.inner, std::isfinite(win.outer) ? win.outer : 1e300};
  return kernels::parallel::weighted_inner(u.grid(), w.s, window, u.data(), v.data(),
                                           u.component_count());
}

double norm_weighted(const FormField& u, WeightSpec w, Window win) {
  return std::sqrt(std::max(0.0, inner_weighted(u, u, w, win).real()));
}

double norm_weighted(const FormPair& p, WeightSpec w, Window win) {
  const double e = norm_weighted(p.e, w, win);
  const double h = norm_weighted(p.h, w, win);
  return std::sqrt(e * e + h * h);
}

FormField rot(const FormField& u, Backend backend) {
  const int out_rank = std::min(u.rank() + 1, u.grid().dim() + 1);
  if (u.trivial() || u.rank() >= u.grid().dim()) return FormField(u.grid(), out_rank, u.space());
  if (backend == Backend::finite_difference) {
    require(u.space() == Space::physical, ErrorCode::wrong_space,
            "finite-difference rot needs physical input");
    return finite_difference_rot(u);
  }
  if (u.space() == Space::fourier) return spectral_wedge(u);
  return to_physical(spectral_wedge(to_fourier(u)));
}

FormField div(const FormField& u, Backend backend) {
  if (u.trivial() || u.rank() <= 0)
    return FormField(u.grid(), std::max(u.rank() - 1, -1), u.space());
  FormField out = hodge_star(rot(hodge_star(u), backend));
  out *= static_cast<double>(codifferential_sign(u.grid().dim(), u.rank()));
  return out;
}

FormField div_symbol(const FormField& u) {
  const bool physical = u.space() == Space::physical;
  if (u.trivial() || u.rank() <= 0) return FormField(u.grid(), std::max(u.rank() - 1, -1), u.space());
  FormField out(u.grid(), u.rank() - 1, Space::fourier);
  const FormField uhat = physical ? to_fourier(u) : u;
  const auto xi = u.grid().wavenumbers();
  kernels::parallel::interior_covector(u.grid(), u.rank() - 1, {xi, I}, uhat.data(), out.data());
  return physical ? to_physical(out) : out;
}

FormField laplacian(const FormField& u) {
  const bool physical = u.space() == Space::physical;
  FormField uhat = physical ? to_fourier(u) : u;
  const GridSpec& grid = u.grid();
  const auto xi = grid.wavenumbers();
  std::vector<int> idx(grid.dim());
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    grid.node_indices(node, idx);
    double r2 = 0.0;
    for (int i : idx) r2 += xi[i] * xi[i];
    for (std::size_t c = 0; c < uhat.component_count(); ++c) uhat.at(c, node) *= -r2;
  }
  return physical ? to_physical(uhat) : uhat;
}

FormField multiply(std::span<const double> scalar, const FormField& u) {
  require(scalar.size() == u.node_count(), ErrorCode::grid_mismatch,
          "scalar field does not match the grid");
  FormField out = u;
  for (std::size_t c = 0; c < out.component_count(); ++c) {
    auto comp = out.component(c);
    for (std::size_t k = 0; k < comp.size(); ++k) comp[k] *= scalar[k];
  }
  return out;
}

FormField constant_form(const GridSpec& grid, int rank, std::span<const cplx> coefficients) {
  FormField out(grid, rank);
  require(coefficients.size() == out.component_count(), ErrorCode::rank_mismatch,
          "coefficient count does not match binomial(N, q)");
  for (std::size_t c = 0; c < coefficients.size(); ++c)
    for (auto& v : out.component(c)) v = coefficients[c];
  return out;
}

FormField random_band_limited(const GridSpec& grid, int rank, int max_mode,
                              unsigned long long seed) {
  require(max_mode >= 0 && max_mode < grid.points_per_axis() / 2, ErrorCode::invalid_argument,
          "max_mode must lie below the Nyquist index");
  FormField hat(grid, rank, Space::fourier);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int n = grid.points_per_axis();
  std::vector<int> idx(grid.dim());
  for (std::size_t c = 0; c < hat.component_count(); ++c) {
    for (std::size_t node = 0; node < grid.node_count(); ++node) {
      grid.node_indices(node, idx);
      bool inside = true;
      for (int k : idx) inside = inside && std::abs(k < n / 2 ? k : k - n) <= max_mode;
      if (!inside) continue;
      const double re = dist(rng);
      const double im = dist(rng);
      hat.at(c, node) = {re, im};
    }
  }
  FormField u = to_physical(hat);
  const double m = u.max_abs();
  if (m > 0.0) u *= 1.0 / m;
  return u;
}

}  // namespace formwave
