#include <cmath>
#include <vector>

#include "formwave/kernels.hpp"
#include "formwave/multi_index.hpp"
#include "pointwise_detail.hpp"

namespace formwave::kernels::serial {

namespace {

std::size_t axis_stride(const GridSpec& grid, int axis) {
  std::size_t s = 1;
  for (int a = grid.dim() - 1; a > axis; --a) s *= grid.points_per_axis();
  return s;
}

}  // namespace

void wedge_covector(const GridSpec& grid, int rank, const SeparableCovector& a,
                    std::span<const cplx> in, std::span<cplx> out) {
  const std::size_t nodes = grid.node_count();
  const std::size_t n = grid.points_per_axis();
  for (auto& v : out) v = 0.0;
  for (const auto& t : covector_terms(grid.dim(), rank)) {
    const std::size_t stride = axis_stride(grid, t.axis);
    const cplx* src = in.data() + t.low * nodes;
    cplx* dst = out.data() + t.high * nodes;
    for (std::size_t node = 0; node < nodes; ++node) {
      const double x = a.values[(node / stride) % n];
      dst[node] += static_cast<double>(t.sign) * a.scale * x * src[node];
    }
  }
}

void interior_covector(const GridSpec& grid, int rank, const SeparableCovector& a,
                       std::span<const cplx> in, std::span<cplx> out) {
  const std::size_t nodes = grid.node_count();
  const std::size_t n = grid.points_per_axis();
  for (auto& v : out) v = 0.0;
  for (const auto& t : covector_terms(grid.dim(), rank)) {
    const std::size_t stride = axis_stride(grid, t.axis);
    const cplx* src = in.data() + t.high * nodes;
    cplx* dst = out.data() + t.low * nodes;
    for (std::size_t node = 0; node < nodes; ++node) {
      const double x = a.values[(node / stride) % n];
      dst[node] += static_cast<double>(t.sign) * a.scale * x * src[node];
    }
  }
}

cplx weighted_inner(const GridSpec& grid, double s, const RadialWindow& window,
                    std::span<const cplx> a, std::span<const cplx> b, std::size_t components) {
  const std::size_t nodes = grid.node_count();
  cplx sum = 0.0;
  for (std::size_t node = 0; node < nodes; ++node) {
    const double r = grid.node_radius(node);
    if (r < window.inner || r > window.outer) continue;
    cplx local = 0.0;
    for (std::size_t c = 0; c < components; ++c)
      local += a[c * nodes + node] * std::conj(b[c * nodes + node]);
    sum += std::pow(1.0 + r * r, s) * local;
  }
  return sum * grid.cell_volume();
}

void mode_solve(const GridSpec& grid, int rank, cplx omega, std::span<const cplx> f_e,
                std::span<const cplx> f_h, std::span<cplx> u_e, std::span<cplx> u_h) {
  const int dim = grid.dim();
  const std::size_t nodes = grid.node_count();
  const std::size_t ne = binomial(dim, rank);
  const std::size_t nh = binomial(dim, rank + 1);
  const auto& terms = covector_terms(dim, rank);
  const std::vector<double> xi_axis = grid.wavenumbers();
  std::vector<int> idx(dim);
  std::vector<double> xi(dim);
  std::vector<cplx> fe(ne), fh(nh), re(nh), th(ne), tre(ne), rth(nh);
  for (std::size_t node = 0; node < nodes; ++node) {
    grid.node_indices(node, idx);
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) {
      xi[a] = xi_axis[idx[a]];
      r2 += xi[a] * xi[a];
    }
    for (std::size_t c = 0; c < ne; ++c) fe[c] = f_e[c * nodes + node];
    for (std::size_t c = 0; c < nh; ++c) fh[c] = f_h[c * nodes + node];
    detail::wedge_point(terms, xi, fe.data(), re.data(), nh);
    detail::interior_point(terms, xi, fh.data(), th.data(), ne);
    detail::interior_point(terms, xi, re.data(), tre.data(), ne);
    detail::wedge_point(terms, xi, th.data(), rth.data(), nh);
    // (S + w)^-1 = (S^2 - w S + (w^2 - r^2)) / (w (w^2 - r^2)) since S^3 = r^2 S.
    const cplx gap = omega * omega - r2;
    const cplx factor = cplx(0.0, -1.0) / (omega * gap);
    for (std::size_t c = 0; c < ne; ++c)
      u_e[c * nodes + node] = factor * (tre[c] - omega * th[c] + gap * fe[c]);
    for (std::size_t c = 0; c < nh; ++c)
      u_h[c * nodes + node] = factor * (rth[c] - omega * re[c] + gap * fh[c]);
  }
}

void representation(const SourceSet& src, const RadialProfile& kernel, cplx omega,
                    std::span<const double> points, double exclusion, std::span<cplx> e_out,
                    std::span<cplx> h_out) {
  const int dim = src.dim;
  const int q = src.rank;
  const std::size_t n_m = binomial(dim, q - 1);
  const std::size_t ne = binomial(dim, q);
  const std::size_t nh = binomial(dim, q + 1);
  const std::size_t n_p = binomial(dim, q + 2);
  const std::size_t count = src.positions.size() / dim;
  const std::size_t n_points = points.size() / dim;
  const auto& t_q = covector_terms(dim, q);
  const auto& t_m = covector_terms(dim, q - 1);
  const auto& t_p = covector_terms(dim, q + 1);
  const bool has_div = !src.div_f.empty();
  const bool has_rot = !src.rot_g.empty();
  const cplx i_omega = cplx(0.0, 1.0) * omega;
  const cplx i_over_omega = cplx(0.0, 1.0) / omega;
  std::vector<double> z(dim);
  std::vector<cplx> tmp_e(ne), tmp_h(nh);
  for (std::size_t p = 0; p < n_points; ++p) {
    std::vector<cplx> acc_e(ne), acc_h(nh);
    for (std::size_t j = 0; j < count; ++j) {
      double t2 = 0.0;
      for (int a = 0; a < dim; ++a) {
        z[a] = points[p * dim + a] - src.positions[j * dim + a];
        t2 += z[a] * z[a];
      }
      const double t = std::sqrt(t2);
      if (t < exclusion || t == 0.0) continue;
      cplx phi, dphi;
      kernel.evaluate(t, phi, dphi);
      const cplx radial = dphi / t;
      const cplx* f = src.f.data() + j * ne;
      const cplx* g = src.g.data() + j * nh;
      detail::interior_point(t_q, z, g, tmp_e.data(), ne);
      for (std::size_t c = 0; c < ne; ++c) acc_e[c] += radial * tmp_e[c] - i_omega * phi * f[c];
      detail::wedge_point(t_q, z, f, tmp_h.data(), nh);
      for (std::size_t c = 0; c < nh; ++c) acc_h[c] += radial * tmp_h[c] - i_omega * phi * g[c];
      if (has_div && n_m > 0) {
        detail::wedge_point(t_m, z, src.div_f.data() + j * n_m, tmp_e.data(), ne);
        for (std::size_t c = 0; c < ne; ++c) acc_e[c] -= i_over_omega * radial * tmp_e[c];
      }
      if (has_rot && n_p > 0) {
        detail::interior_point(t_p, z, src.rot_g.data() + j * n_p, tmp_h.data(), nh);
        for (std::size_t c = 0; c < nh; ++c) acc_h[c] -= i_over_omega * radial * tmp_h[c];
      }
    }
    for (std::size_t c = 0; c < ne; ++c) e_out[p * ne + c] = src.weight * acc_e[c];
    for (std::size_t c = 0; c < nh; ++c) h_out[p * nh + c] = src.weight * acc_h[c];
  }
}

}  // namespace formwave::kernels::serial
