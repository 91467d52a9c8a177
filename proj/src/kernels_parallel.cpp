#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "formwave/kernels.hpp"
#include "formwave/multi_index.hpp"
#include "pointwise_detail.hpp"

namespace formwave::kernels {

namespace {

// Reductions sum fixed node blocks in order, so results do not depend on the
// thread count.
constexpr std::size_t reduction_block = 4096;

struct AxisWalker {
  int dim;
  std::size_t n;
  std::vector<int> idx;

  AxisWalker(const GridSpec& grid, std::size_t node)
      : dim(grid.dim()), n(grid.points_per_axis()), idx(grid.dim()) {
    grid.node_indices(node, idx);
  }
  void advance() {
    for (int a = dim - 1; a >= 0; --a) {
      if (static_cast<std::size_t>(++idx[a]) < n) return;
      idx[a] = 0;
    }
  }
};

}  // namespace

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

namespace parallel {

void wedge_covector(const GridSpec& grid, int rank, const SeparableCovector& a,
                    std::span<const cplx> in, std::span<cplx> out) {
  const int dim = grid.dim();
  const std::size_t nodes = grid.node_count();
  const std::size_t ni = binomial(dim, rank);
  const std::size_t no = binomial(dim, rank + 1);
  const auto& terms = covector_terms(dim, rank);
  const auto blocks = static_cast<long>((nodes + reduction_block - 1) / reduction_block);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < blocks; ++b) {
    const std::size_t begin = b * reduction_block;
    const std::size_t end = std::min(nodes, begin + reduction_block);
    AxisWalker walk(grid, begin);
    std::vector<cplx> av(dim), vin(ni), vout(no);
    for (std::size_t node = begin; node < end; ++node, walk.advance()) {
      for (int d = 0; d < dim; ++d) av[d] = a.scale * a.values[walk.idx[d]];
      for (std::size_t c = 0; c < ni; ++c) vin[c] = in[c * nodes + node];
      detail::wedge_point(terms, av, vin.data(), vout.data(), no);
      for (std::size_t c = 0; c < no; ++c) out[c * nodes + node] = vout[c];
    }
  }
}

void interior_covector(const GridSpec& grid, int rank, const SeparableCovector& a,
                       std::span<const cplx> in, std::span<cplx> out) {
  const int dim = grid.dim();
  const std::size_t nodes = grid.node_count();
  const std::size_t no = binomial(dim, rank);
  const std::size_t ni = binomial(dim, rank + 1);
  const auto& terms = covector_terms(dim, rank);
  const auto blocks = static_cast<long>((nodes + reduction_block - 1) / reduction_block);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < blocks; ++b) {
    const std::size_t begin = b * reduction_block;
    const std::size_t end = std::min(nodes, begin + reduction_block);
    AxisWalker walk(grid, begin);
    std::vector<cplx> av(dim), vin(ni), vout(no);
    for (std::size_t node = begin; node < end; ++node, walk.advance()) {
      for (int d = 0; d < dim; ++d) av[d] = a.scale * a.values[walk.idx[d]];
      for (std::size_t c = 0; c < ni; ++c) vin[c] = in[c * nodes + node];
      detail::interior_point(terms, av, vin.data(), vout.data(), no);
      for (std::size_t c = 0; c < no; ++c) out[c * nodes + node] = vout[c];
    }
  }
}

cplx weighted_inner(const GridSpec& grid, double s, const RadialWindow& window,
                    std::span<const cplx> a, std::span<const cplx> b, std::size_t components) {
  const std::size_t nodes = grid.node_count();
  const int dim = grid.dim();
  const std::vector<double> x = grid.coordinates();
  const auto blocks = static_cast<long>((nodes + reduction_block - 1) / reduction_block);
  std::vector<cplx> partial(blocks);
#pragma omp parallel for schedule(static)
  for (long blk = 0; blk < blocks; ++blk) {
    const std::size_t begin = blk * reduction_block;
    const std::size_t end = std::min(nodes, begin + reduction_block);
    AxisWalker walk(grid, begin);
    cplx sum = 0.0;
    for (std::size_t node = begin; node < end; ++node, walk.advance()) {
      double r2 = 0.0;
      for (int d = 0; d < dim; ++d) r2 += x[walk.idx[d]] * x[walk.idx[d]];
      const double r = std::sqrt(r2);
      if (r < window.inner || r > window.outer) continue;
      cplx local = 0.0;
      for (std::size_t c = 0; c < components; ++c)
        local += a[c * nodes + node] * std::conj(b[c * nodes + node]);
      sum += (s == 0.0 ? 1.0 : std::pow(1.0 + r2, s)) * local;
    }
    partial[blk] = sum;
  }
  cplx total = 0.0;
  for (const auto& p : partial) total += p;
  return total * grid.cell_volume();
}

void mode_solve(const GridSpec& grid, int rank, cplx omega, std::span<const cplx> f_e,
                std::span<const cplx> f_h, std::span<cplx> u_e, std::span<cplx> u_h) {
  const int dim = grid.dim();
  const std::size_t nodes = grid.node_count();
  const std::size_t ne = binomial(dim, rank);
  const std::size_t nh = binomial(dim, rank + 1);
  const auto& terms = covector_terms(dim, rank);
  const std::vector<double> xi_axis = grid.wavenumbers();
  const auto blocks = static_cast<long>((nodes + reduction_block - 1) / reduction_block);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < blocks; ++b) {
    const std::size_t begin = b * reduction_block;
    const std::size_t end = std::min(nodes, begin + reduction_block);
    AxisWalker walk(grid, begin);
    std::vector<double> xi(dim);
    std::vector<cplx> fe(ne), fh(nh), re(nh), th(ne), tre(ne), rth(nh);
    for (std::size_t node = begin; node < end; ++node, walk.advance()) {
      double r2 = 0.0;
      for (int a = 0; a < dim; ++a) {
        xi[a] = xi_axis[walk.idx[a]];
        r2 += xi[a] * xi[a];
      }
      for (std::size_t c = 0; c < ne; ++c) fe[c] = f_e[c * nodes + node];
      for (std::size_t c = 0; c < nh; ++c) fh[c] = f_h[c * nodes + node];
      detail::wedge_point(terms, xi, fe.data(), re.data(), nh);
      detail::interior_point(terms, xi, fh.data(), th.data(), ne);
      detail::interior_point(terms, xi, re.data(), tre.data(), ne);
      detail::wedge_point(terms, xi, th.data(), rth.data(), nh);
      const cplx gap = omega * omega - r2;
      const cplx factor = cplx(0.0, -1.0) / (omega * gap);
      for (std::size_t c = 0; c < ne; ++c)
        u_e[c * nodes + node] = factor * (tre[c] - omega * th[c] + gap * fe[c]);
      for (std::size_t c = 0; c < nh; ++c)
        u_h[c * nodes + node] = factor * (rth[c] - omega * re[c] + gap * fh[c]);
    }
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
  const auto n_points = static_cast<long>(points.size() / dim);
  const auto& t_q = covector_terms(dim, q);
  const auto& t_m = covector_terms(dim, q - 1);
  const auto& t_p = covector_terms(dim, q + 1);
  const bool has_div = !src.div_f.empty() && n_m > 0;
  const bool has_rot = !src.rot_g.empty() && n_p > 0;
  const cplx i_omega = cplx(0.0, 1.0) * omega;
  const cplx i_over_omega = cplx(0.0, 1.0) / omega;
  const double excl2 = exclusion * exclusion;
#pragma omp parallel
  {
    std::vector<double> z(dim);
    std::vector<cplx> acc_e(ne), acc_h(nh), tmp_e(ne), tmp_h(nh);
#pragma omp for schedule(dynamic, 8)
    for (long p = 0; p < n_points; ++p) {
      std::fill(acc_e.begin(), acc_e.end(), cplx{});
      std::fill(acc_h.begin(), acc_h.end(), cplx{});
      const double* x = points.data() + p * dim;
      for (std::size_t j = 0; j < count; ++j) {
        const double* y = src.positions.data() + j * dim;
        double t2 = 0.0;
        for (int a = 0; a < dim; ++a) {
          z[a] = x[a] - y[a];
          t2 += z[a] * z[a];
        }
        if (t2 < excl2 || t2 == 0.0) continue;
        const double t = std::sqrt(t2);
        cplx phi, dphi;
        kernel.evaluate(t, phi, dphi);
        const cplx radial = dphi / t;
        const cplx mass = i_omega * phi;
        const cplx* f = src.f.data() + j * ne;
        const cplx* g = src.g.data() + j * nh;
        detail::interior_point(t_q, z, g, tmp_e.data(), ne);
        for (std::size_t c = 0; c < ne; ++c) acc_e[c] += radial * tmp_e[c] - mass * f[c];
        detail::wedge_point(t_q, z, f, tmp_h.data(), nh);
        for (std::size_t c = 0; c < nh; ++c) acc_h[c] += radial * tmp_h[c] - mass * g[c];
        if (has_div) {
          detail::wedge_point(t_m, z, src.div_f.data() + j * n_m, tmp_e.data(), ne);
          for (std::size_t c = 0; c < ne; ++c) acc_e[c] -= i_over_omega * radial * tmp_e[c];
        }
        if (has_rot) {
          detail::interior_point(t_p, z, src.rot_g.data() + j * n_p, tmp_h.data(), nh);
          for (std::size_t c = 0; c < nh; ++c) acc_h[c] -= i_over_omega * radial * tmp_h[c];
        }
      }
      for (std::size_t c = 0; c < ne; ++c) e_out[p * ne + c] = src.weight * acc_e[c];
      for (std::size_t c = 0; c < nh; ++c) h_out[p * nh + c] = src.weight * acc_h[c];
    }
  }
}

}  // namespace parallel

}  // namespace formwave::kernels
