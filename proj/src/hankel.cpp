#include "formwave/hankel.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "formwave/errors.hpp"
#include "formwave/fft.hpp"
#include "formwave/kernels.hpp"
#include "formwave/multi_index.hpp"
#include "formwave/operators.hpp"

namespace formwave {

namespace {

constexpr cplx I{0.0, 1.0};

void require_odd_dim(int dim) {
  require(dim >= 3 && dim % 2 == 1, ErrorCode::invalid_argument,
          "kernel dimension must be odd and >= 3, got " + std::to_string(dim));
}

double factorial(int k) {
  double r = 1.0;
  for (int j = 2; j <= k; ++j) r *= j;
  return r;
}

double sphere_area(int dim) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

std::vector<cplx> profile_beta(int ell) {
  auto p = spherical_hankel_coefficients(ell);
  for (auto& c : p) c *= -I;
  return p;
}

}  // namespace

std::vector<cplx> spherical_hankel_coefficients(int ell) {
  require(ell >= 0, ErrorCode::invalid_argument, "Hankel order must be >= 0");
  // coefficients of P_l(w) in powers w^1..w^(l+1)
  std::vector<cplx> prev{1.0};  // h_{-1}: w
  std::vector<cplx> cur{-I};    // h_0: -i w
  for (int l = 0; l < ell; ++l) {
    std::vector<cplx> next(cur.size() + 1, 0.0);
    for (std::size_t k = 0; k < cur.size(); ++k) next[k + 1] += static_cast<double>(2 * l + 1) * cur[k];
    for (std::size_t k = 0; k < prev.size(); ++k) next[k] -= prev[k];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

std::vector<cplx> spherical_hankel_coefficients_closed(int ell) {
  require(ell >= 0, ErrorCode::invalid_argument, "Hankel order must be >= 0");
  std::vector<cplx> p(ell + 1);
  const cplx lead = std::pow(-I, ell + 1);
  for (int m = 0; m <= ell; ++m)
    p[m] = lead * std::pow(I, m) * factorial(ell + m) /
           (factorial(m) * std::ldexp(1.0, m) * factorial(ell - m));
  return p;
}

cplx spherical_hankel(int ell, cplx z) {
  const auto p = spherical_hankel_coefficients(ell);
  const cplx w = 1.0 / z;
  cplx sum = 0.0;
  for (int m = ell; m >= 0; --m) sum = (sum + p[m]) * w;
  return std::exp(I * z) * sum;
}

cplx hankel_half_integer(int ell, cplx z) {
  return std::sqrt(2.0 * z / std::numbers::pi) * spherical_hankel(ell, z);
}

double analytic_c_N(int dim) {
  require_odd_dim(dim);
  double dfact = 1.0;
  for (int k = dim - 4; k > 1; k -= 2) dfact *= k;
  return 1.0 / ((dim - 2) * sphere_area(dim) * dfact);
}

HankelKernel::HankelKernel(int dim, cplx omega) : HankelKernel(dim, omega, analytic_c_N(dim)) {}

HankelKernel::HankelKernel(int dim, cplx omega, double c_N) : dim_(dim) {
  require_odd_dim(dim);
  require(omega != 0.0, ErrorCode::zero_frequency, "kernel frequency must be nonzero");
  require(omega.imag() >= 0.0, ErrorCode::invalid_argument, "kernel frequency needs Im omega >= 0");
  require(std::isfinite(c_N) && c_N > 0.0, ErrorCode::invalid_argument, "c_N must be positive");
  profile_.wavenumber = omega;
  profile_.scale = c_N;
  profile_.ell = (dim - 3) / 2;
  profile_.beta = profile_beta(profile_.ell);
}

void HankelKernel::evaluate(double t, cplx& value, cplx& derivative) const {
  require(t > 0.0, ErrorCode::singular_evaluation, "kernel evaluated at t <= 0");
  profile_.evaluate(t, value, derivative);
}

cplx HankelKernel::phi(double t) const {
  cplx v, d;
  evaluate(t, v, d);
  return v;
}

cplx HankelKernel::phi_prime(double t) const {
  cplx v, d;
  evaluate(t, v, d);
  return d;
}

RadialProfile HankelKernel::conjugate_profile() const {
  RadialProfile c = profile_;
  c.wavenumber = -std::conj(profile_.wavenumber);
  for (int m = 0; m <= c.ell; ++m) c.beta[m] = std::conj(profile_.beta[m]) * ((c.ell - m) % 2 ? -1.0 : 1.0);
  return c;
}

BoundRatios kernel_bound_ratios(const HankelKernel& k, double t_min, double t_max, int samples) {
  require(t_min > 0.0 && t_max > t_min && samples >= 2, ErrorCode::invalid_argument,
          "bound probe needs 0 < t_min < t_max and at least two samples");
  const int N = k.dim();
  BoundRatios r;
  for (int j = 0; j < samples; ++j) {
    const double t = t_min * std::pow(t_max / t_min, static_cast<double>(j) / (samples - 1));
    cplx v, d;
    k.evaluate(t, v, d);
    const double far = std::pow(t, 0.5 * (1 - N));
    r.phi = std::max(r.phi, std::abs(v) / (std::pow(t, 2 - N) + far));
    r.phi_prime = std::max(r.phi_prime, std::abs(d) / (std::pow(t, 1 - N) + far));
  }
  return r;
}

double ode_residual(const HankelKernel& k, double t) {
  static constexpr double c2[] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
  const double s = 0.02 * std::min(t, 1.0 / std::max(1.0, std::abs(k.omega())));
  cplx d2 = c2[0] * k.phi(t);
  for (int j = 1; j <= 4; ++j) d2 += c2[j] * (k.phi(t + j * s) + k.phi(t - j * s));
  d2 /= s * s;
  cplx v, d;
  k.evaluate(t, v, d);
  const cplx first = static_cast<double>(k.dim() - 1) / t * d;
  const cplx zeroth = k.omega() * k.omega() * v;
  return std::abs(d2 + first + zeroth) / (std::abs(d2) + std::abs(first) + std::abs(zeroth));
}

void write_kernel_table(std::ostream& out, const HankelKernel& k, std::span<const double> t) {
  char buf[160];
  out << "t,re_phi,im_phi,re_dphi,im_dphi\n";
  for (double x : t) {
    cplx v, d;
    k.evaluate(x, v, d);
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x, v.real(), v.imag(), d.real(),
                  d.imag());
    out << buf;
  }
}

double lattice_zeta(int dim) {
  require_odd_dim(dim);
  // Ewald split of the Mellin integral at t = 1; s = N/2 - 1 so that 2s = N - 2.
  const double s = 0.5 * dim - 1.0;
  const double pi = std::numbers::pi;
  auto upper_gamma = [s](double x) {
    double g = std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x));
    for (double a = 0.5; a < s; a += 1.0) g = a * g + std::pow(x, a) * std::exp(-x);
    return g;
  };
  constexpr int reach = 6;
  double sum = 0.0;
  std::vector<int> n(dim, -reach);
  while (true) {
    long r2 = 0;
    for (int v : n) r2 += static_cast<long>(v) * v;
    if (r2 > 0) {
      const double x = pi * r2;
      sum += upper_gamma(x) * std::pow(x, -s) + std::exp(-x) / x;
    }
    int a = 0;
    while (a < dim && ++n[a] > reach) n[a++] = -reach;
    if (a == dim) break;
  }
  return std::pow(pi, s) / std::tgamma(s) * (-1.0 - 1.0 / s + sum);
}

PointSet window_points(const GridSpec& grid, double inner, double outer, int stride) {
  require(stride >= 1, ErrorCode::invalid_argument, "window stride must be >= 1");
  const int dim = grid.dim();
  const int half = grid.points_per_axis() / 2;
  PointSet ps;
  ps.dim = dim;
  std::vector<int> idx(dim);
  std::vector<double> x(dim);
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    grid.node_indices(node, idx);
    bool on = true;
    for (int a = 0; a < dim && on; ++a) on = (idx[a] - half) % stride == 0;
    if (!on) continue;
    const double r = grid.node_radius(node);
    if (r < inner || r > outer) continue;
    grid.node_position(node, x);
    ps.coords.insert(ps.coords.end(), x.begin(), x.end());
    ps.nodes.push_back(node);
  }
  return ps;
}

std::vector<cplx> form_convolution(const FormField& e, const FormField& h,
                                   std::span<const std::size_t> eval_nodes) {
  require_compatible(e, h);
  const GridSpec& grid = e.grid();
  const int dim = grid.dim();
  const int n = grid.points_per_axis();
  const int half = n / 2;
  std::vector<std::size_t> support;
  for (std::size_t node = 0; node < grid.node_count(); ++node)
    for (std::size_t c = 0; c < h.component_count(); ++c)
      if (h.at(c, node) != 0.0) {
        support.push_back(node);
        break;
      }
  std::vector<cplx> out(eval_nodes.size());
  std::vector<int> xi(dim), yi(dim), zi(dim);
  for (std::size_t p = 0; p < eval_nodes.size(); ++p) {
    grid.node_indices(eval_nodes[p], xi);
    cplx acc = 0.0;
    for (std::size_t y : support) {
      grid.node_indices(y, yi);
      bool inside = true;
      for (int a = 0; a < dim && inside; ++a) {
        zi[a] = xi[a] - yi[a] + half;
        inside = zi[a] >= 0 && zi[a] < n;
      }
      if (!inside) continue;
      const std::size_t z = grid.node_at(zi);
      for (std::size_t c = 0; c < h.component_count(); ++c) acc += e.at(c, z) * h.at(c, y);
    }
    out[p] = acc * grid.cell_volume();
  }
  return out;
}

namespace {

struct Support {
  std::vector<std::size_t> nodes;
  double radius = 0.0;
};

Support find_support(std::initializer_list<const FormField*> fields, double radius_cap = 0.0) {
  const FormField& first = **fields.begin();
  double scale = 0.0;
  for (const FormField* f : fields) scale = std::max(scale, f->max_abs());
  const double floor = 1e-10 * scale;
  Support s;
  for (std::size_t node = 0; node < first.node_count(); ++node) {
    bool hit = false;
    for (const FormField* f : fields)
      for (std::size_t c = 0; c < f->component_count() && !hit; ++c) hit = std::abs(f->at(c, node)) > floor;
    if (!hit) continue;
    if (radius_cap > 0.0 && first.grid().node_radius(node) > radius_cap) continue;
    s.nodes.push_back(node);
    s.radius = std::max(s.radius, first.grid().node_radius(node));
  }
  return s;
}

std::vector<cplx> gather(const FormField& u, const std::vector<std::size_t>& nodes) {
  const std::size_t nc = u.component_count();
  std::vector<cplx> out(nodes.size() * nc);
  for (std::size_t j = 0; j < nodes.size(); ++j)
    for (std::size_t c = 0; c < nc; ++c) out[j * nc + c] = u.at(c, nodes[j]);
  return out;
}

std::vector<double> positions(const GridSpec& grid, const std::vector<std::size_t>& nodes) {
  const int dim = grid.dim();
  std::vector<double> out(nodes.size() * dim);
  for (std::size_t j = 0; j < nodes.size(); ++j)
    grid.node_position(nodes[j], std::span<double>(out.data() + j * dim, dim));
  return out;
}

void require_points(const GridSpec& grid, const PointSet& points) {
  require(points.dim == grid.dim(), ErrorCode::grid_mismatch, "evaluation points have the wrong dimension");
}

}  // namespace

std::vector<cplx> kernel_convolution(const RadialProfile& kernel, const FormField& u,
                                     const PointSet& points, double exclusion) {
  const GridSpec& grid = u.grid();
  require_points(grid, points);
  require(u.space() == Space::physical, ErrorCode::wrong_space, "convolution needs physical data");
  const int dim = grid.dim();
  const int q = u.rank();
  const Support sup = find_support({&u});
  const auto pos = positions(grid, sup.nodes);
  const auto f = gather(u, sup.nodes);
  const std::vector<cplx> g(sup.nodes.size() * binomial(dim, q + 1), 0.0);
  // E-channel of the representation with only F = u active is -i omega (Phi * u).
  const cplx omega = kernel.wavenumber == 0.0 ? cplx(1.0) : kernel.wavenumber;
  kernels::SourceSet src{dim, q, pos, f, g, {}, {}, grid.cell_volume()};
  const std::size_t ne = binomial(dim, q), nh = binomial(dim, q + 1);
  std::vector<cplx> e(points.size() * ne), h(points.size() * nh);
  kernels::parallel::representation(src, kernel, omega, points.coords, exclusion, e, h);
  const cplx undo = 1.0 / (-I * omega);
  for (auto& v : e) v *= undo;
  return e;
}

PairSamples representation_solution(const FormField& F, const FormField& G, const HankelKernel& kernel,
                                    const PointSet& points, RepresentationOptions opts) {
  require(kernel.dim() == F.grid().dim(), ErrorCode::grid_mismatch, "kernel dimension differs from grid");
  return representation_solution(F, G, kernel.profile(), kernel.omega(), points, opts);
}

PairSamples representation_solution(const FormField& F, const FormField& G, const RadialProfile& kernel,
                                    cplx omega, const PointSet& points, RepresentationOptions opts) {
  const GridSpec& grid = F.grid();
  require(omega != 0.0, ErrorCode::zero_frequency, "representation needs omega != 0");
  require(G.grid() == grid, ErrorCode::grid_mismatch, "F and G live on different grids");
  require(G.rank() == F.rank() + 1, ErrorCode::rank_mismatch, "G must have rank q+1");
  require(F.space() == Space::physical && G.space() == Space::physical, ErrorCode::wrong_space,
          "representation needs physical data");
  require(kernel.ell == (grid.dim() - 3) / 2, ErrorCode::grid_mismatch, "kernel order does not match grid");
  require_points(grid, points);
  const int dim = grid.dim();
  const int q = F.rank();
  const FormField dF = div(F);
  const FormField rG = rot(G);
  // div F and rot G are gathered on the support of (F, G); their spectral tails outside it
  // are discretization noise.
  const Support sup = find_support({&F, &G}, opts.support_radius);
  const double h = grid.spacing();
  if (!opts.singular_correction) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      double r2 = 0.0;
      for (int a = 0; a < dim; ++a) r2 += points.coords[p * dim + a] * points.coords[p * dim + a];
      require(std::sqrt(r2) >= sup.radius + opts.guard_cells * h * (1.0 - 1e-12),
              ErrorCode::singular_evaluation,
              "evaluation point within " + std::to_string(opts.guard_cells) +
                  " cells of the source support; enable the singular correction");
    }
  }
  const auto pos = positions(grid, sup.nodes);
  const auto f = gather(F, sup.nodes);
  const auto g = gather(G, sup.nodes);
  const auto df = gather(dF, sup.nodes);
  const auto rg = gather(rG, sup.nodes);
  kernels::SourceSet src{dim, q, pos, f, g, df, rg, grid.cell_volume()};
  PairSamples out;
  out.rank = q;
  const std::size_t ne = binomial(dim, q), nh = binomial(dim, q + 1);
  out.e.assign(points.size() * ne, 0.0);
  out.h.assign(points.size() * nh, 0.0);
  kernels::parallel::representation(src, kernel, omega, points.coords, 0.5 * h, out.e,
                                    out.h);
  if (opts.singular_correction) {
    require(points.nodes.size() == points.size(), ErrorCode::invalid_argument,
            "singular correction needs grid-node evaluation points");
    const cplx lead = kernel.scale * kernel.beta[kernel.ell];  // phi ~ lead t^(2-N)
    if (opts.cell == CellCorrection::ball) {
      const double a2 = std::pow(grid.cell_volume() * dim / sphere_area(dim), 2.0 / dim);
      const cplx factor = -I * omega * lead * sphere_area(dim) * 0.5 * a2;
      for (std::size_t p = 0; p < points.size(); ++p) {
        const std::size_t node = points.nodes[p];
        for (std::size_t c = 0; c < ne; ++c) out.e[p * ne + c] += factor * F.at(c, node);
        for (std::size_t c = 0; c < nh; ++c) out.h[p * nh + c] += factor * G.at(c, node);
      }
    } else {
      // integral minus punctured sum: -Z h^2 f(0) for each t^(2-N) part, with the second
      // Taylor term of the phi'/t parts reduced by cubic symmetry to Z/N.
      const double zh2 = lattice_zeta(dim) * h * h;
      const cplx mass = I * omega * lead * zh2;
      const cplx grad = lead * static_cast<double>(2 - dim) * zh2 / static_cast<double>(dim);
      const cplx inv = -I / omega;
      const FormField dG = div(G);
      const FormField rF = rot(F);
      const FormField rdF = rot(dF);
      const FormField drG = div(rG);
      for (std::size_t p = 0; p < points.size(); ++p) {
        const std::size_t node = points.nodes[p];
        for (std::size_t c = 0; c < ne; ++c) {
          cplx v = mass * F.at(c, node) + grad * dG.at(c, node);
          if (!rdF.trivial()) v += inv * grad * rdF.at(c, node);
          out.e[p * ne + c] += v;
        }
        for (std::size_t c = 0; c < nh; ++c) {
          cplx v = mass * G.at(c, node) + grad * rF.at(c, node);
          if (!drG.trivial()) v += inv * grad * drG.at(c, node);
          out.h[p * nh + c] += v;
        }
      }
    }
  }
  return out;
}

std::vector<double> radiation_defect_samples(const PairSamples& u, const PointSet& points) {
  const int dim = points.dim;
  const int q = u.rank;
  const std::size_t ne = binomial(dim, q), nh = binomial(dim, q + 1);
  require(u.e.size() == points.size() * ne && u.h.size() == points.size() * nh, ErrorCode::invalid_argument,
          "samples do not match the point set");
  std::vector<double> out(points.size());
  std::vector<double> xi(dim);
  for (std::size_t p = 0; p < points.size(); ++p) {
    double r = 0.0;
    for (int a = 0; a < dim; ++a) r += points.coords[p * dim + a] * points.coords[p * dim + a];
    r = std::sqrt(r);
    require(r > 0.0, ErrorCode::singular_evaluation, "radiation defect at the origin");
    for (int a = 0; a < dim; ++a) xi[a] = points.coords[p * dim + a] / r;
    std::span<const cplx> e(u.e.data() + p * ne, ne), h(u.h.data() + p * nh, nh);
    const auto th = pointwise::T(dim, q + 1, xi, h);
    const auto re = pointwise::R(dim, q, xi, e);
    double s = 0.0;
    for (std::size_t c = 0; c < ne; ++c) s += std::norm(th[c] + e[c]);
    for (std::size_t c = 0; c < nh; ++c) s += std::norm(re[c] + h[c]);
    out[p] = s;
  }
  return out;
}

std::vector<double> magnitude_samples(const PairSamples& u, const PointSet& points) {
  const std::size_t n = points.size();
  require(n > 0 && u.e.size() % n == 0 && u.h.size() % n == 0, ErrorCode::invalid_argument,
          "samples do not match the point set");
  const std::size_t ne = u.e.size() / n, nh = u.h.size() / n;
  std::vector<double> out(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t c = 0; c < ne; ++c) out[p] += std::norm(u.e[p * ne + c]);
    for (std::size_t c = 0; c < nh; ++c) out[p] += std::norm(u.h[p * nh + c]);
  }
  return out;
}

double representation_residual(const FormField& F, const FormField& G, const HankelKernel& kernel,
                               const PointSet& points, double step, RepresentationOptions opts) {
  require(step > 0.0, ErrorCode::invalid_argument, "difference step must be positive");
  const int dim = points.dim;
  const int q = F.rank();
  const std::size_t np = points.size();
  const std::size_t ne = binomial(dim, q), nh = binomial(dim, q + 1);
  static constexpr double offsets[] = {-2.0, -1.0, 1.0, 2.0};
  static constexpr double weights[] = {1.0, -8.0, 8.0, -1.0};
  // stencil layout: centre block, then for each axis the four offsets
  PointSet stencil;
  stencil.dim = dim;
  stencil.coords = points.coords;
  for (int a = 0; a < dim; ++a)
    for (double o : offsets)
      for (std::size_t p = 0; p < np; ++p)
        for (int b = 0; b < dim; ++b)
          stencil.coords.push_back(points.coords[p * dim + b] + (a == b ? o * step : 0.0));
  const PairSamples u = representation_solution(F, G, kernel, stencil, opts);
  const bool on_grid = points.nodes.size() == np;
  const cplx i_omega = I * kernel.omega();
  std::vector<double> x(dim, 0.0);
  std::vector<cplx> de(ne), dh(nh);
  double num = 0.0, den = 0.0;
  for (std::size_t p = 0; p < np; ++p) {
    std::vector<cplx> rot_e(binomial(dim, q + 1), 0.0), div_h(ne, 0.0);
    for (int a = 0; a < dim; ++a) {
      std::fill(de.begin(), de.end(), 0.0);
      std::fill(dh.begin(), dh.end(), 0.0);
      for (int s = 0; s < 4; ++s) {
        const std::size_t sp = np + (static_cast<std::size_t>(a) * 4 + s) * np + p;
        const double w = weights[s] / (12.0 * step);
        for (std::size_t c = 0; c < ne; ++c) de[c] += w * u.e[sp * ne + c];
        for (std::size_t c = 0; c < nh; ++c) dh[c] += w * u.h[sp * nh + c];
      }
      std::fill(x.begin(), x.end(), 0.0);
      x[a] = 1.0;
      const auto r = pointwise::R(dim, q, x, de);
      const auto t = pointwise::T(dim, q + 1, x, dh);
      for (std::size_t c = 0; c < nh; ++c) rot_e[c] += r[c];
      for (std::size_t c = 0; c < ne; ++c) div_h[c] += t[c];
    }
    for (std::size_t c = 0; c < ne; ++c) {
      const cplx src = on_grid ? F.at(c, points.nodes[p]) : cplx(0.0);
      num += std::norm(div_h[c] + i_omega * u.e[p * ne + c] - src);
      den += std::norm(i_omega * u.e[p * ne + c]);
    }
    for (std::size_t c = 0; c < nh; ++c) {
      const cplx src = on_grid ? G.at(c, points.nodes[p]) : cplx(0.0);
      num += std::norm(rot_e[c] + i_omega * u.h[p * nh + c] - src);
      den += std::norm(i_omega * u.h[p * nh + c]);
    }
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

PairSamples sample_pair(const FormPair& p, const PointSet& points) {
  require(points.nodes.size() == points.size(), ErrorCode::invalid_argument,
          "sampling needs grid-node evaluation points");
  require(p.e.space() == Space::physical, ErrorCode::wrong_space, "sampling needs physical data");
  PairSamples s;
  s.rank = p.rank();
  const std::size_t ne = p.e.component_count(), nh = p.h.component_count();
  s.e.resize(points.size() * ne);
  s.h.resize(points.size() * nh);
  for (std::size_t j = 0; j < points.size(); ++j) {
    for (std::size_t c = 0; c < ne; ++c) s.e[j * ne + c] = p.e.at(c, points.nodes[j]);
    for (std::size_t c = 0; c < nh; ++c) s.h[j * nh + c] = p.h.at(c, points.nodes[j]);
  }
  return s;
}

double relative_difference(const PairSamples& a, const PairSamples& b) {
  require(a.e.size() == b.e.size() && a.h.size() == b.h.size(), ErrorCode::invalid_argument,
          "sample sets differ in size");
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < a.e.size(); ++j) {
    num += std::norm(a.e[j] - b.e[j]);
    den += std::norm(b.e[j]);
  }
  for (std::size_t j = 0; j < a.h.size(); ++j) {
    num += std::norm(a.h[j] - b.h[j]);
    den += std::norm(b.h[j]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

Calibration calibrate_c_N(const GridSpec& grid, const CutoffProfile& source, cplx omega,
                          double window_outer, double tol, int stride) {
  require(omega.imag() > 0.0, ErrorCode::invalid_argument, "calibration needs Im omega > 0");
  require(source.outer_radius() < grid.half_width() - 2.0 * grid.spacing(), ErrorCode::support_out_of_box,
          "calibration source does not fit in the box");
  const int dim = grid.dim();
  FormField rho(grid, 0);
  for (std::size_t node = 0; node < grid.node_count(); ++node)
    rho.at(0, node) = source.bump(grid.node_radius(node));

  FormField v = to_fourier(rho);
  const auto k = grid.wavenumbers();
  std::vector<int> idx(dim);
  for (std::size_t node = 0; node < grid.node_count(); ++node) {
    grid.node_indices(node, idx);
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += k[idx[a]] * k[idx[a]];
    v.at(0, node) /= omega * omega - r2;
  }
  v = to_physical(v);

  const PointSet pts = window_points(grid, source.outer_radius() + 2.0 * grid.spacing(), window_outer, stride);
  require(pts.size() > 0, ErrorCode::calibration_failed, "calibration window contains no nodes");
  HankelKernel unit(dim, omega, 1.0);
  const auto u = kernel_convolution(unit.profile(), rho, pts, 0.5 * grid.spacing());

  cplx uv = 0.0;
  double uu = 0.0, vv = 0.0;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const cplx vp = v.at(0, pts.nodes[p]);
    uv += std::conj(u[p]) * vp;
    uu += std::norm(u[p]);
    vv += std::norm(vp);
  }
  Calibration cal;
  cal.points = pts.size();
  cal.c_N = uv.real() / uu;
  double res = 0.0;
  for (std::size_t p = 0; p < pts.size(); ++p) res += std::norm(cal.c_N * u[p] - v.at(0, pts.nodes[p]));
  cal.residual = std::sqrt(res / vv);
  require(cal.c_N > 0.0 && cal.residual <= tol, ErrorCode::calibration_failed,
          "kernel calibration residual " + std::to_string(cal.residual) + " exceeds " + std::to_string(tol));
  return cal;
}

}  // namespace formwave
