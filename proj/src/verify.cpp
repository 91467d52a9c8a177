#include "formwave/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "formwave/cutoff.hpp"
#include "formwave/errors.hpp"
#include "formwave/fft.hpp"
#include "formwave/field_io.hpp"
#include "formwave/forms.hpp"
#include "formwave/hankel.hpp"
#include "formwave/material.hpp"
#include "formwave/operators.hpp"
#include "formwave/spectral_solver.hpp"

namespace formwave {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double inf = std::numeric_limits<double>::infinity();

double l2(const FormField& u) {
  double s = 0.0;
  for (const cplx& v : u.data()) s += std::norm(v);
  return std::sqrt(s);
}

double l2(const FormPair& p) { return std::hypot(l2(p.e), l2(p.h)); }

double ratio(double num, double den) { return den > 0.0 ? num / den : num; }

std::string windowed(const std::string& name, double radius) {
  std::ostringstream s;
  s << name << "|r<=" << radius;
  return s.str();
}

class Clock {
 public:
  Clock(SolveReport& r, std::string phase)
      : report_(r), phase_(std::move(phase)), start_(std::chrono::steady_clock::now()) {}
  ~Clock() {
    const auto d = std::chrono::steady_clock::now() - start_;
    report_.timings.emplace_back(phase_, std::chrono::duration<double>(d).count());
  }

 private:
  SolveReport& report_;
  std::string phase_;
  std::chrono::steady_clock::time_point start_;
};

/// Row factory carrying the experiment context.
struct Rows {
  SolveReport& report;
  ReportRow base;

  void add(const std::string& quantity, double value, double tolerance, bool pass) {
    ReportRow r = base;
    r.quantity = quantity;
    r.value = value;
    r.tolerance = tolerance;
    r.pass = pass && std::isfinite(value);
    report.rows.push_back(std::move(r));
  }
  void at_most(const std::string& quantity, double value, double tolerance) {
    add(quantity, value, tolerance, value <= tolerance);
  }
  void info(const std::string& quantity, double value) { add(quantity, value, inf, true); }
};

ReportRow context(const SweepConfig& c) {
  ReportRow r;
  r.dim = c.dim;
  r.rank = c.rank;
  r.n = c.n;
  r.half_width = c.half_width;
  r.omega = c.omega;
  r.s = c.s;
  r.t_tilde = c.t_tilde;
  return r;
}

ReportRow context(const GridSpec& g, int rank) {
  ReportRow r;
  r.dim = g.dim();
  r.rank = rank;
  r.n = g.points_per_axis();
  r.half_width = g.half_width();
  return r;
}

FormPair make_data(const GridSpec& g, const SweepConfig& c) {
  if (!c.data_file_e.empty()) {
    FormPair f{read_field_file(c.data_file_e), read_field_file(c.data_file_h)};
    require(f.e.grid() == g && f.h.grid() == g, ErrorCode::grid_mismatch, "data files do not match the [grid] block");
    require(f.e.rank() == c.rank && f.h.rank() == c.rank + 1, ErrorCode::rank_mismatch,
            "data files must hold a rank q and a rank q+1 form");
    return f;
  }
  if (c.mode == DataMode::zero) return FormPair::zero(g, c.rank);
  const CutoffProfile prof(c.r1, c.r2);
  if (c.mode == DataMode::clean)
    return {make_bump_form(g, c.rank, prof, BumpMode::div_free, c.seed),
            make_bump_form(g, c.rank + 1, prof, BumpMode::rot_free, c.seed + 1)};
  return {make_bump_form(g, c.rank, prof, BumpMode::generic, c.seed),
          make_bump_form(g, c.rank + 1, prof, BumpMode::generic, c.seed + 1)};
}

/// Each component: two seeded plane waves with integer wave vectors below `max_mode`, so the
/// same function is band limited on every grid with n/2 > max_mode.
FormField trig_field(const GridSpec& g, int rank, int max_mode, std::uint64_t seed) {
  FormField u(g, rank);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> kd(-max_mode, max_mode);
  std::uniform_real_distribution<double> ad(-1.0, 1.0);
  const int dim = g.dim();
  const int n = g.points_per_axis();
  const std::vector<double> x = g.coordinates();
  std::vector<cplx> table(static_cast<std::size_t>(dim) * n);
  std::vector<int> idx(dim);
  for (std::size_t c = 0; c < u.component_count(); ++c) {
    for (int wave = 0; wave < 2; ++wave) {
      for (int a = 0; a < dim; ++a) {
        const int k = kd(rng);
        for (int j = 0; j < n; ++j) table[a * n + j] = std::exp(I * (std::numbers::pi * k * x[j] / g.half_width()));
      }
      const cplx amp{ad(rng), ad(rng)};
      for (std::size_t node = 0; node < g.node_count(); ++node) {
        g.node_indices(node, idx);
        cplx v = amp;
        for (int a = 0; a < dim; ++a) v *= table[a * n + idx[a]];
        u.at(c, node) += v;
      }
    }
  }
  return u;
}

FormPair solve_at(const FormPair& f, cplx omega, const MaterialMap* m, Rows* rows, const std::string& tag) {
  if (m == nullptr) return solve_whole_space_id(f, {omega});
  BornResult b = born_solve(f, {omega}, *m, 200, 1e-10);
  if (rows != nullptr) {
    rows->at_most(tag, b.report.residuals.empty() ? 0.0 : b.report.residuals.back(), 1e-8);
  }
  return std::move(b.solution);
}

MaterialMap make_material(const GridSpec& g, const SweepConfig& c) {
  if (!c.material_file.empty()) {
    MaterialMap m = MaterialMap::from_columns(read_field_records(c.material_file), c.material_tau);
    require(m.grid() == g && m.rank() == c.rank, ErrorCode::grid_mismatch,
            "material file does not match the [grid] block");
    m.validated();
    return m;
  }
  return MaterialMap::compact_family(g, c.rank, c.material_amplitude, c.material_r1, c.material_r2, c.seed + 20);
}

bool has_material(const SweepConfig& c) { return c.material_amplitude > 0.0 || !c.material_file.empty(); }

std::vector<double> geometric(double lo, double hi, int count) {
  std::vector<double> r(count);
  for (int j = 0; j < count; ++j) r[j] = lo * std::pow(hi / lo, count == 1 ? 0.0 : double(j) / (count - 1));
  return r;
}

PointSet sphere_points(int dim, double radius, int count, std::uint64_t seed) {
  PointSet p;
  p.dim = dim;
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double rho = std::sqrt(1.0 - z * z);
      p.coords.insert(p.coords.end(),
                      {radius * rho * std::cos(golden * i), radius * rho * std::sin(golden * i), radius * z});
    }
    return p;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(dim);
  for (int i = 0; i < count; ++i) {
    double r2 = 0.0;
    for (double& c : v) {
      c = nd(rng);
      r2 += c * c;
    }
    const double s = radius / std::sqrt(r2);
    for (double c : v) p.coords.push_back(s * c);
  }
  return p;
}

double shell_rms(const std::vector<double>& density) {
  double s = 0.0;
  for (double d : density) s += d;
  return std::sqrt(s / static_cast<double>(density.size()));
}

}  // namespace

bool SolveReport::passed() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

void SolveReport::append(const SolveReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  timings.insert(timings.end(), other.timings.begin(), other.timings.end());
}

void SweepConfig::validate() const {
  const auto check = [](bool ok, const std::string& what) { require(ok, ErrorCode::invalid_argument, what); };
  check(dim >= 3 && dim % 2 == 1, "grid.N must be odd and >= 3");
  check(rank >= 0 && rank < dim, "grid.q must lie in [0, N-1]");
  check(n >= 8 && n % 2 == 0, "grid.n must be even and >= 8");
  check(half_width > 0.0, "grid.L must be positive");
  check(r1 > 0.0 && r1 < r2, "data.r1 must lie in (0, data.r2)");
  check(r2 < half_width - 2.0 * (2.0 * half_width / n), "data.r2 must stay two cells inside the box");
  check(omega.imag() >= 0.0, "frequency.omega_im must be >= 0");
  check(omega.real() > 0.0 || omega.imag() > 0.0, "frequency.omega_re must be > 0 unless frequency.omega_im > 0");
  check(schedule_factor > 0.0 && schedule_factor < 1.0, "frequency.factor must lie in (0, 1)");
  check(schedule_steps >= 0, "frequency.steps must be >= 0");
  check(damping >= 0.0, "frequency.damping must be >= 0");
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    check(deltas[j] > 0.0, "frequency.deltas must be positive");
    check(j == 0 || deltas[j] < deltas[j - 1], "frequency.deltas must be strictly decreasing");
  }
  check(s > 0.5 && s < 0.5 * dim, "weights.s must lie in (1/2, N/2)");
  check(t_tilde < t(), "weights.t_tilde must be below t = s - (N+1)/2");
  check(window_fraction > 0.0 && window_fraction <= 1.0, "weights.window must lie in (0, 1]");
  check(material_amplitude >= 0.0 && material_amplitude < 1.0, "material.amplitude must lie in [0, 1)");
  check(material_amplitude == 0.0 || (material_r1 > 0.0 && material_r1 < material_r2),
        "material.r1 must lie in (0, material.r2)");
  check(data_file_e.empty() == data_file_h.empty(), "data.F_file and data.G_file must be given together");
  check(point_stride >= 1, "probe.stride must be >= 1");
  check(shell_min > 0.0 && shell_max > shell_min, "probe.shell_min must lie in (0, probe.shell_max)");
  check(shells >= 5, "probe.shells must be >= 5 for an exponent fit");
  check(shell_points >= 1, "probe.shell_points must be positive");
}

std::vector<cplx> SweepConfig::schedule() const {
  std::vector<cplx> w;
  double om = omega.real();
  for (int k = 0; k <= schedule_steps; ++k, om *= schedule_factor) w.emplace_back(om, damping * om);
  return w;
}

SolveReport run_identity_suite(const GridSpec& grid, int q, std::uint64_t seed, bool zero_data) {
  SolveReport rep;
  rep.command = "identities";
  Clock clock(rep, "identities");
  Rows rows{rep, context(grid, q)};
  const int n = grid.points_per_axis();
  const int max_mode = std::max(1, std::min(3, n / 4 - 1));
  const double tol = 1e-8;
  const auto scale = [zero_data](FormField u) {
    if (zero_data) u *= 0.0;
    return u;
  };

  {
    Clock phase(rep, "band_limited");
    const FormField u = scale(trig_field(grid, q, max_mode, seed));
    const FormField v = scale(trig_field(grid, q + 1, max_mode, seed + 7));
    const FormField lap_u = laplacian(u);
    const FormField lap_v = laplacian(v);
    const FormField ru = rot(u);
    const FormField dv = div(v);
    rows.at_most("rot_rot", ratio(l2(rot(ru)), l2(lap_u)), tol);
    rows.at_most("div_div", ratio(l2(div(dv)), l2(lap_v)), tol);
    rows.at_most("rot_div_plus_div_rot", ratio(l2(rot(div(u)) + div(ru) - lap_u), l2(lap_u)), tol);
    const cplx pi_sum = inner_weighted(ru, v) + inner_weighted(u, dv);
    rows.at_most("partial_integration",
                 ratio(std::abs(pi_sum), norm_weighted(ru) * norm_weighted(v) + norm_weighted(u) * norm_weighted(dv)),
                 tol);
  }

  {
    // product rules with a Gaussian radial factor, refined from n/2 to n
    Clock phase(rep, "product_rule");
    const double w = grid.half_width() / 4.0;
    const RadialFunction phi{[w](double r) { return std::exp(-r * r / (w * w)); },
                             [w](double r) { return -2.0 / (w * w) * std::exp(-r * r / (w * w)); }};
    double res[2] = {0.0, 0.0};
    int level = 0;
    for (const GridSpec& g : {GridSpec(grid.dim(), n / 2 >= 8 ? n / 2 : 8, grid.half_width()), grid}) {
      const FormField e = scale(trig_field(g, q, 1, seed + 3));
      const FormField h = scale(trig_field(g, q + 1, 1, seed + 5));
      res[level++] = product_rule_check(phi, e, h).max();
    }
    const bool small = res[1] <= tol;
    const double order = res[1] > 0.0 && res[0] > 0.0 ? std::log2(res[0] / res[1]) : inf;
    const bool ok = small || order >= 2.0;
    rows.add("product_rule", res[1], tol, ok);
    rows.add("product_rule_order", std::isfinite(order) ? order : 0.0, 2.0, ok);
  }

  {
    // Fourier correspondences on compactly supported data
    Clock phase(rep, "fourier");
    const CutoffProfile prof(grid.half_width() / 8.0, 0.45 * grid.half_width());
    const FormField u = scale(make_bump_form(grid, q, prof, BumpMode::generic, seed + 11));
    const FormField v = scale(make_bump_form(grid, q + 1, prof, BumpMode::generic, seed + 13));
    const FormField fu = continuous_fourier(u);
    const FormField fv = continuous_fourier(v);
    const FormPair fp{fu, fv};
    const auto rel = [](const FormField& a, const FormField& b) { return ratio(l2(a - b), l2(b)); };
    const auto relp = [](const FormPair& a, const FormPair& b) { return ratio(l2(a - b), l2(b)); };
    // M(u, v) = (div v, rot u), so its rows reuse the rot and div transforms
    const FormField f_rot = continuous_fourier(rot(u));
    const FormField f_div = continuous_fourier(div(v));
    rows.at_most("fourier_of_rot", rel(f_rot, I * R_op(fu)), tol);
    rows.at_most("fourier_of_div", rel(f_div, I * T_op(fv)), tol);
    rows.at_most("fourier_of_M", relp({f_div, f_rot}, I * S_op(fp)), tol);
    const FormField ru = R_op(u);
    const FormField tv = T_op(v);
    const FormField rot_f = rot(fu);
    const FormField div_f = div(fv);
    const FormField f_ru = continuous_fourier(ru);
    const FormField f_tv = continuous_fourier(tv);
    rows.at_most("rot_of_fourier", rel(rot_f, -I * f_ru), tol);
    rows.at_most("div_of_fourier", rel(div_f, -I * f_tv), tol);
    // S(u, v) = (T v, R u)
    rows.at_most("M_of_fourier", relp({div_f, rot_f}, -I * FormPair{f_tv, f_ru}), tol);
  }
  return rep;
}

SolveReport run_lowfreq_sweep(const SweepConfig& cfg) {
  cfg.validate();
  require(cfg.mode != DataMode::generic, ErrorCode::invalid_argument,
          "lowfreq needs data.mode = clean (div F = 0, rot G = 0)");
  SolveReport rep;
  rep.command = "lowfreq";
  Clock clock(rep, "lowfreq");
  const GridSpec g(cfg.dim, cfg.n, cfg.half_width);
  const FormPair f = make_data(g, cfg);
  const bool born = has_material(cfg);
  const MaterialMap m = born ? make_material(g, cfg) : MaterialMap::identity(g, cfg.rank);
  const Window win{0.0, cfg.window_radius()};
  const WeightSpec wt{cfg.t_tilde};
  Rows rows{rep, context(cfg)};
  rows.base.omega = 0.0;
  const FormPair u0 = born ? solve_static_material(f.e, f.h, m) : solve_static_id(f.e, f.h);
  const double n0 = norm_weighted(u0, wt, win);
  rows.info(windowed("static_norm", win.outer), n0);
  std::vector<double> deltas;
  for (cplx omega : cfg.schedule()) {
    rows.base.omega = omega;
    const FormPair u = solve_at(f, omega, born ? &m : nullptr, &rows, "born_residual");
    const double d = norm_weighted(u - u0, wt, win);
    const double prev = deltas.empty() ? inf : deltas.back();
    rows.add(windowed("lowfreq_delta", win.outer), d, prev, deltas.empty() || d < prev || (d == 0.0 && prev == 0.0));
    deltas.push_back(d);
  }
  rows.base.omega = cfg.schedule().back();
  rows.at_most("lowfreq_final_over_initial", ratio(deltas.back(), deltas.front()), 0.05);
  rows.at_most(windowed("lowfreq_final_over_static", win.outer), ratio(deltas.back(), n0), 1e-2);
  return rep;
}

SolveReport run_uniform_bound_probe(const SweepConfig& cfg) {
  cfg.validate();
  SolveReport rep;
  rep.command = "bound";
  Clock clock(rep, "bound");
  const GridSpec g(cfg.dim, cfg.n, cfg.half_width);
  const FormPair f = make_data(g, cfg);
  const Window win{0.0, cfg.window_radius()};
  const double data_norm = norm_weighted(f, WeightSpec{cfg.s});
  Rows rows{rep, context(cfg)};
  std::vector<double> ratios, x, y;
  for (cplx omega : cfg.schedule()) {
    rows.base.omega = omega;
    const FormPair u = solve_whole_space_id(f, {omega});
    const double r = ratio(norm_weighted(u, WeightSpec{cfg.t()}, win), data_norm);
    rows.info(windowed("bound_ratio", win.outer), r);
    ratios.push_back(r);
    x.push_back(std::log(std::abs(omega)));
    y.push_back(std::log(r));
  }
  rows.base.omega = cfg.schedule().back();
  double slope = 0.0;
  if (x.size() >= 2 && data_norm > 0.0) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      sx += x[j];
      sy += y[j];
      sxx += x[j] * x[j];
      sxy += x[j] * y[j];
    }
    slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  }
  if (cfg.mode != DataMode::generic) {
    double lo = inf, hi = 0.0;
    for (double r : ratios) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    rows.at_most("bound_spread", hi > 0.0 ? hi / lo : 1.0, 2.0);
    // no 1/omega growth without div F or rot G
    rows.add("bound_slope", slope, 0.2, std::abs(slope) <= 0.2);
  } else {
    rows.add("bound_slope", slope, 0.2, std::abs(slope + 1.0) <= 0.2);
  }
  return rep;
}

SolveReport run_oracle_equivalence(const SweepConfig& cfg) {
  cfg.validate();
  require(cfg.omega.imag() > 0.0, ErrorCode::invalid_argument, "oracle needs frequency.omega_im > 0");
  SolveReport rep;
  rep.command = "oracle";
  Clock clock(rep, "oracle");
  const HankelKernel kernel(cfg.dim, cfg.omega);
  const double h0 = 2.0 * cfg.half_width / cfg.n;
  const double inner = cfg.r2 + 2.0 * h0;
  const double outer = cfg.window_radius();
  require(inner < outer, ErrorCode::invalid_argument, "oracle window is empty: r2 + 2h exceeds the window");
  const double tol = cfg.dim == 3 ? 5e-3 : 2e-2;
  double previous = -1.0;
  for (int level = 0; level < (cfg.refine ? 2 : 1); ++level) {
    const int factor = 1 << level;
    const GridSpec g(cfg.dim, cfg.n * factor, cfg.half_width);
    Rows rows{rep, context(cfg)};
    rows.base.n = g.points_per_axis();
    const FormPair f = make_data(g, cfg);
    const PointSet pts = window_points(g, inner, outer, cfg.point_stride * factor);
    RepresentationOptions opts;
    opts.support_radius = cfg.r2;
    const PairSamples conv = representation_solution(f.e, f.h, kernel, pts, opts);
    const PairSamples spec = sample_pair(solve_whole_space_id(f, {cfg.omega}), pts);
    const double d = relative_difference(conv, spec);
    rows.info("oracle_points", static_cast<double>(pts.size()));
    if (level == 0)
      rows.at_most(windowed("oracle_rel_diff", outer), d, tol);
    else
      rows.at_most(windowed("oracle_rel_diff", outer), d, 0.5 * previous);
    previous = d;
  }
  return rep;
}

SolveReport run_radiation_probe(const SweepConfig& cfg) {
  cfg.validate();
  require(cfg.omega.imag() == 0.0 && cfg.omega.real() > 0.0, ErrorCode::invalid_argument,
          "radiation probe needs real omega > 0");
  SolveReport rep;
  rep.command = "radiation";
  Clock clock(rep, "radiation");
  const GridSpec g(cfg.dim, cfg.n, cfg.half_width);
  require(cfg.shell_min >= cfg.r2 + 2.0 * g.spacing(), ErrorCode::invalid_argument,
          "shells must start outside the source support");
  const FormPair f = make_data(g, cfg);
  const HankelKernel kernel(cfg.dim, cfg.omega);
  const RadialProfile incoming = kernel.conjugate_profile();
  RepresentationOptions opts;
  opts.support_radius = cfg.r2;
  const auto radii = geometric(cfg.shell_min, cfg.shell_max, cfg.shells);
  std::vector<double> field, defect, defect_in;
  for (double r : radii) {
    const PointSet pts = sphere_points(cfg.dim, r, cfg.shell_points, cfg.seed + 31);
    const PairSamples out = representation_solution(f.e, f.h, kernel, pts, opts);
    const PairSamples in = representation_solution(f.e, f.h, incoming, cfg.omega, pts, opts);
    field.push_back(shell_rms(magnitude_samples(out, pts)));
    defect.push_back(shell_rms(radiation_defect_samples(out, pts)));
    defect_in.push_back(shell_rms(radiation_defect_samples(in, pts)));
  }
  Rows rows{rep, context(cfg)};
  const RadialFit ff = fit_radial_exponent(radii, field);
  const RadialFit fd = fit_radial_exponent(radii, defect);
  const double field_target = -0.5 * (cfg.dim - 1);
  const double defect_bound = -0.5 * (cfg.dim + 1) + 0.3;
  rows.add("field_exponent", ff.slope, 0.3, std::abs(ff.slope - field_target) <= 0.3);
  rows.info("field_exponent_stderr", ff.stderr_slope);
  rows.at_most("defect_exponent", fd.slope, defect_bound);
  rows.info("defect_exponent_stderr", fd.stderr_slope);
  rows.add("defect_over_conjugate_defect", ratio(defect.back(), defect_in.back()), 1.0,
           defect.back() < defect_in.back());
  return rep;
}

SolveReport run_kernel_check(const SweepConfig& cfg) {
  cfg.validate();
  SolveReport rep;
  rep.command = "kernel-check";
  Clock clock(rep, "kernel-check");
  Rows rows{rep, context(cfg)};
  for (double re : {0.3, 1.0, 3.0}) {
    for (double im : {0.0, 0.3}) {
      const HankelKernel k(cfg.dim, cplx(re, im));
      rows.base.omega = k.omega();
      const BoundRatios a = kernel_bound_ratios(k, 1e-3, 50.0, 2000);
      const BoundRatios b = kernel_bound_ratios(k, 1e-3, 50.0, 4000);
      rows.info("phi_bound_ratio", b.phi);
      rows.at_most("phi_bound_stability", std::abs(b.phi / a.phi - 1.0), 0.1);
      rows.info("dphi_bound_ratio", b.phi_prime);
      rows.at_most("dphi_bound_stability", std::abs(b.phi_prime / a.phi_prime - 1.0), 0.1);
    }
  }
  rows.base.omega = 1.0;
  const HankelKernel unit(cfg.dim, 1.0);
  double ode = 0.0;
  for (double t : {0.5, 1.0, 5.0}) ode = std::max(ode, ode_residual(unit, t));
  rows.at_most("ode_residual", ode, 1e-8);

  double rec = 0.0;
  for (int ell = 0; ell <= 8; ++ell) {
    const auto a = spherical_hankel_coefficients(ell);
    const auto b = spherical_hankel_coefficients_closed(ell);
    for (std::size_t m = 0; m < a.size(); ++m) rec = std::max(rec, std::abs(a[m] - b[m]) / std::abs(b[m]));
  }
  for (cplx z : {cplx(0.7), cplx(2.5, 0.4), cplx(9.0, 1.0)}) {
    for (int ell = 1; ell <= 5; ++ell) {
      const cplx next = hankel_half_integer(ell + 1, z);
      const cplx comp = (2.0 * ell + 1.0) / z * hankel_half_integer(ell, z) - hankel_half_integer(ell - 1, z);
      rec = std::max(rec, std::abs(next - comp) / std::abs(next));
    }
  }
  rows.at_most("hankel_recurrence", rec, 1e-12);

  if (cfg.dim == 3) {
    const cplx omega = cfg.omega.imag() > 0.0 ? cfg.omega : cplx(0.6, 0.4);
    rows.base.omega = omega;
    const GridSpec g(3, cfg.n, cfg.half_width);
    const int stride = std::max(1, cfg.point_stride);
    Calibration cal;
    try {
      cal = calibrate_c_N(g, CutoffProfile(cfg.r1, cfg.r2), omega, cfg.window_radius(), 1e-3, stride);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::calibration_failed) throw;
      cal.residual = inf;
    }
    rows.at_most("calibration_residual", cal.residual, 1e-3);
    rows.at_most("calibrated_c_over_analytic", std::abs(cal.c_N / analytic_c_N(3) - 1.0), 1e-3);
  }
  return rep;
}

SolveReport run_solve(const SweepConfig& cfg, FormPair* solution) {
  cfg.validate();
  SolveReport rep;
  rep.command = "solve";
  Clock clock(rep, "solve");
  const GridSpec g(cfg.dim, cfg.n, cfg.half_width);
  const FormPair f = make_data(g, cfg);
  Rows rows{rep, context(cfg)};
  const Window win{0.0, cfg.window_radius()};
  if (!cfg.deltas.empty()) {
    require(cfg.omega.imag() == 0.0, ErrorCode::invalid_argument,
            "limiting absorption needs a real frequency.omega");
    require(!has_material(cfg), ErrorCode::invalid_argument, "limiting absorption runs with Lambda = Id only");
    const Window interior{0.0, cfg.r2};
    const AbsorptionResult res = limiting_absorption(f, cfg.omega.real(), cfg.deltas, interior);
    for (std::size_t j = 0; j < res.cauchy.size(); ++j) {
      rows.base.delta = cfg.deltas[j + 1];
      const double prev = j == 0 ? inf : res.cauchy[j - 1];
      rows.add(windowed("cauchy_difference", interior.outer), res.cauchy[j], prev, j == 0 || res.cauchy[j] < prev);
    }
    rows.base.delta = 0.0;
    rows.info(windowed("extrapolated_norm", win.outer), norm_weighted(res.quadratic, WeightSpec{cfg.t_tilde}, win));
    rows.info(windowed("extrapolation_spread", interior.outer),
              ratio(norm_weighted(res.quadratic - res.linear, {}, interior), norm_weighted(res.quadratic, {}, interior)));
    if (solution != nullptr) *solution = res.quadratic;
    return rep;
  }
  FormPair u;
  FormPair residual;
  const bool born = has_material(cfg);
  if (born) {
    const MaterialMap m = make_material(g, cfg);
    u = solve_at(f, cfg.omega, &m, &rows, "born_residual");
    residual = maxwell_M(u) + I * cfg.omega * apply_material(m, u) - f;
  } else {
    u = solve_whole_space_id(f, {cfg.omega});
    residual = maxwell_M(u) + I * cfg.omega * u - f;
  }
  rows.at_most("residual", ratio(l2(residual), l2(f)), born ? 1e-8 : 1e-9);
  rows.info(windowed("solution_norm", win.outer), norm_weighted(u, WeightSpec{cfg.t_tilde}, win));
  if (solution != nullptr) *solution = std::move(u);
  return rep;
}

SolveReport run_static(const SweepConfig& cfg) {
  cfg.validate();
  require(cfg.mode != DataMode::generic, ErrorCode::invalid_argument,
          "static needs data.mode = clean (div F = 0, rot G = 0)");
  SolveReport rep;
  rep.command = "static";
  Clock clock(rep, "static");
  const GridSpec g(cfg.dim, cfg.n, cfg.half_width);
  const FormPair f = make_data(g, cfg);
  Rows rows{rep, context(cfg)};
  rows.base.omega = 0.0;
  const double tol = 1e-8;
  if (has_material(cfg)) {
    const MaterialMap m = make_material(g, cfg);
    IterationReport it;
    const FormPair u = solve_static_material(f.e, f.h, m, &it);
    rows.info("iterations", it.iterations);
    rows.at_most("rot_E_minus_G", ratio(l2(rot(u.e) - f.h), l2(f.h)), tol);
    rows.at_most("div_eps_E", ratio(l2(div(m.apply(u.e))), l2(f.h)), tol);
    rows.at_most("div_H_minus_F", ratio(l2(div(u.h) - f.e), l2(f.e)), tol);
    rows.at_most("rot_mu_H", ratio(l2(rot(m.apply(u.h))), l2(f.e)), tol);
  } else {
    const FormPair u = solve_static_id(f.e, f.h);
    rows.at_most("rot_E_minus_G", ratio(l2(rot(u.e) - f.h), l2(f.h)), tol);
    rows.at_most("div_E", ratio(l2(div(u.e)), l2(f.h)), tol);
    rows.at_most("div_H_minus_F", ratio(l2(div(u.h) - f.e), l2(f.e)), tol);
    rows.at_most("rot_H", ratio(l2(rot(u.h)), l2(f.e)), tol);
  }
  return rep;
}

RadialFit fit_radial_exponent(std::span<const double> radii, std::span<const double> values) {
  require(radii.size() == values.size(), ErrorCode::invalid_argument, "radii and values differ in length");
  require(radii.size() >= 5, ErrorCode::insufficient_shells,
          "exponent fit needs at least 5 shells, got " + std::to_string(radii.size()));
  const double k = static_cast<double>(radii.size());
  double sx = 0, sy = 0;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    require(radii[j] > 0.0 && values[j] > 0.0, ErrorCode::invalid_argument, "exponent fit needs positive data");
    sx += std::log(radii[j]);
    sy += std::log(values[j]);
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double dx = std::log(radii[j]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(values[j]) - my);
  }
  RadialFit fit;
  fit.slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double e = std::log(values[j]) - my - fit.slope * (std::log(radii[j]) - mx);
    sse += e * e;
  }
  fit.stderr_slope = std::sqrt(sse / (k - 2.0) / sxx);
  return fit;
}

}  // namespace formwave
