#include "formwave/spectral_solver.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <string>

#include "formwave/errors.hpp"
#include "formwave/fft.hpp"
#include "formwave/kernels.hpp"
#include "formwave/multi_index.hpp"
#include "formwave/operators.hpp"

namespace formwave {

ModeSymbol::ModeSymbol(int dim, int rank, std::span<const double> xi) {
  const auto ne = static_cast<Eigen::Index>(binomial(dim, rank));
  const auto nh = static_cast<Eigen::Index>(binomial(dim, rank + 1));
  R = Eigen::MatrixXd::Zero(nh, ne);
  for (const auto& t : covector_terms(dim, rank)) R(t.high, t.low) += t.sign * xi[t.axis];
  T = R.transpose();
  S = Eigen::MatrixXd::Zero(ne + nh, ne + nh);
  S.topRightCorner(ne, nh) = T;
  S.bottomLeftCorner(nh, ne) = R;
  for (int a = 0; a < dim; ++a) radius_squared += xi[a] * xi[a];
}

namespace {

FormField fourier(const FormField& u) { return u.space() == Space::fourier ? u : to_fourier(u); }

double max_wavenumber(const GridSpec& g) { return std::numbers::pi * g.points_per_axis() / (2.0 * g.half_width()); }

std::vector<double> mode_radius_squared(const GridSpec& grid) {
  const auto xi = grid.wavenumbers();
  std::vector<double> r2(grid.node_count());
  std::vector<int> idx(grid.dim());
  for (std::size_t node = 0; node < r2.size(); ++node) {
    grid.node_indices(node, idx);
    double s = 0.0;
    for (int i : idx) s += xi[i] * xi[i];
    r2[node] = s;
  }
  return r2;
}

// out = A(xi) in with A the wedge (R) or interior (T) symbol; scale 1.
FormField symbol_wedge(const FormField& in) {
  FormField out(in.grid(), in.rank() + 1, Space::fourier);
  if (out.trivial() || in.trivial()) return out;
  const auto xi = in.grid().wavenumbers();
  kernels::parallel::wedge_covector(in.grid(), in.rank(), {xi, 1.0}, in.data(), out.data());
  return out;
}

FormField symbol_interior(const FormField& in) {
  FormField out(in.grid(), in.rank() - 1, Space::fourier);
  if (out.trivial() || in.trivial()) return out;
  const auto xi = in.grid().wavenumbers();
  kernels::parallel::interior_covector(in.grid(), in.rank() - 1, {xi, 1.0}, in.data(), out.data());
  return out;
}

void scale_modes(FormField& u, const std::vector<double>& r2, cplx factor) {
  for (std::size_t c = 0; c < u.component_count(); ++c) {
    auto comp = u.component(c);
    for (std::size_t k = 0; k < comp.size(); ++k)
      comp[k] = r2[k] > 0.0 ? comp[k] * (factor / r2[k]) : cplx{};
  }
}

double l2(const FormField& u) {
  double s = 0.0;
  for (const auto& v : u.data()) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace

FormPair solve_whole_space_id(const FormPair& f, FrequencySpec freq, double resonance_tol) {
  const cplx omega = freq.effective();
  require(freq.delta >= 0.0, ErrorCode::invalid_argument, "absorption delta must be non-negative");
  require(omega != cplx{}, ErrorCode::zero_frequency, "time-harmonic solve needs omega != 0");
  require(omega.imag() >= 0.0, ErrorCode::invalid_argument, "omega must lie in the closed upper half plane");
  const GridSpec& grid = f.grid();
  if (omega.imag() == 0.0) {
    const double w = std::abs(omega.real());
    for (double r2 : mode_radius_squared(grid))
      require(std::abs(std::sqrt(r2) - w) > resonance_tol, ErrorCode::resonant_mode,
              "a discrete wavenumber lies on the resonant sphere |xi| = |omega|");
  }
  const bool physical = f.e.space() == Space::physical;
  const FormField fe = fourier(f.e);
  const FormField fh = fourier(f.h);
  FormPair u = FormPair::zero(grid, f.rank(), Space::fourier);
  kernels::parallel::mode_solve(grid, f.rank(), omega, fe.data(), fh.data(), u.e.data(), u.h.data());
  if (!physical) return u;
  return {to_physical(u.e), to_physical(u.h)};
}

HelmholtzParts helmholtz_project(const FormField& u) {
  const bool physical = u.space() == Space::physical;
  const FormField uhat = fourier(u);
  const auto r2 = mode_radius_squared(u.grid());
  FormField irr = symbol_wedge(symbol_interior(uhat));
  FormField sol = symbol_interior(symbol_wedge(uhat));
  if (irr.trivial() || u.rank() == 0) irr = FormField(u.grid(), u.rank(), Space::fourier);
  if (sol.trivial() || u.rank() == u.grid().dim()) sol = FormField(u.grid(), u.rank(), Space::fourier);
  scale_modes(irr, r2, 1.0);
  scale_modes(sol, r2, 1.0);
  FormField mean(u.grid(), u.rank(), Space::fourier);
  for (std::size_t c = 0; c < mean.component_count(); ++c) mean.at(c, 0) = uhat.at(c, 0);
  if (!physical) return {std::move(irr), std::move(sol), std::move(mean)};
  return {to_physical(irr), to_physical(sol), to_physical(mean)};
}

FormPair solve_static_id(const FormField& F, const FormField& G, double tol) {
  require(G.rank() == F.rank() + 1, ErrorCode::rank_mismatch, "static data needs rank(G) = rank(F) + 1");
  require(F.grid() == G.grid(), ErrorCode::grid_mismatch, "static data on different grids");
  const bool physical = F.space() == Space::physical;
  const GridSpec& grid = F.grid();
  const FormField fhat = fourier(F);
  const FormField ghat = fourier(G);
  const double kmax = max_wavenumber(grid);
  const double fn = l2(fhat);
  const double gn = l2(ghat);
  require(l2(symbol_interior(fhat)) <= tol * kmax * fn, ErrorCode::not_solenoidal,
          "F must be divergence free");
  require(l2(symbol_wedge(ghat)) <= tol * kmax * gn, ErrorCode::not_irrotational,
          "G must be rotation free");
  for (std::size_t c = 0; c < fhat.component_count(); ++c)
    require(std::abs(fhat.at(c, 0)) <= tol * fn, ErrorCode::nonzero_mean, "F must have zero mean");
  for (std::size_t c = 0; c < ghat.component_count(); ++c)
    require(std::abs(ghat.at(c, 0)) <= tol * gn, ErrorCode::nonzero_mean, "G must have zero mean");
  const auto r2 = mode_radius_squared(grid);
  FormField e = symbol_interior(ghat);
  if (e.trivial()) e = FormField(grid, F.rank(), Space::fourier);
  FormField h = symbol_wedge(fhat);
  if (h.trivial()) h = FormField(grid, G.rank(), Space::fourier);
  scale_modes(e, r2, cplx(0.0, -1.0));
  scale_modes(h, r2, cplx(0.0, -1.0));
  if (!physical) return {std::move(e), std::move(h)};
  return {to_physical(e), to_physical(h)};
}

FormPair solve_static_material(const FormField& F, const FormField& G, const MaterialMap& m,
                               IterationReport* report, double tol, int max_iter) {
  require(F.space() == Space::physical, ErrorCode::wrong_space, "static material solve needs physical data");
  const FormPair base = solve_static_id(F, G);
  if (m.is_identity()) {
    if (report) *report = {{0.0}, 1};
    return base;
  }
  FormField e(F.grid(), F.rank());
  FormField h(F.grid(), G.rank());
  const double scale = norm_weighted(base) > 0.0 ? norm_weighted(base) : 1.0;
  IterationReport rep;
  for (int it = 1; it <= max_iter; ++it) {
    FormField e_next = helmholtz_project(m.apply_perturbation(base.e + e)).irrotational;
    FormField h_next = helmholtz_project(m.apply_perturbation(base.h + h)).solenoidal;
    e_next *= -1.0;
    h_next *= -1.0;
    const double change = norm_weighted(FormPair{e_next - e, h_next - h}) / scale;
    e = std::move(e_next);
    h = std::move(h_next);
    rep.residuals.push_back(change);
    rep.iterations = it;
    if (change <= tol) break;
    if (rep.residuals.size() >= 4) {
      const auto k = rep.residuals.size();
      if (rep.residuals[k - 1] > rep.residuals[k - 2] && rep.residuals[k - 2] > rep.residuals[k - 3] &&
          rep.residuals[k - 3] > rep.residuals[k - 4])
        fail(ErrorCode::diverged, "static material iteration is not contracting");
    }
    if (it == max_iter) fail(ErrorCode::max_iter, "static material iteration did not converge");
  }
  if (report) *report = rep;
  return {base.e + e, base.h + h};
}

BornResult born_solve(const FormPair& f, FrequencySpec freq, const MaterialMap& m, int max_iter,
                      double tol) {
  require(f.e.space() == Space::physical, ErrorCode::wrong_space, "Born solve needs physical data");
  require(m.rank() == f.rank() && m.grid() == f.grid(), ErrorCode::rank_mismatch,
          "material does not match the data");
  const cplx omega = freq.effective();
  const cplx io = cplx(0.0, 1.0) * omega;
  const double fn = norm_weighted(f);
  const double denom = fn > 0.0 ? fn : 1.0;
  BornResult out;
  out.solution = solve_whole_space_id(f, freq);
  int rising = 0;
  for (int it = 1;; ++it) {
    const FormPair lam = apply_material(m, out.solution);
    FormPair res = maxwell_M(out.solution);
    res += io * lam;
    res -= f;
    const double r = norm_weighted(res) / denom;
    auto& hist = out.report.residuals;
    rising = (!hist.empty() && r > hist.back()) ? rising + 1 : 0;
    hist.push_back(r);
    out.report.iterations = it;
    if (r <= tol) return out;
    if (rising >= 3)
      fail(ErrorCode::diverged, "Born residual rose for 3 consecutive iterations");
    if (it >= max_iter) fail(ErrorCode::max_iter, "Born iteration did not reach tolerance");
    FormPair rhs = f;
    FormPair pert{m.apply_perturbation(out.solution.e), m.apply_perturbation(out.solution.h)};
    rhs -= io * pert;
    out.solution = solve_whole_space_id(rhs, freq);
  }
}

FormPair richardson(std::span<const FormPair> samples, std::span<const double> deltas, int order) {
  require(samples.size() == deltas.size() && static_cast<int>(samples.size()) > order && order >= 0,
          ErrorCode::invalid_argument, "extrapolation needs order + 1 samples");
  const std::size_t first = samples.size() - order - 1;
  FormPair out = FormPair::zero(samples[0].grid(), samples[0].rank(), samples[0].e.space());
  for (std::size_t j = first; j < samples.size(); ++j) {
    double w = 1.0;
    for (std::size_t k = first; k < samples.size(); ++k)
      if (k != j) w *= deltas[k] / (deltas[k] - deltas[j]);
    out += cplx(w) * samples[j];
  }
  return out;
}

AbsorptionResult limiting_absorption(const FormPair& f, double omega, std::span<const double> deltas,
                                     Window window) {
  require(omega != 0.0, ErrorCode::zero_frequency, "limiting absorption needs omega != 0");
  require(deltas.size() >= 3, ErrorCode::invalid_argument, "limiting absorption needs >= 3 levels");
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    require(deltas[j] > 0.0, ErrorCode::invalid_argument, "absorption levels must be positive");
    require(j == 0 || deltas[j] < deltas[j - 1], ErrorCode::invalid_argument,
            "absorption levels must decrease");
  }
  std::vector<FormPair> sols;
  for (double d : deltas) sols.push_back(solve_whole_space_id(f, {cplx(omega, 0.0), d}));
  AbsorptionResult out;
  out.deltas.assign(deltas.begin(), deltas.end());
  for (std::size_t j = 0; j + 1 < sols.size(); ++j)
    out.cauchy.push_back(norm_weighted(sols[j + 1] - sols[j], {}, window));
  for (std::size_t j = 1; j < out.cauchy.size(); ++j)
    if (!(out.cauchy[j] < out.cauchy[j - 1] || out.cauchy[j] == 0.0))
      fail(ErrorCode::non_cauchy, "absorption differences stopped decreasing at level " +
                                      std::to_string(j + 1) + "; enlarge the box");
  out.linear = richardson(sols, deltas, 1);
  out.quadratic = richardson(sols, deltas, 2);
  return out;
}

}  // namespace formwave
