#include "formwave/operators.hpp"

#include <algorithm>
#include <cmath>

#include "formwave/errors.hpp"
#include "formwave/kernels.hpp"
#include "formwave/multi_index.hpp"
#include "pointwise_detail.hpp"

namespace formwave {

namespace pointwise {

namespace {

std::vector<cplx> star(int dim, int rank, std::span<const cplx> u) {
  std::vector<cplx> out(binomial(dim, dim - rank));
  const auto& table = star_table(dim, rank);
  for (std::size_t c = 0; c < u.size(); ++c) out[table.target[c]] = static_cast<double>(table.sign[c]) * u[c];
  return out;
}

}  // namespace

std::vector<cplx> R(int dim, int rank, std::span<const double> x, std::span<const cplx> u) {
  const std::size_t out_size = binomial(dim, rank + 1);
  std::vector<cplx> out(out_size);
  if (out_size == 0) return out;
  require(u.size() == binomial(dim, rank), ErrorCode::rank_mismatch, "coefficient count mismatch");
  detail::wedge_point(covector_terms(dim, rank), x, u.data(), out.data(), out_size);
  return out;
}

std::vector<cplx> T(int dim, int rank, std::span<const double> x, std::span<const cplx> v) {
  // v has rank `rank`; the result has rank `rank - 1`.
  if (rank <= 0 || rank > dim) return std::vector<cplx>(binomial(dim, rank - 1));
  require(v.size() == binomial(dim, rank), ErrorCode::rank_mismatch, "coefficient count mismatch");
  const auto sv = star(dim, rank, v);
  const auto rsv = R(dim, dim - rank, x, sv);
  auto out = star(dim, dim - rank + 1, rsv);
  const double sign = codifferential_sign(dim, rank);
  for (auto& c : out) c *= sign;
  return out;
}

cplx inner(std::span<const cplx> u, std::span<const cplx> v) {
  cplx s = 0.0;
  for (std::size_t c = 0; c < u.size(); ++c) s += u[c] * std::conj(v[c]);
  return s;
}

}  // namespace pointwise

FormField R_op(const FormField& u) {
  require(u.space() == Space::physical, ErrorCode::wrong_space, "R acts on physical fields");
  if (u.trivial() || u.rank() >= u.grid().dim())
    return FormField(u.grid(), std::min(u.rank() + 1, u.grid().dim() + 1));
  FormField out(u.grid(), u.rank() + 1);
  const auto x = u.grid().coordinates();
  kernels::parallel::wedge_covector(u.grid(), u.rank(), {x, 1.0}, u.data(), out.data());
  return out;
}

FormField T_op(const FormField& v) {
  require(v.space() == Space::physical, ErrorCode::wrong_space, "T acts on physical fields");
  if (v.trivial() || v.rank() <= 0) return FormField(v.grid(), std::max(v.rank() - 1, -1));
  FormField out = hodge_star(R_op(hodge_star(v)));
  out *= static_cast<double>(codifferential_sign(v.grid().dim(), v.rank()));
  return out;
}

FormField T_transpose(const FormField& v) {
  require(v.space() == Space::physical, ErrorCode::wrong_space, "T acts on physical fields");
  if (v.trivial() || v.rank() <= 0) return FormField(v.grid(), std::max(v.rank() - 1, -1));
  FormField out(v.grid(), v.rank() - 1);
  const auto x = v.grid().coordinates();
  kernels::parallel::interior_covector(v.grid(), v.rank() - 1, {x, 1.0}, v.data(), out.data());
  return out;
}

FormPair S_op(const FormPair& p) { return {T_transpose(p.h), R_op(p.e)}; }

FormPair maxwell_M(const FormPair& p, Backend backend) {
  return {div(p.h, backend), rot(p.e, backend)};
}

FormPair apply_material(const MaterialMap& m, const FormPair& p) {
  require(m.rank() == p.rank(), ErrorCode::rank_mismatch, "material rank does not match the pair");
  return {m.apply(p.e), m.apply(p.h)};
}

double ProductRuleReport::max() const {
  return std::max({rot_residual, div_residual, maxwell_residual});
}

namespace {

std::vector<double> sample(const GridSpec& grid, const std::function<double(double)>& f) {
  std::vector<double> out(grid.node_count());
  for (std::size_t node = 0; node < out.size(); ++node) out[node] = f(grid.node_radius(node));
  return out;
}

double relative(const FormField& lhs, const FormField& a, const FormField& b) {
  const double scale = norm_weighted(a) + norm_weighted(b);
  const double res = norm_weighted(lhs - a - b);
  return scale > 0.0 ? res / scale : res;
}

}  // namespace

ProductRuleReport product_rule_check(const RadialFunction& phi, const FormField& e,
                                     const FormField& h, Backend backend) {
  require(e.grid() == h.grid(), ErrorCode::grid_mismatch, "fields on different grids");
  const auto value = sample(e.grid(), phi.value);
  const auto slope = sample(e.grid(), phi.derivative_over_r);
  ProductRuleReport report;
  const FormField rot_lhs = rot(multiply(value, e), backend);
  const FormField rot_a = multiply(value, rot(e, backend));
  const FormField rot_b = multiply(slope, R_op(e));
  const FormField div_lhs = div(multiply(value, h), backend);
  const FormField div_a = multiply(value, div(h, backend));
  const FormField div_b = multiply(slope, T_op(h));
  report.rot_residual = relative(rot_lhs, rot_a, rot_b);
  report.div_residual = relative(div_lhs, div_a, div_b);
  if (h.rank() == e.rank() + 1) {
    // M(phi e, phi h) = (div(phi h), rot(phi e)); S(e, h) = (T h, R e)
    const double scale = norm_weighted(FormPair{div_a, rot_a}) + norm_weighted(FormPair{div_b, rot_b});
    const double res = norm_weighted(FormPair{div_lhs - div_a - div_b, rot_lhs - rot_a - rot_b});
    report.maxwell_residual = scale > 0.0 ? res / scale : res;
  }
  return report;
}

namespace {

FormPair defect_field(const FormPair& p) {
  require(p.e.space() == Space::physical, ErrorCode::wrong_space, "defect needs physical fields");
  FormPair d = S_op(p);
  std::vector<double> inv_r(p.grid().node_count());
  for (std::size_t node = 0; node < inv_r.size(); ++node) {
    const double r = p.grid().node_radius(node);
    inv_r[node] = r > 0.0 ? 1.0 / r : 0.0;
  }
  d = FormPair{multiply(inv_r, d.e), multiply(inv_r, d.h)};
  d += p;
  return d;
}

}  // namespace

double radiation_defect(const FormPair& p, WeightSpec w, Window win) {
  return norm_weighted(defect_field(p), w, win);
}

double radiation_defect_density(const FormPair& p, std::size_t node) {
  const GridSpec& grid = p.grid();
  const int dim = grid.dim();
  const int q = p.rank();
  std::vector<double> x(dim);
  grid.node_position(node, x);
  const double r = grid.node_radius(node);
  std::vector<cplx> e(p.e.component_count()), h(p.h.component_count());
  for (std::size_t c = 0; c < e.size(); ++c) e[c] = p.e.at(c, node);
  for (std::size_t c = 0; c < h.size(); ++c) h[c] = p.h.at(c, node);
  std::vector<cplx> de = e, dh = h;
  if (r > 0.0) {
    const auto th = pointwise::T(dim, q + 1, x, h);
    const auto re = pointwise::R(dim, q, x, e);
    for (std::size_t c = 0; c < de.size(); ++c) de[c] += th[c] / r;
    for (std::size_t c = 0; c < dh.size(); ++c) dh[c] += re[c] / r;
  }
  return pointwise::inner(de, de).real() + pointwise::inner(dh, dh).real();
}

}  // namespace formwave
