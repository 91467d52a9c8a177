#pragma once

#include <functional>
#include <span>
#include <vector>

#include "formwave/forms.hpp"
#include "formwave/material.hpp"

namespace formwave {

// Pointwise radial operators on coefficient vectors at a single point x.
namespace pointwise {

/// R u = x_n dx^n ^ u for a rank-q coefficient vector.
std::vector<cplx> R(int dim, int rank, std::span<const double> x, std::span<const cplx> u);
/// T v = (-1)^(qN) * R * v; `rank` is the rank q+1 of v.
std::vector<cplx> T(int dim, int rank, std::span<const double> x, std::span<const cplx> v);
/// <u, v>_q with conjugation on v.
cplx inner(std::span<const cplx> u, std::span<const cplx> v);

}  // namespace pointwise

FormField R_op(const FormField& u);
/// Composition (-1)^(qN) * R * on a (q+1)-form.
FormField T_op(const FormField& v);
/// Transpose-table route to T_op; used by the solvers.
FormField T_transpose(const FormField& v);
/// S(E, H) = (T H, R E).
FormPair S_op(const FormPair& p);
/// M(E, H) = (div H, rot E).
FormPair maxwell_M(const FormPair& p, Backend backend = Backend::spectral);

FormPair apply_material(const MaterialMap& m, const FormPair& p);

/// Radial scalar phi(r) with phi'(r)/r supplied directly so r = 0 is well defined.
struct RadialFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative_over_r;
};

struct ProductRuleReport {
  double rot_residual = 0.0;  ///< relative residual of the rot identity
  double div_residual = 0.0;
  double maxwell_residual = 0.0;
  double max() const;
};

/// Residuals of rot(phi E) = phi rot E + phi'/r R E, its div analogue, and the
/// M analogue, for a q-form e and a (q+1)-form h.
ProductRuleReport product_rule_check(const RadialFunction& phi, const FormField& e,
                                     const FormField& h, Backend backend = Backend::spectral);

/// ||(r^-1 S + Id) p||_{L^2_s} over the window; r^-1 S is taken as 0 at the origin.
double radiation_defect(const FormPair& p, WeightSpec w = {}, Window win = {});
/// Pointwise |(r^-1 S + Id) p|^2 at node.
double radiation_defect_density(const FormPair& p, std::size_t node);

}  // namespace formwave
