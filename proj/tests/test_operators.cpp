#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "formwave/cutoff.hpp"
#include "formwave/errors.hpp"
#include "formwave/fft.hpp"
#include "formwave/multi_index.hpp"
#include "formwave/operators.hpp"
#include "formwave/spectral_solver.hpp"
#include "support.hpp"

using namespace formwave;
using formwave::testing::l2;
using formwave::testing::random_vector;
using formwave::testing::rel;

namespace {

std::vector<double> random_point(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  std::vector<double> x(dim);
  for (auto& v : x) v = d(rng);
  return x;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("R of the constant 0-form is the position covector", "[R]") {
  const GridSpec g(3, 8, 2.0);
  FormField one(g, 0);
  for (auto& v : one.data()) v = 1.0;
  const FormField r = R_op(one);
  std::vector<double> x(3);
  for (std::size_t node = 0; node < g.node_count(); node += 13) {
    g.node_position(node, x);
    for (int a = 0; a < 3; ++a) CHECK(r.at(a, node) == cplx(x[a]));
  }
  for (int q = 0; q <= 3; ++q) {
    const FormField u = random_band_limited(g, q, 2, q + 1);
    CHECK(R_op(R_op(u)).max_abs() <= 1e-14);
    CHECK(T_op(T_op(u)).max_abs() <= 1e-14);
  }
  CHECK(T_op(FormField(g, 0)).trivial());
  CHECK(R_op(FormField(g, 3)).trivial());
}

TEST_CASE("pointwise algebra of R and T", "[R][T]") {
  std::mt19937_64 rng(42);
  for (int dim : {3, 5, 7}) {
    for (int q = 0; q < dim; ++q) {
      const std::size_t ne = binomial(dim, q);
      const std::size_t nh = binomial(dim, q + 1);
      for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_point(dim, rng);
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        const auto u = random_vector(ne, rng);
        const auto v = random_vector(nh, rng);
        // adjointness against the brute-force basis expansion
        const auto ru = pointwise::R(dim, q, x, u);
        const auto tv = pointwise::T(dim, q + 1, x, v);
        CHECK(std::abs(pointwise::inner(ru, v) - pointwise::inner(u, tv)) <= 1e-13 * (1 + r2) * 10);
        // TR + RT = r^2
        const auto tru = pointwise::T(dim, q + 1, x, ru);
        auto rtu = pointwise::R(dim, q - 1, x, pointwise::T(dim, q, x, u));
        if (q == 0) rtu.assign(ne, 0.0);
        std::vector<cplx> sum(ne), expect(ne);
        for (std::size_t c = 0; c < ne; ++c) {
          sum[c] = tru[c] + rtu[c];
          expect[c] = r2 * u[c];
        }
        CHECK(max_diff(sum, expect) <= 1e-13 * r2 * 10);
      }
    }
  }
}

TEST_CASE("T by composition equals the transpose table", "[T]") {
  for (int dim : {3, 5}) {
    const GridSpec g(dim, 8, 1.5);
    for (int q = 1; q <= dim; ++q) {
      const FormField v = random_band_limited(g, q, 2, 50 + q);
      CHECK(rel(T_op(v), T_transpose(v)) <= 1e-15);
    }
  }
}

TEST_CASE("S operator", "[S]") {
  const GridSpec g(3, 8, 2.0);
  for (int q = 0; q < 3; ++q) {
    const FormPair z = FormPair::zero(g, q);
    const FormPair sz = S_op(z);
    CHECK(sz.e.max_abs() == 0.0);
    CHECK(sz.h.max_abs() == 0.0);
    const FormPair p{random_band_limited(g, q, 2, 1), random_band_limited(g, q + 1, 2, 2)};
    const FormPair s2 = S_op(S_op(p));
    CHECK(rel(s2.e, T_op(R_op(p.e))) <= 1e-14);
    CHECK(rel(s2.h, R_op(T_op(p.h))) <= 1e-14);
    const FormPair sp = S_op(p);
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      double a = 0.0, b = 0.0;
      for (std::size_t c = 0; c < sp.e.component_count(); ++c) a += std::norm(sp.e.at(c, node));
      for (std::size_t c = 0; c < sp.h.component_count(); ++c) a += std::norm(sp.h.at(c, node));
      for (std::size_t c = 0; c < p.e.component_count(); ++c) b += std::norm(p.e.at(c, node));
      for (std::size_t c = 0; c < p.h.component_count(); ++c) b += std::norm(p.h.at(c, node));
      const double r = g.node_radius(node);
      REQUIRE(std::sqrt(a) <= r * std::sqrt(b) * (1 + 1e-13) + 1e-300);
    }
  }
}

TEST_CASE("Maxwell operator against Fourier symbols", "[M]") {
  const GridSpec g(3, 16, 2.0);
  for (int q = 0; q < 3; ++q) {
    const std::vector<cplx> ce(binomial(3, q), cplx(1.0, 1.0));
    const std::vector<cplx> ch(binomial(3, q + 1), cplx(-2.0, 0.5));
    const FormPair c{constant_form(g, q, ce), constant_form(g, q + 1, ch)};
    const FormPair mc = maxwell_M(c);
    CHECK(mc.e.max_abs() <= 1e-13);
    CHECK(mc.h.max_abs() <= 1e-13);

    const FormPair p{random_band_limited(g, q, 5, 7), random_band_limited(g, q + 1, 5, 8)};
    const FormPair mp = maxwell_M(p);
    const FormPair m2 = maxwell_M(mp);
    CHECK(rel(m2.e, div(rot(p.e))) <= 1e-13);
    CHECK(rel(m2.h, rot(div(p.h))) <= 1e-13);
    // box = Delta - M^2 is the complementary block
    const FormField box_e = laplacian(p.e) - m2.e;
    const FormField box_h = laplacian(p.h) - m2.h;
    CHECK(l2(box_e - rot(div(p.e))) <= 1e-10 * l2(laplacian(p.e)));
    CHECK(l2(box_h - div(rot(p.h))) <= 1e-10 * l2(laplacian(p.h)));

    // F(M p) = i S(xi) F(p) with S assembled per mode
    const FormField fe = to_fourier(p.e), fh = to_fourier(p.h);
    const FormField me = to_fourier(mp.e), mh = to_fourier(mp.h);
    const auto xi_axis = g.wavenumbers();
    const std::size_t ne = fe.component_count(), nh = fh.component_count();
    std::vector<int> idx(3);
    std::vector<double> xi(3);
    double err = 0.0, scale = 0.0;
    for (std::size_t node = 0; node < g.node_count(); ++node) {
      g.node_indices(node, idx);
      for (int a = 0; a < 3; ++a) xi[a] = xi_axis[idx[a]];
      const ModeSymbol sym(3, q, xi);
      Eigen::VectorXcd u(ne + nh), m(ne + nh);
      for (std::size_t c = 0; c < ne; ++c) u[c] = fe.at(c, node), m[c] = me.at(c, node);
      for (std::size_t c = 0; c < nh; ++c) u[ne + c] = fh.at(c, node), m[ne + c] = mh.at(c, node);
      const Eigen::VectorXcd rhs = cplx(0.0, 1.0) * (sym.S.cast<cplx>() * u);
      err += (m - rhs).squaredNorm();
      scale += m.squaredNorm();
    }
    CHECK(std::sqrt(err / scale) <= 1e-10);
  }
}

TEST_CASE("mode symbols", "[symbol]") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> d;
  for (int q = 0; q < 3; ++q) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> xi(3);
      for (auto& v : xi) v = d(rng);
      const ModeSymbol s(3, q, xi);
      CHECK((s.S - s.S.transpose()).norm() == 0.0);
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(s.T.rows(), s.T.rows());
      const Eigen::MatrixXd idh = Eigen::MatrixXd::Identity(s.R.rows(), s.R.rows());
      CHECK((s.T * s.R + (q > 0 ? Eigen::MatrixXd(ModeSymbol(3, q - 1, xi).R * ModeSymbol(3, q - 1, xi).T)
                                : Eigen::MatrixXd::Zero(id.rows(), id.cols())) -
             s.radius_squared * id)
                .norm() <= 1e-12 * s.radius_squared);
      (void)idh;
      const double r = std::sqrt(s.radius_squared);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.S);
      for (int k = 0; k < eig.eigenvalues().size(); ++k) {
        const double l = eig.eigenvalues()[k];
        const double dist = std::min({std::abs(l), std::abs(l - r), std::abs(l + r)});
        CHECK(dist <= 1e-10);
      }
    }
  }
}

TEST_CASE("product rules", "[product]") {
  const GridSpec g(3, 32, 5.0);
  const auto gauss = [](auto x) { return formwave::testing::gaussian(x); };
  for (int q = 0; q < 3; ++q) {
    const FormField e = formwave::testing::sampled(g, q, gauss, 1);
    const FormField h = formwave::testing::sampled(g, q + 1, gauss, 2);
    const RadialFunction one{[](double) { return 1.0; }, [](double) { return 0.0; }};
    CHECK(product_rule_check(one, e, h).max() <= 1e-15);
    const RadialFunction square{[](double r) { return r * r; }, [](double) { return 2.0; }};
    CHECK(product_rule_check(square, e, h).max() <= 1e-6);
  }
  // eta cut-off: small at n = 64 and decreasing with refinement
  double prev = 1.0;
  for (int n : {32, 64}) {
    const GridSpec gn(3, n, 4.0);
    const CutoffProfile eta(0.25, 3.75);
    const RadialFunction phi{[&](double r) { return eta(r); },
                             [&](double r) { return r > 0 ? eta.derivative(r) / r : 0.0; }};
    const FormField e = formwave::testing::sampled(gn, 1, gauss, 3);
    const FormField h = formwave::testing::sampled(gn, 2, gauss, 4);
    const double res = product_rule_check(phi, e, h).max();
    CHECK(res < prev);
    if (n == 64) CHECK(res <= 1e-4);
    prev = res;
  }
}

TEST_CASE("radiation defect", "[defect]") {
  const GridSpec g(3, 8, 2.0);
  CHECK(radiation_defect(FormPair::zero(g, 1)) == 0.0);
  // single-node H with E = 0: |T H / r|^2 + |H|^2 expanded by hand
  FormPair p = FormPair::zero(g, 1);
  std::vector<int> idx{5, 3, 6};
  const std::size_t node = g.node_at(idx);
  std::vector<double> x(3);
  g.node_position(node, x);
  const cplx h01(1.0, 0.5), h02(-0.3, 0.0), h12(0.0, 2.0);
  p.h.at(0, node) = h01;
  p.h.at(1, node) = h02;
  p.h.at(2, node) = h12;
  const double r = g.node_radius(node);
  // T H = i_x H: (x1 h01 + x2 h02) dx0 + (-x0 h01 + x2 h12) dx1 + (-x0 h02 - x1 h12) dx2
  const cplx t0 = x[1] * h01 + x[2] * h02;
  const cplx t1 = -x[0] * h01 + x[2] * h12;
  const cplx t2 = -x[0] * h02 - x[1] * h12;
  const double expect = (std::norm(t0) + std::norm(t1) + std::norm(t2)) / (r * r) +
                        std::norm(h01) + std::norm(h02) + std::norm(h12);
  CHECK(radiation_defect_density(p, node) == Catch::Approx(expect).epsilon(1e-14));
  CHECK(radiation_defect(p) * radiation_defect(p) ==
        Catch::Approx(expect * g.cell_volume()).epsilon(1e-13));
  // origin node: r^-1 S taken as zero
  FormPair o = FormPair::zero(g, 1);
  o.h.at(1, g.origin_node()) = 2.0;
  CHECK(radiation_defect_density(o, g.origin_node()) == Catch::Approx(4.0));
}

TEST_CASE("material maps", "[material]") {
  const GridSpec g(3, 16, 4.0);
  const MaterialMap id = MaterialMap::identity(g, 1);
  const FormPair p{random_band_limited(g, 1, 3, 1), random_band_limited(g, 2, 3, 2)};
  const FormPair q{random_band_limited(g, 1, 3, 3), random_band_limited(g, 2, 3, 4)};
  const FormPair ip = apply_material(id, p);
  CHECK(rel(ip.e, p.e) == 0.0);
  CHECK(rel(ip.h, p.h) == 0.0);

  const MaterialMap m = MaterialMap::compact_family(g, 1, 0.3, 1.0, 2.5);
  const auto rep = m.validated().check();
  CHECK(rep.admissible);
  CHECK(rep.symmetry_defect == 0.0);
  CHECK(rep.min_eigenvalue >= 0.7 - 1e-12);
  CHECK(m.perturbation_norm() == Catch::Approx(0.3));
  const FormPair lp = apply_material(m, p), lq = apply_material(m, q);
  const cplx a = inner_weighted(lp.e, q.e) + inner_weighted(lp.h, q.h);
  const cplx b = inner_weighted(p.e, lq.e) + inner_weighted(p.h, lq.h);
  CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
  const double pp = (inner_weighted(lp.e, p.e) + inner_weighted(lp.h, p.h)).real();
  CHECK(pp >= rep.min_eigenvalue * std::pow(norm_weighted(p), 2) * (1 - 1e-12));

  const MaterialMap dec = MaterialMap::decaying_family(g, 1, 0.2, 2.0);
  CHECK(dec.check().admissible);

  // deliberately non-symmetric and indefinite maps
  MaterialMap::Perturbation skew{3, {g.origin_node()}, {0, 0.5, 0, 0, 0, 0, 0, 0, 0}};
  MaterialMap::Perturbation none{3, {}, {}};
  const MaterialMap bad_sym(g, 1, skew, none, 0.0, 1.0);
  CHECK_FALSE(bad_sym.check().admissible);
  CHECK_THROWS_AS(bad_sym.validated(), Error);
  MaterialMap::Perturbation neg{3, {g.origin_node()}, {-2, 0, 0, 0, 0, 0, 0, 0, 0}};
  const MaterialMap bad_def(g, 1, neg, none, 0.0, 1.0);
  CHECK(bad_def.check().min_eigenvalue == Catch::Approx(-1.0));
  CHECK_THROWS_AS(bad_def.validated(), Error);

  // column dumps reproduce the map
  std::vector<FormField> cols;
  for (int j = 0; j < 3; ++j) {
    FormField e(g, 1);
    for (auto& v : e.component(j)) v = 1.0;
    cols.push_back(m.apply(e));
  }
  for (int j = 0; j < 3; ++j) {
    FormField h(g, 2);
    for (auto& v : h.component(j)) v = 1.0;
    cols.push_back(m.apply(h));
  }
  const MaterialMap loaded = MaterialMap::from_columns(cols, 0.0);
  const FormPair lm = apply_material(loaded, p);
  CHECK(rel(lm.e, lp.e) <= 1e-15);
  CHECK(rel(lm.h, lp.h) <= 1e-15);
}
