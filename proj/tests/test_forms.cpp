#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "formwave/cutoff.hpp"
#include "formwave/errors.hpp"
#include "formwave/field_io.hpp"
#include "formwave/forms.hpp"
#include "formwave/multi_index.hpp"
#include "support.hpp"

using namespace formwave;
using formwave::testing::l2;
using formwave::testing::rel;

namespace {

FormField basis_form(const GridSpec& g, std::initializer_list<int> idx) {
  const MultiIndexBasis b(g.dim(), static_cast<int>(idx.size()));
  FormField u(g, static_cast<int>(idx.size()));
  const std::vector<int> v(idx);
  for (auto& x : u.component(b.position(v))) x = 1.0;
  return u;
}

}  // namespace

TEST_CASE("grid geometry", "[grid]") {
  const GridSpec g(3, 8, 2.0);
  CHECK(g.spacing() == 0.5);
  CHECK(g.node_count() == 512);
  CHECK(g.node_radius(g.origin_node()) == 0.0);
  CHECK(g.wavenumber(4) == Catch::Approx(-std::numbers::pi * 4 / 2.0));
  std::vector<int> idx(3);
  g.node_indices(77, idx);
  CHECK(g.node_at(idx) == 77);
  CHECK_THROWS_AS(GridSpec(4, 8, 1.0), Error);
  CHECK_THROWS_AS(GridSpec(3, 9, 1.0), Error);
  CHECK_THROWS_AS(GridSpec(3, 8, 0.0), Error);
}

TEST_CASE("multi-index basis is lexicographic with consistent signs", "[basis]") {
  for (int dim : {3, 5, 7}) {
    for (int q = 0; q <= dim; ++q) {
      const MultiIndexBasis b(dim, q);
      REQUIRE(b.size() == binomial(dim, q));
      for (std::size_t p = 0; p < b.size(); ++p) {
        const auto idx = b.index(p);
        for (std::size_t j = 1; j < idx.size(); ++j) CHECK(idx[j - 1] < idx[j]);
        CHECK(b.position(idx) == p);
        if (p > 0) CHECK(b.index(p - 1) < idx);
      }
    }
  }
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> seq(6);
    for (int j = 0; j < 6; ++j) seq[j] = j;
    std::shuffle(seq.begin(), seq.end(), rng);
    // brute force: count transpositions of a bubble sort
    auto work = seq;
    int swaps = 0;
    for (std::size_t i = 0; i < work.size(); ++i)
      for (std::size_t j = 0; j + 1 < work.size() - i; ++j)
        if (work[j] > work[j + 1]) std::swap(work[j], work[j + 1]), ++swaps;
    CHECK(permutation_sign(seq) == (swaps % 2 ? -1 : 1));
  }
  const std::vector<int> repeated{1, 2, 1};
  CHECK(permutation_sign(repeated) == 0);
}

TEST_CASE("wedge product", "[wedge]") {
  const GridSpec g(3, 8, 1.0);
  const FormField w = wedge(basis_form(g, {0}), basis_form(g, {1}));
  const MultiIndexBasis b2(3, 2);
  const std::vector<int> i01{0, 1};
  CHECK(w.at(b2.position(i01), 5) == cplx(1.0));
  CHECK(l2(wedge(basis_form(g, {1}), basis_form(g, {0})) + w) == 0.0);

  const GridSpec g5(5, 8, 1.0);
  for (int p = 0; p <= 3; ++p) {
    for (int q = 0; p + q <= 5; ++q) {
      const FormField u = random_band_limited(g5, p, 2, 10 + p);
      const FormField v = random_band_limited(g5, q, 2, 20 + q);
      FormField vu = wedge(v, u);
      vu *= ((p * q) % 2 ? -1.0 : 1.0);
      CHECK(rel(wedge(u, v), vu) < 1e-15);
    }
  }
  const FormField v = random_band_limited(g, 2, 2, 4);
  FormField c(g, 0);
  for (auto& x : c.data()) x = cplx(2.0, -1.0);
  CHECK(rel(wedge(c, v), cplx(2.0, -1.0) * v) < 1e-15);
  CHECK_THROWS_AS(wedge(random_band_limited(g, 2, 1, 1), random_band_limited(g, 2, 1, 2)), Error);
  CHECK_THROWS_AS(wedge(FormField(g, 1), FormField(GridSpec(3, 10, 1.0), 1)), Error);
}

TEST_CASE("hodge star", "[star]") {
  const GridSpec g(3, 8, 1.0);
  CHECK(rel(hodge_star(basis_form(g, {0})), basis_form(g, {1, 2})) == 0.0);
  FormField one(g, 0);
  for (auto& x : one.data()) x = 1.0;
  CHECK(rel(hodge_star(one), basis_form(g, {0, 1, 2})) == 0.0);
  for (int dim : {3, 5}) {
    const GridSpec gd(dim, 8, 1.0);
    for (int q = 0; q <= dim; ++q) {
      const FormField u = random_band_limited(gd, q, 1, 7 + q);
      FormField expect = u;
      expect *= ((q * (dim - q)) % 2 ? -1.0 : 1.0);
      CHECK(rel(hodge_star(hodge_star(u)), expect) == 0.0);
      const MultiIndexBasis b(dim, q);
      for (std::size_t p = 0; p < b.size(); ++p) {
        FormField e(gd, q);
        for (auto& x : e.component(p)) x = 1.0;
        const FormField vol = wedge(e, hodge_star(e));
        CHECK(vol.at(0, 0) == cplx(1.0));
      }
    }
  }
}

TEST_CASE("weighted inner product", "[inner]") {
  const GridSpec g(3, 8, 1.5);
  for (int q = 0; q <= 3; ++q) {
    const MultiIndexBasis b(3, q);
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        FormField u(g, q), v(g, q);
        for (auto& x : u.component(i)) x = 1.0;
        for (auto& x : v.component(j)) x = 1.0;
        const double vol = std::pow(3.0, 3);
        CHECK(inner_weighted(u, v).real() == Catch::Approx(i == j ? vol : 0.0).margin(1e-12));
      }
    }
  }
  const std::vector<cplx> c{cplx(1.0, 2.0), cplx(0.5, 0.0), cplx(0.0, -1.0)};
  const FormField u = constant_form(g, 1, c);
  CHECK(norm_weighted(u) * norm_weighted(u) == Catch::Approx((5.0 + 0.25 + 1.0) * 27.0));

  // rho^2 |exp(-r^2)|^2 against a 1-D radial Simpson rule
  const GridSpec fine(3, 48, 6.0);
  const FormField gauss = formwave::testing::sampled(fine, 0, [](auto x) {
    return formwave::testing::gaussian(x);
  });
  const double coeff2 = std::norm(gauss.at(0, fine.origin_node()));
  const int m = 20000;
  const double rmax = 10.0, dr = rmax / m;
  double radial = 0.0;
  for (int k = 0; k <= m; ++k) {
    const double r = k * dr;
    const double w = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    radial += w * (1.0 + r * r) * std::exp(-2.0 * r * r) * r * r;
  }
  radial *= dr / 3.0 * 4.0 * std::numbers::pi * coeff2;
  CHECK(std::abs(inner_weighted(gauss, gauss, {1.0}).real() / radial - 1.0) <= 1e-6);
}

TEST_CASE("rot and div identities", "[rot][div]") {
  const GridSpec g(3, 16, 2.0);
  const std::vector<cplx> c{cplx(1.0), cplx(2.0), cplx(-3.0)};
  CHECK(rot(constant_form(g, 1, c)).max_abs() < 1e-13);
  CHECK(div(constant_form(g, 1, c)).max_abs() < 1e-13);
  for (int q = 0; q <= 3; ++q) {
    const FormField u = random_band_limited(g, q, 5, 30 + q);
    CHECK(rot(rot(u)).max_abs() < 1e-11);
    CHECK(div(div(u)).max_abs() < 1e-11);
    CHECK(rel(div(u), div_symbol(u)) < 1e-13);
    const FormField lap = rot(div(u)) + div(rot(u));
    CHECK(rel(lap, laplacian(u)) <= 1e-10);
  }
  CHECK(rot(FormField(g, 3)).trivial());
  CHECK(div(FormField(g, 0)).trivial());

  // d/dx1 sin(2 pi x1 / L) matched against a fine difference quotient of the formula
  const double L = 1.0;
  const GridSpec gs(3, 16, L);
  const double k = 2.0 * std::numbers::pi / L;
  const FormField s = formwave::testing::sampled(gs, 0, [&](auto x) { return std::sin(k * x[0]); });
  const FormField ds = rot(s);
  const double eps = 1e-4;
  std::vector<double> x(3);
  double err = 0.0, scale = 0.0;
  const cplx amp = s.at(0, 0) / std::sin(k * gs.coordinate(0));
  for (std::size_t node = 0; node < gs.node_count(); node += 7) {
    gs.node_position(node, x);
    const cplx oracle = amp * (std::sin(k * (x[0] + eps)) - std::sin(k * (x[0] - eps))) / (2 * eps);
    err = std::max(err, std::abs(ds.at(0, node) - oracle));
    scale = std::max(scale, std::abs(oracle));
    CHECK(std::abs(ds.at(1, node)) < 1e-12);
  }
  CHECK(err / scale <= 1e-6);
}

TEST_CASE("partial integration", "[by-parts]") {
  const GridSpec g(3, 32, 4.0);
  const CutoffProfile eta(1.0, 2.5);
  for (int q = 0; q < 3; ++q) {
    const FormField e = make_bump_form(g, q, eta, BumpMode::generic, 3);
    const FormField h = make_bump_form(g, q + 1, eta, BumpMode::generic, 4);
    const cplx lhs = inner_weighted(rot(e), h) + inner_weighted(e, div(h));
    const double graph = std::sqrt(std::pow(norm_weighted(h), 2) + std::pow(norm_weighted(div(h)), 2));
    CHECK(std::abs(lhs) <= 1e-8 * norm_weighted(e) * graph);
  }
}

TEST_CASE("finite differences converge to the spectral derivative at second order", "[fd]") {
  std::vector<double> errs, hs;
  for (int n : {16, 32, 64}) {
    const GridSpec g(3, n, 5.0);
    const FormField u = formwave::testing::sampled(g, 1, [](auto x) {
      return formwave::testing::gaussian(x, 1.2);
    });
    errs.push_back(rel(rot(u, Backend::finite_difference), rot(u)));
    hs.push_back(g.spacing());
  }
  for (std::size_t j = 1; j < errs.size(); ++j) {
    const double slope = std::log(errs[j - 1] / errs[j]) / std::log(hs[j - 1] / hs[j]);
    CHECK(std::abs(slope - 2.0) <= 0.2);
  }
}

TEST_CASE("cutoff and bump forms", "[cutoff]") {
  const CutoffProfile eta(1.0, 2.0);
  CHECK(eta(0.5) == 0.0);
  CHECK(eta(2.5) == 1.0);
  CHECK(eta(1.5) == Catch::Approx(0.5));
  CHECK(eta.derivative(0.9) == 0.0);
  CHECK(eta.derivative(2.1) == 0.0);
  const double e = 1e-6;
  CHECK(eta.derivative(1.3) == Catch::Approx((eta(1.3 + e) - eta(1.3 - e)) / (2 * e)).epsilon(1e-6));

  const GridSpec g(3, 32, 4.0);
  for (int q = 0; q <= 3; ++q) {
    const FormField gen = make_bump_form(g, q, eta, BumpMode::generic, 9);
    for (std::size_t node = 0; node < g.node_count(); ++node)
      if (g.node_radius(node) > 2.0)
        for (std::size_t c = 0; c < gen.component_count(); ++c) REQUIRE(gen.at(c, node) == cplx{});
    if (q < 3) {
      const FormField df = make_bump_form(g, q, eta, BumpMode::div_free, 9);
      CHECK(l2(div(df)) <= 1e-11 * l2(df));
    }
    if (q > 0) {
      const FormField rf = make_bump_form(g, q, eta, BumpMode::rot_free, 9);
      CHECK(l2(rot(rf)) <= 1e-11 * l2(rf));
    }
  }
  CHECK_THROWS_AS(make_bump_form(g, 1, CutoffProfile(1.0, 3.9), BumpMode::generic), Error);
}

TEST_CASE("field dump round trip", "[io]") {
  const GridSpec g(3, 8, 1.5);
  const FormField u = random_band_limited(g, 2, 2, 77);
  std::stringstream buf;
  write_field(buf, u);
  write_field(buf, hodge_star(u));
  const FormField a = read_field(buf);
  const FormField b = read_field(buf);
  CHECK(a.grid() == g);
  CHECK(a.rank() == 2);
  CHECK(l2(a - u) == 0.0);
  CHECK(b.rank() == 1);
  std::stringstream bad("FWF2xxxx");
  CHECK_THROWS_AS(read_field(bad), Error);
  const std::string header = buf.str().substr(0, 4);
  CHECK(header == "FWF1");
}
