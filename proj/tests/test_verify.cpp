#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "formwave/errors.hpp"
#include "formwave/grid.hpp"
#include "formwave/verify.hpp"

using namespace formwave;

namespace {

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::vector<ReportRow> rows_named(const SolveReport& r, const std::string& prefix) {
  std::vector<ReportRow> out;
  for (const auto& row : r.rows)
    if (starts_with(row.quantity, prefix)) out.push_back(row);
  return out;
}

const ReportRow& row_named(const SolveReport& r, const std::string& prefix) {
  for (const auto& row : r.rows)
    if (starts_with(row.quantity, prefix)) return row;
  FAIL("no row " << prefix);
  return r.rows.front();
}

void require_all_pass(const SolveReport& r) {
  for (const auto& row : r.rows) {
    INFO(r.command << " " << row.quantity << " = " << row.value << " tol " << row.tolerance);
    CHECK(row.pass);
  }
  CHECK(r.passed());
}

SweepConfig oracle_config() {
  SweepConfig c;
  c.n = 64;
  c.half_width = 20.0;
  c.r1 = 1.0;
  c.r2 = 6.0;
  c.mode = DataMode::generic;
  c.omega = {0.6, 0.4};
  c.point_stride = 8;
  return c;
}

}  // namespace

TEST_CASE("identity suite on zero fields records zero residuals", "[identities]") {
  const SolveReport r = run_identity_suite(GridSpec(3, 16, 4.0), 1, 1, true);
  REQUIRE_FALSE(r.rows.empty());
  for (const auto& row : r.rows)
    if (row.quantity != "product_rule_order") CHECK(row.value == 0.0);
  require_all_pass(r);
}

TEST_CASE("identity suite passes for N = 3 at n = 32", "[identities]") {
  for (int q = 0; q <= 2; ++q) {
    const SolveReport r = run_identity_suite(GridSpec(3, 32, 8.0), q);
    CHECK(r.rows.size() == 12);
    require_all_pass(r);
    CHECK(row_named(r, "rot_rot").value <= 1e-12);
    CHECK(row_named(r, "fourier_of_M").value <= 1e-12);
  }
}

TEST_CASE("identity suite passes for N = 5, q = 2 at n = 16", "[identities][slow]") {
  const SolveReport r = run_identity_suite(GridSpec(5, 16, 8.0), 2);
  require_all_pass(r);
}

TEST_CASE("identity suite is deterministic per seed", "[identities]") {
  const GridSpec g(3, 16, 4.0);
  const SolveReport a = run_identity_suite(g, 1, 7);
  const SolveReport b = run_identity_suite(g, 1, 7);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t j = 0; j < a.rows.size(); ++j) CHECK(a.rows[j].value == b.rows[j].value);
}

TEST_CASE("low-frequency sweep converges to the static solution", "[lowfreq]") {
  SweepConfig c;
  const SolveReport r = run_lowfreq_sweep(c);
  require_all_pass(r);
  const auto deltas = rows_named(r, "lowfreq_delta");
  REQUIRE(deltas.size() == 7);
  for (std::size_t k = 1; k < deltas.size(); ++k) {
    CHECK(deltas[k].value < deltas[k - 1].value);
    CHECK(std::abs(deltas[k].omega) < std::abs(deltas[k - 1].omega));
  }
  CHECK(deltas.back().value / deltas.front().value <= 0.05);
  CHECK(row_named(r, "lowfreq_final_over_static").value <= 1e-2);
  // the periodization guard is part of the quantity name
  CHECK(deltas.front().quantity == "lowfreq_delta|r<=6");
}

TEST_CASE("low-frequency sweep under a compact medium", "[lowfreq][material]") {
  SweepConfig c;
  c.material_amplitude = 0.1;
  const SolveReport r = run_lowfreq_sweep(c);
  require_all_pass(r);
  CHECK(rows_named(r, "born_residual").size() == 7);
  const auto deltas = rows_named(r, "lowfreq_delta");
  CHECK(deltas.back().value / deltas.front().value <= 0.05);
}

TEST_CASE("low-frequency sweep on zero data", "[lowfreq]") {
  SweepConfig c;
  c.mode = DataMode::zero;
  const SolveReport r = run_lowfreq_sweep(c);
  for (const auto& row : rows_named(r, "lowfreq_delta")) CHECK(row.value == 0.0);
  require_all_pass(r);
}

TEST_CASE("low-frequency sweep refuses generic data", "[lowfreq]") {
  SweepConfig c;
  c.mode = DataMode::generic;
  CHECK_THROWS_AS(run_lowfreq_sweep(c), Error);
}

TEST_CASE("uniform bound on clean data, 1/omega growth otherwise", "[bound]") {
  SweepConfig c;
  const SolveReport clean = run_uniform_bound_probe(c);
  require_all_pass(clean);
  CHECK(row_named(clean, "bound_spread").value <= 2.0);
  CHECK(std::abs(row_named(clean, "bound_slope").value) <= 0.2);

  c.mode = DataMode::generic;
  const SolveReport generic = run_uniform_bound_probe(c);
  require_all_pass(generic);
  CHECK(std::abs(row_named(generic, "bound_slope").value + 1.0) <= 0.2);
  const auto ratios = rows_named(generic, "bound_ratio");
  CHECK(ratios.back().value > 10.0 * ratios.front().value);
}

TEST_CASE("bound probe with a single frequency", "[bound]") {
  SweepConfig c;
  c.schedule_steps = 0;
  const SolveReport r = run_uniform_bound_probe(c);
  const auto ratios = rows_named(r, "bound_ratio");
  REQUIRE(ratios.size() == 1);
  CHECK(std::isfinite(ratios.front().value));
  CHECK(ratios.front().value > 0.0);
}

TEST_CASE("oracle equivalence for N = 3, q = 1", "[oracle]") {
  const SolveReport r = run_oracle_equivalence(oracle_config());
  require_all_pass(r);
  const auto diffs = rows_named(r, "oracle_rel_diff");
  REQUIRE(diffs.size() == 2);
  CHECK(diffs[0].n == 64);
  CHECK(diffs[0].value <= 5e-3);
  CHECK(diffs[1].n == 128);
  CHECK(diffs[1].value <= 0.5 * diffs[0].value);
}

TEST_CASE("oracle on zero data", "[oracle]") {
  SweepConfig c = oracle_config();
  c.mode = DataMode::zero;
  c.refine = false;
  const SolveReport r = run_oracle_equivalence(c);
  CHECK(row_named(r, "oracle_rel_diff").value == 0.0);
  require_all_pass(r);
}

TEST_CASE("oracle on a coarse grid fails its row", "[oracle]") {
  SweepConfig c = oracle_config();
  c.n = 16;
  c.refine = false;
  c.point_stride = 1;
  const SolveReport r = run_oracle_equivalence(c);
  CHECK_FALSE(row_named(r, "oracle_rel_diff").pass);
  CHECK_FALSE(r.passed());
}

TEST_CASE("N = 5 oracle error shrinks under refinement", "[oracle][slow]") {
  SweepConfig c;
  c.dim = 5;
  c.rank = 2;
  c.n = 8;
  c.half_width = 10.0;
  c.r1 = 1.0;
  c.r2 = 3.0;
  c.window_fraction = 0.95;
  c.mode = DataMode::generic;
  c.omega = {0.6, 0.4};
  c.t_tilde = -2.5;
  c.point_stride = 1;
  const SolveReport r = run_oracle_equivalence(c);
  const auto diffs = rows_named(r, "oracle_rel_diff");
  REQUIRE(diffs.size() == 2);
  CHECK(diffs[1].value <= 0.5 * diffs[0].value);
  CHECK(diffs[1].pass);
}

TEST_CASE("oracle needs a damped frequency", "[oracle]") {
  SweepConfig c = oracle_config();
  c.omega = 0.6;
  CHECK_THROWS_AS(run_oracle_equivalence(c), Error);
}

TEST_CASE("radial exponent fit", "[fit]") {
  std::vector<double> r, v;
  for (int j = 0; j < 8; ++j) {
    r.push_back(8.0 * std::pow(2.0, j / 2.0));
    v.push_back(3.0 / r.back());
  }
  const RadialFit fit = fit_radial_exponent(r, v);
  CHECK(std::abs(fit.slope + 1.0) <= 0.01);
  CHECK(fit.stderr_slope < 1e-10);

  const std::vector<double> four_r(r.begin(), r.begin() + 4), four_v(v.begin(), v.begin() + 4);
  try {
    fit_radial_exponent(four_r, four_v);
    FAIL("expected insufficient shells");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::insufficient_shells);
  }
}

TEST_CASE("radiation probe on the N = 3 real-frequency solution", "[radiation]") {
  SweepConfig c;
  c.mode = DataMode::generic;
  c.omega = 1.0;
  const SolveReport r = run_radiation_probe(c);
  require_all_pass(r);
  CHECK(std::abs(row_named(r, "field_exponent").value + 1.0) <= 0.3);
  CHECK(row_named(r, "defect_exponent").value <= -2.0 + 0.3);
  CHECK(row_named(r, "defect_over_conjugate_defect").value < 1.0);
}

TEST_CASE("radiation probe refuses damped frequencies and shells inside the support", "[radiation]") {
  SweepConfig c;
  c.omega = {1.0, 0.1};
  CHECK_THROWS_AS(run_radiation_probe(c), Error);
  c.omega = 1.0;
  c.shell_min = 2.0;
  CHECK_THROWS_AS(run_radiation_probe(c), Error);
}

TEST_CASE("kernel check", "[kernel]") {
  SweepConfig c = oracle_config();
  c.point_stride = 4;
  const SolveReport r = run_kernel_check(c);
  require_all_pass(r);
  CHECK(rows_named(r, "phi_bound_stability").size() == 6);
  CHECK(row_named(r, "ode_residual").value <= 1e-8);
}

TEST_CASE("static and time-harmonic solve reports", "[solve]") {
  SweepConfig c;
  require_all_pass(run_static(c));
  c.material_amplitude = 0.1;
  require_all_pass(run_static(c));

  SweepConfig s;
  s.mode = DataMode::generic;
  s.omega = {1.0, 0.3};
  FormPair u;
  require_all_pass(run_solve(s, &u));
  CHECK(u.rank() == 1);
  s.material_amplitude = 0.1;
  require_all_pass(run_solve(s));
}

TEST_CASE("solve by limiting absorption", "[solve]") {
  SweepConfig c;
  c.n = 64;
  c.half_width = 24.0;
  c.mode = DataMode::generic;
  c.omega = 1.0;
  c.deltas = {0.4, 0.2, 0.1, 0.05};
  const SolveReport r = run_solve(c);
  require_all_pass(r);
  CHECK(rows_named(r, "cauchy_difference").size() == 3);
}

TEST_CASE("sweep configuration constraints", "[config]") {
  SweepConfig c;
  c.s = 0.4;
  CHECK_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("weights.s must lie in (1/2, N/2)"));
  c.s = 1.6;
  CHECK_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("weights.s"));
  c = SweepConfig{};
  c.t_tilde = -1.0;
  CHECK_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("weights.t_tilde"));
  c = SweepConfig{};
  c.deltas = {0.1, 0.2};
  CHECK_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("strictly decreasing"));
  c = SweepConfig{};
  c.dim = 4;
  CHECK_THROWS_WITH(c.validate(), Catch::Matchers::ContainsSubstring("grid.N"));
  c = SweepConfig{};
  const auto w = c.schedule();
  REQUIRE(w.size() == 7);
  CHECK(w.back().real() == Catch::Approx(0.5 / 64));
  CHECK(w.back().imag() == Catch::Approx(0.25 * 0.5 / 64));
}
