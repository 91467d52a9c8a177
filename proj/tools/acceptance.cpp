// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.

#include <malloc.h>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "formwave/config.hpp"
#include "formwave/forms.hpp"
#include "formwave/multi_index.hpp"
#include "formwave/operators.hpp"
#include "formwave/report_io.hpp"
#include "formwave/spectral_solver.hpp"
#include "formwave/verify.hpp"

using namespace formwave;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double max_row(const SolveReport& r, const std::string& prefix) {
  double m = 0.0;
  for (const auto& row : r.rows)
    if (row.quantity.rfind(prefix, 0) == 0) m = std::max(m, row.value);
  return m;
}

double row_value(const SolveReport& r, const std::string& prefix, bool last = false) {
  double v = std::nan("");
  for (const auto& row : r.rows) {
    if (row.quantity.rfind(prefix, 0) != 0) continue;
    v = row.value;
    if (!last) break;
  }
  return v;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string failing_rows(const SolveReport& r) {
  std::string s;
  for (const auto& row : r.rows)
    if (!row.pass) s += " " + r.command + ":" + row.quantity + "=" + fmt("%.3g", row.value);
  return s;
}

Outcome identities() {
  Outcome o;
  double banded = 0.0;
  std::size_t rows = 0;
  SolveReport all;
  for (int q = 0; q <= 2; ++q) all.append(run_identity_suite(GridSpec(3, 32, 8.0), q));
  SolveReport five = run_identity_suite(GridSpec(5, 16, 8.0), 2);
  all.append(five);
  for (const auto& row : all.rows) {
    ++rows;
    if (row.quantity.rfind("product_rule", 0) != 0) banded = std::max(banded, row.value);
  }
  o.pass = all.passed();
  o.detail = std::to_string(rows) + " rows, band-limited max " + fmt("%.2e", banded) + ", product-rule order >= " +
             fmt("%.1f", [&] {
               double m = 1e300;
               for (const auto& row : all.rows)
                 if (row.quantity == "product_rule_order") m = std::min(m, row.value);
               return m;
             }()) +
             failing_rows(all);
  return o;
}

Outcome algebra() {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> nd;
  double adj = 0.0, anti = 0.0;
  int cases = 0;
  for (int dim : {3, 5, 7}) {
    for (int q = 0; q < dim; ++q) {
      const std::size_t ne = binomial(dim, q), nh = binomial(dim, q + 1);
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(dim);
        double r2 = 0.0;
        for (double& v : x) {
          v = nd(rng);
          r2 += v * v;
        }
        std::vector<cplx> u(ne), v(nh);
        for (auto& c : u) c = {nd(rng), nd(rng)};
        for (auto& c : v) c = {nd(rng), nd(rng)};
        const auto ru = pointwise::R(dim, q, x, u);
        const auto tv = pointwise::T(dim, q + 1, x, v);
        double nu = 0.0, nv = 0.0;
        for (auto c : u) nu += std::norm(c);
        for (auto c : v) nv += std::norm(c);
        adj = std::max(adj, std::abs(pointwise::inner(ru, v) - pointwise::inner(u, tv)) /
                                std::sqrt(r2 * nu * nv));
        const auto tru = pointwise::T(dim, q + 1, x, ru);
        std::vector<cplx> rtu(ne, 0.0);
        if (q > 0) rtu = pointwise::R(dim, q - 1, x, pointwise::T(dim, q, x, u));
        double err = 0.0;
        for (std::size_t c = 0; c < ne; ++c) err += std::norm(tru[c] + rtu[c] - r2 * u[c]);
        anti = std::max(anti, std::sqrt(err / nu) / r2);
        ++cases;
      }
    }
  }
  Outcome o;
  o.pass = adj <= 1e-13 && anti <= 1e-13;
  o.detail = std::to_string(cases) + " node/form draws over N = 3, 5, 7, all q: adjointness " + fmt("%.2e", adj) +
             ", TR + RT - r^2 " + fmt("%.2e", anti);
  return o;
}

SweepConfig oracle_config() {
  SweepConfig c;
  c.n = 64;
  c.half_width = 20.0;
  c.r1 = 1.0;
  c.r2 = 6.0;
  c.mode = DataMode::generic;
  c.omega = {0.6, 0.4};
  c.point_stride = 2;
  return c;
}

Outcome oracle() {
  const SolveReport r = run_oracle_equivalence(oracle_config());
  double base = 0.0, fine = 0.0;
  int k = 0;
  for (const auto& row : r.rows)
    if (row.quantity.rfind("oracle_rel_diff", 0) == 0) (k++ == 0 ? base : fine) = row.value;
  Outcome o;
  o.pass = r.passed() && base <= 5e-3 && fine <= 0.5 * base;
  o.detail = "n = 64: " + fmt("%.2e", base) + ", n = 128: " + fmt("%.2e", fine) + " (ratio " +
             fmt("%.1f", base / fine) + ")" + failing_rows(r);
  return o;
}

Outcome lowfreq() {
  SweepConfig c;
  const SolveReport id = run_lowfreq_sweep(c);
  c.material_amplitude = 0.1;
  const SolveReport born = run_lowfreq_sweep(c);
  Outcome o;
  o.pass = id.passed() && born.passed();
  o.detail = "final/initial " + fmt("%.3g", row_value(id, "lowfreq_final_over_initial")) + " (Id), " +
             fmt("%.3g", row_value(born, "lowfreq_final_over_initial")) + " (Born, |Lambda_hat| = 0.1, residual " +
             fmt("%.1e", max_row(born, "born_residual")) + ")" + failing_rows(id) + failing_rows(born);
  return o;
}

Outcome bound() {
  SweepConfig c;
  const SolveReport clean = run_uniform_bound_probe(c);
  c.mode = DataMode::generic;
  const SolveReport generic = run_uniform_bound_probe(c);
  const double spread = row_value(clean, "bound_spread");
  const double slope = row_value(generic, "bound_slope");
  Outcome o;
  o.pass = clean.passed() && generic.passed() && spread <= 2.0 && std::abs(slope + 1.0) <= 0.2;
  o.detail = "clean spread " + fmt("%.3f", spread) + ", clean slope " + fmt("%.3f", row_value(clean, "bound_slope")) +
             ", generic slope " + fmt("%.3f", slope) + failing_rows(clean) + failing_rows(generic);
  return o;
}

Outcome kernel() {
  SweepConfig c = oracle_config();
  const SolveReport r = run_kernel_check(c);
  Outcome o;
  o.pass = r.passed();
  o.detail = "max bound drift " + fmt("%.1e", std::max(max_row(r, "phi_bound_stability"), max_row(r, "dphi_bound_stability"))) +
             ", ODE residual " + fmt("%.1e", row_value(r, "ode_residual")) + ", c_3 calibration " +
             fmt("%.1e", row_value(r, "calibrated_c_over_analytic")) + failing_rows(r);
  return o;
}

Outcome radiation() {
  SweepConfig c;
  c.mode = DataMode::generic;
  c.omega = 1.0;
  const SolveReport r = run_radiation_probe(c);
  const double field = row_value(r, "field_exponent");
  const double defect = row_value(r, "defect_exponent");
  Outcome o;
  o.pass = r.passed() && std::abs(field + 1.0) <= 0.3 && defect <= -2.0 + 0.3;
  o.detail = "field exponent " + fmt("%.3f", field) + ", defect exponent " + fmt("%.3f", defect) +
             ", outgoing/conjugate defect " + fmt("%.2e", row_value(r, "defect_over_conjugate_defect")) +
             failing_rows(r);
  return o;
}

double l2(const FormField& u) { return std::sqrt(std::max(0.0, std::real(inner_weighted(u, u)))); }

Outcome helmholtz() {
  double idem = 0.0, orth = 0.0, recon = 0.0;
  const auto check = [&](const GridSpec& g, int q, int seed) {
    const FormField u = random_band_limited(g, q, g.points_per_axis() / 2 - 1, seed);
    const double nu = l2(u);
    const HelmholtzParts p = helmholtz_project(u);
    const HelmholtzParts pi = helmholtz_project(p.irrotational);
    const HelmholtzParts ps = helmholtz_project(p.solenoidal);
    idem = std::max({idem, l2(pi.irrotational - p.irrotational) / nu, l2(ps.solenoidal - p.solenoidal) / nu,
                     l2(pi.solenoidal) / nu, l2(ps.irrotational) / nu});
    orth = std::max(orth, std::abs(inner_weighted(p.irrotational, p.solenoidal)) / (nu * nu));
    recon = std::max(recon, l2(p.irrotational + p.solenoidal + p.mean - u) / nu);
  };
  for (int q = 0; q <= 3; ++q) check(GridSpec(3, 16, 4.0), q, 300 + q);
  check(GridSpec(5, 8, 2.0), 2, 310);
  SweepConfig c;
  const SolveReport st = run_static(c);
  c.rank = 0;
  const SolveReport st0 = run_static(c);
  c.rank = 2;
  const SolveReport st2 = run_static(c);
  const double stat = std::max({max_row(st, ""), max_row(st0, ""), max_row(st2, "")});
  Outcome o;
  o.pass = idem <= 1e-12 && orth <= 1e-12 && recon <= 1e-12 && st.passed() && st0.passed() && st2.passed();
  o.detail = "idempotence " + fmt("%.1e", idem) + ", orthogonality " + fmt("%.1e", orth) + ", reconstruction " +
             fmt("%.1e", recon) + ", static residual " + fmt("%.1e", stat) + failing_rows(st) + failing_rows(st0) +
             failing_rows(st2);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const std::filesystem::path golden = FORMWAVE_GOLDEN_DIR;
  const auto tmp = std::filesystem::temp_directory_path() / "formwave_acceptance";
  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  Outcome o;
  int compared = 0;
  struct Case {
    const char* config;
    Command command;
    int exit;
  };
  for (const Case& c : {Case{"identities", Command::identities, 0}, Case{"static", Command::static_solve, 0},
                        Case{"lowfreq", Command::lowfreq, 0}, Case{"oracle_coarse", Command::oracle, 1}}) {
    RunConfig cfg = load_config((golden / (std::string(c.config) + ".ini")).string(), c.command);
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      std::filesystem::remove_all(tmp);
      cfg.out_dir = tmp.string();
      std::ostringstream log;
      const int code = run_command(cfg, log);
      const std::string csv = slurp(tmp / (std::string(command_name(c.command)) + ".csv"));
      if (code != c.exit) {
        o.pass = false;
        o.detail += std::string(" ") + c.config + " exit " + std::to_string(code);
      }
      if (rep == 0) first = csv;
      else if (csv != first) {
        o.pass = false;
        o.detail += std::string(" ") + c.config + " rerun differs";
      }
    }
    if (first != slurp(golden / (std::string(c.config) + ".csv"))) {
      o.pass = false;
      o.detail += std::string(" ") + c.config + " differs from golden";
    }
    ++compared;
  }
  std::filesystem::remove_all(tmp);
  omp_set_num_threads(threads);
  o.detail = std::to_string(compared) + " configs: reruns and golden CSVs byte-identical, exit codes 0/0/0/1" +
             (o.pass ? "" : ";" + o.detail);
  return o;
}

}  // namespace

int main() {
  mallopt(M_MMAP_MAX, 0);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "identity suite", 60, identities},
      {2, "algebraic operator laws", 30, algebra},
      {3, "oracle equivalence", 300, oracle},
      {4, "low-frequency convergence", 600, lowfreq},
      {5, "uniform bound", 600, bound},
      {6, "kernel bounds", 30, kernel},
      {7, "radiation condition", 300, radiation},
      {8, "Helmholtz decomposition", 30, helmholtz},
      {9, "CLI determinism", 30, determinism},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget;
    const bool pass = o.pass && in_time;
    all = all && pass;
    std::printf("criterion %d %s: %s - %s [%.1f s of %.0f s]\n", c.id, c.name, pass ? "PASS" : "FAIL", o.detail.c_str(),
                secs, c.budget);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
