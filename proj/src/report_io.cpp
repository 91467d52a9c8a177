#include "formwave/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "formwave/errors.hpp"
#include "formwave/field_io.hpp"
#include "formwave/grid.hpp"

namespace formwave {

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// JSON has no infinity; unbounded tolerances become null.
nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot write " + p.string());
  return out;
}

SolveReport dispatch(const RunConfig& cfg, FormPair* solution) {
  const SweepConfig& s = cfg.sweep;
  switch (cfg.command) {
    case Command::identities:
      s.validate();
      return run_identity_suite(GridSpec(s.dim, s.n, s.half_width), s.rank, s.seed, s.mode == DataMode::zero);
    case Command::solve: return run_solve(s, solution);
    case Command::static_solve: return run_static(s);
    case Command::lowfreq: return run_lowfreq_sweep(s);
    case Command::bound: return run_uniform_bound_probe(s);
    case Command::oracle: return run_oracle_equivalence(s);
    case Command::kernel_check: return run_kernel_check(s);
    case Command::radiation: return run_radiation_probe(s);
  }
  return {};
}

}  // namespace

void write_csv(std::ostream& out, const SolveReport& report, const std::string& run_id) {
  out << csv_header << '\n';
  for (const ReportRow& r : report.rows) {
    out << run_id << ',' << report.command << ',' << r.dim << ',' << r.rank << ',' << r.n << ','
        << g17(r.half_width) << ',' << g17(r.omega.real()) << ',' << g17(r.omega.imag()) << ',' << g17(r.delta)
        << ',' << g17(r.s) << ',' << g17(r.t_tilde) << ',' << r.quantity << ',' << g17(r.value) << ','
        << g17(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

void write_json(std::ostream& out, const SolveReport& report, const RunConfig& cfg) {
  nlohmann::json j;
  j["run_id"] = run_id(cfg);
  j["command"] = report.command;
  j["passed"] = report.passed();
  j["rows"] = report.rows.size();
  nlohmann::json failed = nlohmann::json::array();
  for (const ReportRow& r : report.rows) {
    if (r.pass) continue;
    failed.push_back({{"quantity", r.quantity},
                      {"omega", {r.omega.real(), r.omega.imag()}},
                      {"n", r.n},
                      {"value", number(r.value)},
                      {"tolerance", number(r.tolerance)}});
  }
  j["failed"] = failed;
  nlohmann::json timings = nlohmann::json::object();
  for (const auto& [phase, seconds] : report.timings) timings[phase] = seconds;
  j["timings"] = timings;
  nlohmann::json config = nlohmann::json::object();
  std::size_t pos = 0;
  while (pos < cfg.canonical.size()) {
    const std::size_t eol = cfg.canonical.find('\n', pos);
    const std::string line = cfg.canonical.substr(pos, eol - pos);
    const std::size_t eq = line.find('=');
    config[line.substr(0, eq)] = line.substr(eq + 1);
    pos = eol + 1;
  }
  j["config"] = config;
  out << j.dump(2) << '\n';
}

void write_plot_script(std::ostream& out, const SolveReport& report, const std::string& csv_name) {
  std::map<std::string, int> counts;
  std::vector<std::string> order;
  std::set<double> omegas;
  for (const ReportRow& r : report.rows) {
    if (counts[r.quantity]++ == 0) order.push_back(r.quantity);
    omegas.insert(std::abs(r.omega));
  }
  const bool by_omega = omegas.size() > 1;
  out << "# " << report.command << " convergence curves; run with: gnuplot " << report.command << ".gp\n";
  out << "set datafile separator ','\n";
  out << "set terminal pngcairo size 900,600\n";
  out << "set output '" << report.command << ".png'\n";
  out << "set logscale xy\n";
  out << "set format y '%g'\n";
  out << "set key outside right\n";
  out << "set xlabel '" << (by_omega ? "|omega|" : "n") << "'\n";
  out << "set ylabel 'value'\n";
  const std::string x = by_omega ? "(sqrt($7**2 + $8**2))" : "5";
  bool first = true;
  for (const std::string& q : order) {
    if (counts[q] < 2) continue;
    out << (first ? "plot " : ", \\\n     ") << "'" << csv_name << "' every ::1 using " << x
        << ":(strcol(12) eq '" << q << "' ? abs($13) : 1/0) with linespoints title '" << q << "'";
    first = false;
  }
  if (first) out << "# no quantity repeats across rows; nothing to plot\n";
  else out << '\n';
}

int run_command(const RunConfig& cfg, std::ostream& log) {
  const std::string id = run_id(cfg);
  const std::string name(command_name(cfg.command));
  log << "formwave " << name << " run " << id << '\n';
  FormPair solution;
  const SolveReport report = dispatch(cfg, cfg.write_fields ? &solution : nullptr);

  const std::filesystem::path dir(cfg.out_dir);
  if (cfg.write_csv || cfg.write_json || cfg.write_plot || cfg.write_fields) std::filesystem::create_directories(dir);
  if (cfg.write_csv) {
    std::ofstream out = open_out(dir / (name + ".csv"));
    write_csv(out, report, id);
  }
  if (cfg.write_json) {
    std::ofstream out = open_out(dir / (name + ".json"));
    write_json(out, report, cfg);
  }
  if (cfg.write_plot) {
    std::ofstream out = open_out(dir / (name + ".gp"));
    write_plot_script(out, report, name + ".csv");
  }
  if (cfg.write_fields) {
    write_field_file((dir / (name + "_E.fwf")).string(), solution.e);
    write_field_file((dir / (name + "_H.fwf")).string(), solution.h);
  }
  std::size_t failed = 0;
  for (const ReportRow& r : report.rows) {
    if (r.pass) continue;
    ++failed;
    log << "FAIL " << r.quantity << " = " << g17(r.value) << " (tolerance " << g17(r.tolerance) << ", n = " << r.n
        << ")\n";
  }
  log << report.rows.size() - failed << "/" << report.rows.size() << " rows pass\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace formwave
