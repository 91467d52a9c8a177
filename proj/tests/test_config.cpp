#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "formwave/config.hpp"
#include "formwave/errors.hpp"
#include "formwave/report_io.hpp"

using namespace formwave;
using Catch::Matchers::ContainsSubstring;

namespace {

const char* minimal = "[grid]\nN = 3\nn = 32\nL = 8\n";

const char* lowfreq_text = R"([grid]
N = 3
q = 1
n = 32
L = 8

[data]
r1 = 1
r2 = 3
mode = clean

[frequency]
omega_re = 0.5
factor = 0.5
steps = 6

[weights]
s = 1
t_tilde = -1.5
)";

std::string message(const std::string& text, Command c) {
  try {
    parse_config(text, c);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config_error);
    return e.what();
  }
  FAIL("config was accepted: " << text);
  return {};
}

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("formwave_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("minimal identities config parses", "[config]") {
  const RunConfig c = parse_config(minimal, Command::identities);
  CHECK(c.sweep.dim == 3);
  CHECK(c.sweep.n == 32);
  CHECK(c.sweep.half_width == 8.0);
  CHECK(c.sweep.rank == 1);
  // t_tilde defaults half a unit below t = s - (N + 1)/2
  CHECK(c.sweep.t_tilde == Catch::Approx(-1.5));
}

TEST_CASE("full lowfreq config parses with comments", "[config]") {
  const std::string text = std::string("# header\n") + lowfreq_text + "[output]\ndir = results ; trailing\nplot = yes\n";
  const RunConfig c = parse_config(text, Command::lowfreq);
  CHECK(c.sweep.mode == DataMode::clean);
  CHECK(c.sweep.schedule().size() == 7);
  CHECK(c.out_dir == "results");
  CHECK(c.write_plot);
}

TEST_CASE("s outside (1/2, N/2) is rejected with its line", "[config]") {
  std::string text = lowfreq_text;
  text.replace(text.find("s = 1"), 5, "s = 0.4");
  const std::string m = message(text, Command::lowfreq);
  CHECK_THAT(m, ContainsSubstring("weights.s must lie in (1/2, N/2)"));
  CHECK_THAT(m, ContainsSubstring("line 18"));
}

TEST_CASE("duplicate keys and sections are rejected with line numbers", "[config]") {
  CHECK_THAT(message("[grid]\nN = 3\nn = 32\nn = 16\nL = 8\n", Command::identities),
             ContainsSubstring("line 4: duplicate key grid.n (first set on line 3)"));
  CHECK_THAT(message("[grid]\nN = 3\nn = 32\nL = 8\n[grid]\nq = 0\n", Command::identities),
             ContainsSubstring("line 5: duplicate section [grid]"));
}

TEST_CASE("unknown keys, sections and malformed lines are rejected", "[config]") {
  CHECK_THAT(message("[grid]\nN = 3\nn = 32\nL = 8\nwidth = 2\n", Command::identities),
             ContainsSubstring("line 5: unknown key grid.width"));
  CHECK_THAT(message("[mesh]\n", Command::identities), ContainsSubstring("line 1: unknown section [mesh]"));
  CHECK_THAT(message("N = 3\n", Command::identities), ContainsSubstring("line 1: key outside of any section"));
  CHECK_THAT(message("[grid]\nN 3\n", Command::identities), ContainsSubstring("line 2: expected 'key = value'"));
  CHECK_THAT(message("[grid]\nN = three\nn = 32\nL = 8\n", Command::identities),
             ContainsSubstring("line 2: grid.N expects an integer"));
  CHECK_THAT(message("[grid]\nN = 3\nn = 32\nL = 8\n[data]\nmode = dirty\n", Command::static_solve),
             ContainsSubstring("line 6: data.mode must be clean, generic or zero"));
}

TEST_CASE("missing blocks and keys are named", "[config]") {
  CHECK_THAT(message(minimal, Command::lowfreq), ContainsSubstring("missing block [data] required by the lowfreq command"));
  CHECK_THAT(message("[grid]\nN = 3\nL = 8\n", Command::identities), ContainsSubstring("missing key grid.n"));
}

TEST_CASE("command-specific constraints", "[config]") {
  const std::string base = "[grid]\nN = 3\nn = 32\nL = 20\n[data]\nr1 = 1\nr2 = 6\n[frequency]\nomega_re = 0.6\n";
  CHECK_THAT(message(base, Command::oracle), ContainsSubstring("line 8: frequency.omega_im must be > 0"));
  CHECK_NOTHROW(parse_config(base + "omega_im = 0.4\n", Command::oracle));
  CHECK_THAT(message(base + "omega_im = 0.4\n", Command::radiation), ContainsSubstring("frequency.omega_im must be 0"));
  CHECK_THAT(message(base + "deltas = 0.1, 0.2, 0.05\n", Command::solve), ContainsSubstring("strictly decreasing"));
  CHECK_THAT(message(base + "deltas = 0.2, 0.1\n", Command::solve), ContainsSubstring("at least 3 levels"));
  CHECK_THAT(message(base + "[data]\n", Command::solve), ContainsSubstring("duplicate section [data]"));
  std::string generic = lowfreq_text;
  generic.replace(generic.find("mode = clean"), 12, "mode = generic");
  CHECK_THAT(message(generic, Command::lowfreq), ContainsSubstring("line 10: data.mode must be clean"));
}

TEST_CASE("commands by name", "[config]") {
  CHECK(parse_command("kernel-check") == Command::kernel_check);
  CHECK(command_name(Command::static_solve) == "static");
  CHECK_THROWS_AS(parse_command("plot"), Error);
}

TEST_CASE("run id hashes the normalized config", "[config]") {
  const RunConfig a = parse_config(minimal, Command::identities);
  const RunConfig b = parse_config("[grid]\nL = 8.0   # same value\nn = 32\nN = 3\n", Command::identities);
  const RunConfig c = parse_config("[grid]\nN = 3\nn = 16\nL = 8\n", Command::identities);
  CHECK(run_id(a) == run_id(b));
  CHECK(run_id(a) != run_id(c));
  CHECK(run_id(a).size() == 16);
  RunConfig d = a;
  d.command = Command::static_solve;
  CHECK(run_id(a) != run_id(d));
}

TEST_CASE("CSV rows follow the fixed schema", "[report]") {
  SolveReport r;
  r.command = "lowfreq";
  ReportRow row;
  row.n = 32;
  row.half_width = 8.0;
  row.omega = {0.5, 0.125};
  row.s = 1.0;
  row.t_tilde = -1.5;
  row.quantity = "lowfreq_delta|r<=6";
  row.value = 0.1;
  row.tolerance = std::numeric_limits<double>::infinity();
  r.rows.push_back(row);
  row.pass = false;
  r.rows.push_back(row);
  std::ostringstream out;
  write_csv(out, r, "0123456789abcdef");
  const std::string expected = std::string(csv_header) +
                               "\n0123456789abcdef,lowfreq,3,1,32,8,0.5,0.125,0,1,-1.5,lowfreq_delta|r<=6,"
                               "0.10000000000000001,inf,true\n"
                               "0123456789abcdef,lowfreq,3,1,32,8,0.5,0.125,0,1,-1.5,lowfreq_delta|r<=6,"
                               "0.10000000000000001,inf,false\n";
  CHECK(out.str() == expected);

  const RunConfig cfg = parse_config(minimal, Command::identities);
  std::ostringstream js;
  r.timings.emplace_back("lowfreq", 1.5);
  write_json(js, r, cfg);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["passed"] == false);
  CHECK(j["rows"] == 2);
  CHECK(j["failed"].size() == 1);
  CHECK(j["failed"][0]["tolerance"].is_null());
  CHECK(j["timings"]["lowfreq"] == 1.5);
  CHECK(j["config"]["grid.n"] == "32");

  std::ostringstream gp;
  write_plot_script(gp, r, "lowfreq.csv");
  CHECK_THAT(gp.str(), ContainsSubstring("set datafile separator ','"));
  CHECK_THAT(gp.str(), ContainsSubstring("'lowfreq.csv' every ::1"));
  CHECK_THAT(gp.str(), ContainsSubstring("strcol(12) eq 'lowfreq_delta|r<=6'"));
}

TEST_CASE("run_command writes artifacts and tracks the pass flags", "[report]") {
  const auto dir = scratch("run");
  RunConfig cfg = parse_config(std::string(lowfreq_text) + "[output]\nplot = true\n", Command::lowfreq);
  cfg.out_dir = dir.string();
  std::ostringstream log;
  CHECK(run_command(cfg, log) == 0);
  const std::string csv = slurp(dir / "lowfreq.csv");
  CHECK(csv.rfind(csv_header, 0) == 0);
  CHECK(std::filesystem::exists(dir / "lowfreq.json"));
  CHECK(std::filesystem::exists(dir / "lowfreq.gp"));
  CHECK(csv.find(",false\n") == std::string::npos);

  // byte-identical on rerun
  std::ostringstream log2;
  CHECK(run_command(cfg, log2) == 0);
  CHECK(slurp(dir / "lowfreq.csv") == csv);

  RunConfig bad = parse_config(
      "[grid]\nN = 3\nn = 16\nL = 20\n[data]\nr1 = 1\nr2 = 6\nmode = generic\n[frequency]\nomega_re = 0.6\n"
      "omega_im = 0.4\n[probe]\nrefine = false\nstride = 1\n",
      Command::oracle);
  bad.out_dir = dir.string();
  CHECK(run_command(bad, log) == 1);
  CHECK(slurp(dir / "oracle.csv").find(",false\n") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("solve reads and writes field dumps", "[report]") {
  const auto dir = scratch("fields");
  const std::string text =
      "[grid]\nN = 3\nq = 1\nn = 16\nL = 6\n[data]\nr1 = 1\nr2 = 3\nmode = generic\n[frequency]\nomega_re = 1\n"
      "omega_im = 0.5\n[output]\nfields = true\n";
  RunConfig cfg = parse_config(text, Command::solve);
  cfg.out_dir = dir.string();
  std::ostringstream log;
  REQUIRE(run_command(cfg, log) == 0);
  REQUIRE(std::filesystem::exists(dir / "solve_E.fwf"));

  // feed the solution back as data: a different solve, same schema
  const std::string again = "[grid]\nN = 3\nq = 1\nn = 16\nL = 6\n[data]\nF_file = solve_E.fwf\nG_file = solve_H.fwf\n"
                            "[frequency]\nomega_re = 1\nomega_im = 0.5\n";
  RunConfig cfg2 = parse_config(again, Command::solve, dir.string());
  CHECK(cfg2.sweep.data_file_e == (dir / "solve_E.fwf").string());
  cfg2.out_dir = (dir / "second").string();
  CHECK(run_command(cfg2, log) == 0);

  CHECK_THROWS_AS(parse_config("[grid]\nN = 3\nn = 16\nL = 6\n[data]\nF_file = a.fwf\n[frequency]\n", Command::solve),
                  Error);
  std::filesystem::remove_all(dir);
}
