#include "formwave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "formwave/errors.hpp"

namespace formwave {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(ErrorCode::config_error, line > 0 ? "line " + std::to_string(line) + ": " + what : what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end) fail(e.line, key + " expects a number, got '" + e.value + "'");
  return v;
}

long long to_int(const std::string& key, const Entry& e) {
  long long v = 0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  auto [p, ec] = std::from_chars(b, end, v);
  if (ec != std::errc() || p != end) fail(e.line, key + " expects an integer, got '" + e.value + "'");
  return v;
}

bool to_bool(const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  fail(e.line, key + " expects true or false, got '" + e.value + "'");
}

std::vector<double> to_list(const std::string& key, const Entry& e) {
  std::vector<double> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, Entry{std::string(trim(item)), e.line}));
  return out;
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Setter = std::function<void(RunConfig&, const std::string&, const Entry&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto dbl = [&t](const std::string& k, double SweepConfig::*f) {
      t[k] = [f](RunConfig& c, const std::string& key, const Entry& e) { c.sweep.*f = to_double(key, e); };
    };
    auto num = [&t](const std::string& k, int SweepConfig::*f) {
      t[k] = [f](RunConfig& c, const std::string& key, const Entry& e) {
        const long long v = to_int(key, e);
        if (v < -1000000 || v > 1000000) fail(e.line, key + " is out of range");
        c.sweep.*f = static_cast<int>(v);
      };
    };
    auto flag = [&t](const std::string& k, bool RunConfig::*f) {
      t[k] = [f](RunConfig& c, const std::string& key, const Entry& e) { c.*f = to_bool(key, e); };
    };
    num("grid.N", &SweepConfig::dim);
    num("grid.q", &SweepConfig::rank);
    num("grid.n", &SweepConfig::n);
    dbl("grid.L", &SweepConfig::half_width);
    dbl("data.r1", &SweepConfig::r1);
    dbl("data.r2", &SweepConfig::r2);
    t["data.mode"] = [](RunConfig& c, const std::string& key, const Entry& e) {
      if (e.value == "clean") c.sweep.mode = DataMode::clean;
      else if (e.value == "generic") c.sweep.mode = DataMode::generic;
      else if (e.value == "zero") c.sweep.mode = DataMode::zero;
      else fail(e.line, key + " must be clean, generic or zero, got '" + e.value + "'");
    };
    t["data.seed"] = [](RunConfig& c, const std::string& key, const Entry& e) {
      const long long v = to_int(key, e);
      if (v < 0) fail(e.line, key + " must be >= 0");
      c.sweep.seed = static_cast<std::uint64_t>(v);
    };
    t["data.F_file"] = [](RunConfig& c, const std::string&, const Entry& e) { c.sweep.data_file_e = e.value; };
    t["data.G_file"] = [](RunConfig& c, const std::string&, const Entry& e) { c.sweep.data_file_h = e.value; };
    t["frequency.omega_re"] = [](RunConfig& c, const std::string& key, const Entry& e) {
      c.sweep.omega.real(to_double(key, e));
    };
    t["frequency.omega_im"] = [](RunConfig& c, const std::string& key, const Entry& e) {
      c.sweep.omega.imag(to_double(key, e));
    };
    t["frequency.deltas"] = [](RunConfig& c, const std::string& key, const Entry& e) {
      c.sweep.deltas = to_list(key, e);
    };
    dbl("frequency.factor", &SweepConfig::schedule_factor);
    num("frequency.steps", &SweepConfig::schedule_steps);
    dbl("frequency.damping", &SweepConfig::damping);
    dbl("weights.s", &SweepConfig::s);
    dbl("weights.t_tilde", &SweepConfig::t_tilde);
    dbl("weights.window", &SweepConfig::window_fraction);
    dbl("material.amplitude", &SweepConfig::material_amplitude);
    dbl("material.r1", &SweepConfig::material_r1);
    dbl("material.r2", &SweepConfig::material_r2);
    t["material.file"] = [](RunConfig& c, const std::string&, const Entry& e) { c.sweep.material_file = e.value; };
    dbl("material.tau", &SweepConfig::material_tau);
    t["probe.refine"] = [](RunConfig& c, const std::string& key, const Entry& e) {
      c.sweep.refine = to_bool(key, e);
    };
    num("probe.stride", &SweepConfig::point_stride);
    dbl("probe.shell_min", &SweepConfig::shell_min);
    dbl("probe.shell_max", &SweepConfig::shell_max);
    num("probe.shells", &SweepConfig::shells);
    num("probe.shell_points", &SweepConfig::shell_points);
    t["output.dir"] = [](RunConfig& c, const std::string&, const Entry& e) { c.out_dir = e.value; };
    flag("output.csv", &RunConfig::write_csv);
    flag("output.json", &RunConfig::write_json);
    flag("output.plot", &RunConfig::write_plot);
    flag("output.fields", &RunConfig::write_fields);
    return t;
  }();
  return table;
}

std::vector<std::string> required_blocks(Command c) {
  switch (c) {
    case Command::identities: return {"grid"};
    case Command::static_solve: return {"grid", "data"};
    case Command::kernel_check: return {"grid", "frequency"};
    case Command::lowfreq:
    case Command::bound: return {"grid", "data", "frequency", "weights"};
    case Command::solve:
    case Command::oracle:
    case Command::radiation: return {"grid", "data", "frequency"};
  }
  return {};
}

std::string canonical_text(const RunConfig& c) {
  const SweepConfig& s = c.sweep;
  std::vector<std::string> lines;
  auto put = [&lines](const std::string& k, const std::string& v) { lines.push_back(k + "=" + v); };
  put("grid.N", std::to_string(s.dim));
  put("grid.q", std::to_string(s.rank));
  put("grid.n", std::to_string(s.n));
  put("grid.L", g17(s.half_width));
  put("data.r1", g17(s.r1));
  put("data.r2", g17(s.r2));
  put("data.mode", s.mode == DataMode::clean ? "clean" : s.mode == DataMode::generic ? "generic" : "zero");
  put("data.seed", std::to_string(s.seed));
  put("data.F_file", s.data_file_e);
  put("data.G_file", s.data_file_h);
  put("frequency.omega_re", g17(s.omega.real()));
  put("frequency.omega_im", g17(s.omega.imag()));
  std::string d;
  for (double v : s.deltas) d += (d.empty() ? "" : ",") + g17(v);
  put("frequency.deltas", d);
  put("frequency.factor", g17(s.schedule_factor));
  put("frequency.steps", std::to_string(s.schedule_steps));
  put("frequency.damping", g17(s.damping));
  put("weights.s", g17(s.s));
  put("weights.t_tilde", g17(s.t_tilde));
  put("weights.window", g17(s.window_fraction));
  put("material.amplitude", g17(s.material_amplitude));
  put("material.r1", g17(s.material_r1));
  put("material.r2", g17(s.material_r2));
  put("material.file", s.material_file);
  put("material.tau", g17(s.material_tau));
  put("probe.refine", s.refine ? "true" : "false");
  put("probe.stride", std::to_string(s.point_stride));
  put("probe.shell_min", g17(s.shell_min));
  put("probe.shell_max", g17(s.shell_max));
  put("probe.shells", std::to_string(s.shells));
  put("probe.shell_points", std::to_string(s.shell_points));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

/// Line of the first dotted key named in a validation message, or 0 when it was a default
/// (then `key` names it).
int line_for(const std::string& message, const std::map<std::string, Entry>& entries, std::string& key_out) {
  std::size_t best = std::string::npos;
  int line = 0;
  for (const auto& [key, setter] : setters()) {
    const std::size_t at = message.find(key);
    if (at == std::string::npos || at >= best) continue;
    const char next = at + key.size() < message.size() ? message[at + key.size()] : ' ';
    if (std::isalnum(static_cast<unsigned char>(next)) || next == '_') continue;
    best = at;
    key_out = key;
    const auto it = entries.find(key);
    line = it == entries.end() ? 0 : it->second.line;
  }
  return line;
}

std::string resolve(const std::string& path, const std::string& base) {
  if (path.empty() || base.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base) / path).string();
}

}  // namespace

Command parse_command(std::string_view name) {
  for (Command c : {Command::identities, Command::solve, Command::static_solve, Command::lowfreq, Command::bound,
                    Command::oracle, Command::kernel_check, Command::radiation})
    if (command_name(c) == name) return c;
  throw Error(ErrorCode::config_error, "unknown command '" + std::string(name) +
                                           "' (identities, solve, static, lowfreq, bound, oracle, kernel-check, "
                                           "radiation)");
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::identities: return "identities";
    case Command::solve: return "solve";
    case Command::static_solve: return "static";
    case Command::lowfreq: return "lowfreq";
    case Command::bound: return "bound";
    case Command::oracle: return "oracle";
    case Command::kernel_check: return "kernel-check";
    case Command::radiation: return "radiation";
  }
  return "?";
}

RunConfig parse_config(std::string_view text, Command command, const std::string& base_dir) {
  static const std::vector<std::string> sections = {"grid",   "data",  "frequency", "weights",
                                                    "material", "probe", "output"};
  std::map<std::string, Entry> entries;
  std::map<std::string, int> seen_sections;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const std::size_t c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header '" + std::string(line) + "'");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (std::find(sections.begin(), sections.end(), section) == sections.end())
        fail(line_no, "unknown section [" + section + "]");
      if (const auto it = seen_sections.find(section); it != seen_sections.end())
        fail(line_no, "duplicate section [" + section + "] (first on line " + std::to_string(it->second) + ")");
      seen_sections[section] = line_no;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value', got '" + std::string(line) + "'");
    if (section.empty()) fail(line_no, "key outside of any section");
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (setters().find(key) == setters().end()) fail(line_no, "unknown key " + key);
    if (const auto it = entries.find(key); it != entries.end())
      fail(line_no, "duplicate key " + key + " (first set on line " + std::to_string(it->second.line) + ")");
    if (value.empty()) fail(line_no, key + " has no value");
    entries[key] = Entry{value, line_no};
  }

  const std::string cmd(command_name(command));
  for (const auto& b : required_blocks(command))
    if (seen_sections.find(b) == seen_sections.end())
      fail(0, "missing block [" + b + "] required by the " + cmd + " command");
  for (const char* k : {"grid.N", "grid.n", "grid.L"})
    if (entries.find(k) == entries.end()) fail(seen_sections["grid"], std::string("missing key ") + k);

  RunConfig cfg;
  cfg.command = command;
  for (const auto& [key, e] : entries) setters().at(key)(cfg, key, e);
  if (entries.find("weights.t_tilde") == entries.end()) cfg.sweep.t_tilde = cfg.sweep.t() - 0.5;
  cfg.sweep.data_file_e = resolve(cfg.sweep.data_file_e, base_dir);
  cfg.sweep.data_file_h = resolve(cfg.sweep.data_file_h, base_dir);
  cfg.sweep.material_file = resolve(cfg.sweep.material_file, base_dir);

  // line of the key, else of its section header
  const auto at = [&entries, &seen_sections](const std::string& key) {
    if (const auto it = entries.find(key); it != entries.end()) return it->second.line;
    const auto sec = seen_sections.find(key.substr(0, key.find('.')));
    return sec == seen_sections.end() ? 0 : sec->second;
  };
  const SweepConfig& s = cfg.sweep;
  try {
    s.validate();
  } catch (const Error& e) {
    std::string msg = e.what();
    msg.erase(0, to_string(e.code()).size() + 2);
    std::string key;
    const int line = line_for(msg, entries, key);
    if (line == 0 && !key.empty()) msg += " (" + key + " left at its default)";
    fail(line, msg);
  }
  switch (command) {
    case Command::oracle:
      if (s.omega.imag() <= 0.0) fail(at("frequency.omega_im"), "frequency.omega_im must be > 0 for oracle");
      if (s.mode == DataMode::zero) break;
      if (s.r2 + 2.0 * (2.0 * s.half_width / s.n) >= s.window_radius())
        fail(at("data.r2"), "data.r2 + 2h must stay below the window weights.window * grid.L");
      break;
    case Command::radiation:
      if (s.omega.imag() != 0.0 || s.omega.real() <= 0.0)
        fail(at("frequency.omega_im"), "frequency.omega_im must be 0 for radiation");
      break;
    case Command::lowfreq:
    case Command::static_solve:
      if (s.mode == DataMode::generic) fail(at("data.mode"), "data.mode must be clean for " + cmd);
      break;
    case Command::solve:
      if (!s.deltas.empty() && s.omega.imag() != 0.0)
        fail(at("frequency.deltas"), "frequency.deltas needs frequency.omega_im = 0");
      if (!s.deltas.empty() && (s.material_amplitude > 0.0 || !s.material_file.empty()))
        fail(at("frequency.deltas"), "frequency.deltas cannot be combined with a [material] block");
      if (!s.deltas.empty() && s.deltas.size() < 3)
        fail(at("frequency.deltas"), "frequency.deltas needs at least 3 levels");
      break;
    default: break;
  }
  if (cfg.write_fields && command != Command::solve) fail(at("output.fields"), "output.fields applies to solve only");
  cfg.canonical = canonical_text(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path, Command command) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::io_error, "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string base = std::filesystem::path(path).parent_path().string();
  try {
    return parse_config(ss.str(), command, base);
  } catch (const Error& e) {
    std::string msg = e.what();
    msg.erase(0, to_string(e.code()).size() + 2);
    throw Error(ErrorCode::config_error, path + ": " + msg);
  }
}

std::string run_id(const RunConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  const auto mix = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  mix(command_name(cfg.command));
  mix("\n");
  mix(cfg.canonical);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace formwave
