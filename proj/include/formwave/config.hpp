#pragma once

#include <map>
#include <string>
#include <string_view>

#include "formwave/verify.hpp"

namespace formwave {

/// Commands understood by the front end.
enum class Command { identities, solve, static_solve, lowfreq, bound, oracle, kernel_check, radiation };

Command parse_command(std::string_view name);
std::string_view command_name(Command c);

struct RunConfig {
  Command command = Command::identities;
  SweepConfig sweep;         ///< data.mode = zero runs identities on all-zero fields

  std::string out_dir = ".";
  bool write_csv = true;
  bool write_json = true;
  bool write_plot = false;
  bool write_fields = false;  ///< solve only: dump the solution pair

  /// Normalized "section.key=value" lines of every recognized key, sorted; the run id
  /// hashes this text together with the command.
  std::string canonical;
};

/// Parses sectioned `key = value` text ('#' and ';' start comments). Errors carry the
/// 1-based line number and the dotted key name; constraint violations from
/// SweepConfig::validate are reported against the line that set the key.
/// Relative file paths in the config resolve against `base_dir`.
RunConfig parse_config(std::string_view text, Command command, const std::string& base_dir = "");
RunConfig load_config(const std::string& path, Command command);

/// 16 hex digits of the FNV-1a hash of the command and the canonical config.
std::string run_id(const RunConfig& cfg);

}  // namespace formwave
