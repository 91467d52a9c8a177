#pragma once

#include <iosfwd>
#include <string>

#include "formwave/config.hpp"
#include "formwave/verify.hpp"

namespace formwave {

/// Fixed header, one line per row, doubles as %.17g, pass as true/false.
inline constexpr const char* csv_header =
    "run_id,command,N,q,n,L,omega_re,omega_im,delta,s,t_tilde,quantity,value,tolerance,pass";

void write_csv(std::ostream& out, const SolveReport& report, const std::string& run_id);
/// Pass/fail summary with the failing rows, phase timings and the canonical config.
void write_json(std::ostream& out, const SolveReport& report, const RunConfig& cfg);
/// gnuplot script drawing every repeated quantity of `csv_name` against |omega|
/// (or n when omega is fixed), rendered to <command>.png.
void write_plot_script(std::ostream& out, const SolveReport& report, const std::string& csv_name);

/// Runs the configured command, writes the enabled artifacts into cfg.out_dir and
/// returns 0 when every row passes, 1 otherwise. Progress goes to `log`.
int run_command(const RunConfig& cfg, std::ostream& log);

}  // namespace formwave
