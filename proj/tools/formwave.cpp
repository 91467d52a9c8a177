#include <malloc.h>

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "formwave/config.hpp"
#include "formwave/errors.hpp"
#include "formwave/kernels.hpp"
#include "formwave/report_io.hpp"

int main(int argc, char** argv) {
  // Fields run to hundreds of MB; keep freed blocks in the heap instead of
  // returning them to the kernel and faulting them in again on the next allocation.
  mallopt(M_MMAP_MAX, 0);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);

  CLI::App app{"formwave: differential-form Maxwell solver and verification runs"};
  std::string command;
  std::string config;
  std::string out_dir;
  int threads = 0;
  app.add_option("command", command, "identities | solve | static | lowfreq | bound | oracle | kernel-check | radiation")
      ->required();
  app.add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (overrides output.dir)");
  app.add_option("--threads", threads, "OpenMP threads (default: FORMWAVE_THREADS)")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (threads == 0) {
    if (const char* env = std::getenv("FORMWAVE_THREADS")) {
      try {
        threads = std::stoi(env);
      } catch (const std::exception&) {
        threads = 0;
      }
      if (threads <= 0) {
        std::cerr << "FORMWAVE_THREADS must be a positive integer, got '" << env << "'\n";
        return 2;
      }
    }
  }
  formwave::kernels::set_thread_count(threads);

  formwave::RunConfig cfg;
  try {
    cfg = formwave::load_config(config, formwave::parse_command(command));
  } catch (const formwave::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  try {
    return formwave::run_command(cfg, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
