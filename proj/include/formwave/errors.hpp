#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace formwave {

enum class ErrorCode {
  invalid_argument,
  grid_mismatch,
  rank_mismatch,
  rank_overflow,
  wrong_space,
  support_out_of_box,
  resonant_mode,
  zero_frequency,
  not_solenoidal,
  not_irrotational,
  nonzero_mean,
  not_admissible,
  diverged,
  max_iter,
  non_cauchy,
  calibration_failed,
  singular_evaluation,
  insufficient_shells,
  io_error,
  config_error,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace formwave
