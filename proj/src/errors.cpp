#include "formwave/errors.hpp"

namespace formwave {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::grid_mismatch: return "grid mismatch";
    case ErrorCode::rank_mismatch: return "rank mismatch";
    case ErrorCode::rank_overflow: return "rank overflow";
    case ErrorCode::wrong_space: return "wrong space";
    case ErrorCode::support_out_of_box: return "support out of box";
    case ErrorCode::resonant_mode: return "resonant mode";
    case ErrorCode::zero_frequency: return "zero frequency";
    case ErrorCode::not_solenoidal: return "not solenoidal";
    case ErrorCode::not_irrotational: return "not irrotational";
    case ErrorCode::nonzero_mean: return "nonzero mean";
    case ErrorCode::not_admissible: return "not admissible";
    case ErrorCode::diverged: return "diverged";
    case ErrorCode::max_iter: return "max iterations";
    case ErrorCode::non_cauchy: return "non-Cauchy";
    case ErrorCode::calibration_failed: return "calibration failed";
    case ErrorCode::singular_evaluation: return "singular evaluation";
    case ErrorCode::insufficient_shells: return "insufficient shells";
    case ErrorCode::io_error: return "I/O error";
    case ErrorCode::config_error: return "config error";
  }
  return "unknown error";
}

}  // namespace formwave
