#include "optassign/error.hpp"

namespace optassign {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::unknown_id: return "UNKNOWN_ID";
    case ErrorCode::unranked_pair: return "UNRANKED_PAIR";
    case ErrorCode::profile_shape_mismatch: return "PROFILE_SHAPE_MISMATCH";
    case ErrorCode::z_too_large: return "Z_TOO_LARGE";
    case ErrorCode::weight_overflow: return "WEIGHT_OVERFLOW";
    case ErrorCode::invalid_weight_fn: return "INVALID_WEIGHT_FN";
    case ErrorCode::incomplete_preferences: return "INCOMPLETE_PREFERENCES";
    case ErrorCode::shape_error: return "SHAPE_ERROR";
    case ErrorCode::instance_too_large: return "INSTANCE_TOO_LARGE";
    case ErrorCode::config_invalid: return "CONFIG_INVALID";
    case ErrorCode::io_error: return "IO_ERROR";
    case ErrorCode::invalid_instance: return "INVALID_INSTANCE";
    case ErrorCode::invalid_matching: return "INVALID_MATCHING";
    case ErrorCode::parse_error: return "PARSE_ERROR";
  }
  return "UNKNOWN_ERROR";
}

}  // namespace optassign
