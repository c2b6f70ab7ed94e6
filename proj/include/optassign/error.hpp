#pragma once

#include <stdexcept>
#include <string>

namespace optassign {

enum class ErrorCode {
  unknown_id,
  unranked_pair,
  profile_shape_mismatch,
  z_too_large,
  weight_overflow,
  invalid_weight_fn,
  incomplete_preferences,
  shape_error,
  instance_too_large,
  config_invalid,
  io_error,
  invalid_instance,
  invalid_matching,
  parse_error,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a stable error code; the CLI maps codes to exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace optassign
