#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stvmd {

enum class ErrorCode {
  BadWindow,
  WindowTooLong,
  BadModeCount,
  BadConfig,
  NonFinite,
  CustomLengthMismatch,
  PadTooLarge,
  ZeroWindowSum,
  ShapeMismatch,
  ParseError,
  RaggedEpochs,
  DegenerateVariance,
  UnknownSignal,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every recoverable failure in the library is reported through this type;
// callers branch on code() rather than on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stvmd
