#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace successodds {

/// Machine-greppable error categories. The CLI maps these onto exit codes.
enum class ErrorCode {
  parse,       ///< malformed input text (CSV cell, JSON document, decimal)
  scale,       ///< value does not fit the declared scale, or scales are incompatible
  degenerate,  ///< statistic undefined for this data (zero variance, theta on the boundary)
  usage,       ///< invalid argument or configuration
};

inline constexpr std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::parse: return "E_PARSE";
    case ErrorCode::scale: return "E_SCALE";
    case ErrorCode::degenerate: return "E_DEGENERATE";
    case ErrorCode::usage: return "E_USAGE";
  }
  return "E_UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace successodds
