#pragma once

#include <stdexcept>
#include <string>

namespace stratawave {

enum class ErrorCode {
  invalid_argument = 1,
  domain_error,
  degenerate_branch,
  amplitude_too_large,
  invalid_profile,
  numerical_failure,
  no_convergence,
  setup_error,
  degenerate_input,
  io_error,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above; the C
// API maps them one-to-one onto sw_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw Error(code, what);
}

}  // namespace stratawave
