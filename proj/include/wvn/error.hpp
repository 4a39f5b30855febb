#pragma once

#include <stdexcept>
#include <string>

namespace wvn {

/// Error categories. The numeric values line up with the C API status codes.
enum class ErrorCode {
  invalid_input = 2,
  io = 3,
  budget_exceeded = 4,
  precondition = 5,
  internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* to_string(ErrorCode code) noexcept;

}  // namespace wvn
