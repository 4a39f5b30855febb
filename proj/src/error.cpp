#include "wvn/error.hpp"

namespace wvn {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid input";
    case ErrorCode::io: return "i/o error";
    case ErrorCode::budget_exceeded: return "budget exceeded";
    case ErrorCode::precondition: return "precondition violated";
    case ErrorCode::internal: return "internal error";
  }
  return "unknown";
}

}  // namespace wvn
