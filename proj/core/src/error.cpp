#include "sidelink/error.hpp"

namespace sidelink {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::capacity_exceeded: return "capacity_exceeded";
    case ErrorCode::out_of_validity: return "out_of_validity";
    case ErrorCode::nlos_height: return "nlos_height";
    case ErrorCode::no_samples: return "no_samples";
    case ErrorCode::config: return "config_error";
    case ErrorCode::io: return "io_error";
  }
  return "unknown";
}

}  // namespace sidelink
