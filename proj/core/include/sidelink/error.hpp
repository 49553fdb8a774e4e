#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sidelink {

enum class ErrorCode {
  invalid_argument,
  capacity_exceeded,
  out_of_validity,
  nlos_height,
  no_samples,
  config,
  io,
};

/// Stable snake_case name, used in CSV/JSON error fields.
std::string_view to_string(ErrorCode code) noexcept;

class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Configuration error tied to one key of the config file.
class ConfigError : public SimError {
 public:
  ConfigError(std::string key, const std::string& reason)
      : SimError(ErrorCode::config, key + ": " + reason), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace sidelink
