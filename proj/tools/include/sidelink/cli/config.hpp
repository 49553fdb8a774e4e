#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "sidelink/engine.hpp"

namespace sidelink::cli {

/// Parses the sectioned key-value config format. Keys missing from the text
/// keep their defaults; unknown sections or keys are rejected.
/// Relative `mcs_table_file` paths resolve against `base_dir`.
engine::SimConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});

/// Reads an INI config file, or the embedded config of a run manifest when
/// the file ends in `.json`. Throws ConfigError.
engine::SimConfig load_config(const std::filesystem::path& path);

/// Canonical INI text; parse_config(to_ini(c)) reproduces c exactly.
std::string to_ini(const engine::SimConfig& config);

}  // namespace sidelink::cli
