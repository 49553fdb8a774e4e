#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "sidelink/engine.hpp"

namespace sidelink::cli {

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr std::string_view kCsvHeader =
    "ivd_m,tx_freq_hz,num_ues,data_volume_mbps,mcs_se,prr_mean,prr_stderr,num_seeds,error";

enum class OutputFormat { csv, json, both };

OutputFormat parse_output_format(std::string_view text);

/// Fixed 4-decimal rendering shared by the CSV, JSON and table writers.
std::string fixed4(double v);

/// Shortest round-trip rendering, e.g. 100 -> "100", 0.5 -> "0.5".
std::string shortest(double v);

std::string format_csv(std::span<const engine::SweepResult> rows);

/// Same fields as the CSV (same 4-decimal values) plus per-seed PRR arrays and
/// warning counters.
nlohmann::json to_json(std::span<const engine::SweepResult> rows);

/// Fixed-width table for terminals.
std::string format_table(std::span<const engine::SweepResult> rows);

struct RunInfo {
  std::string command;
  engine::SimConfig config;
};

struct OutputBundle {
  std::filesystem::path results_csv;   ///< empty unless written
  std::filesystem::path results_json;  ///< empty unless written
  std::filesystem::path run_manifest;
};

/// Writes results.csv / results.json and manifest.json into out_dir. The
/// manifest embeds the full resolved config, so `--config manifest.json`
/// reproduces the run.
OutputBundle emit_results(std::span<const engine::SweepResult> rows, OutputFormat format,
                          const std::filesystem::path& out_dir, const RunInfo& info);

nlohmann::json make_manifest(std::span<const engine::SweepResult> rows, const RunInfo& info);

}  // namespace sidelink::cli
