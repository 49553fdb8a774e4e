#include "sidelink/cli/output.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sidelink/cli/config.hpp"

namespace sidelink::cli {

OutputFormat parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  if (text == "both") return OutputFormat::both;
  throw ConfigError("format", "expected csv, json or both, got '" + std::string(text) + "'");
}

std::string fixed4(double v) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.4f", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

double rounded4(double v) { return std::stod(fixed4(v)); }

std::string error_field(const engine::SweepResult& r) {
  return r.error ? std::string(to_string(*r.error)) : std::string();
}

}  // namespace

std::string format_csv(std::span<const engine::SweepResult> rows) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << shortest(r.ivd_m) << ',' << shortest(r.tx_frequency_hz) << ',' << r.num_ues << ','
       << fixed4(r.data_volume_bps / 1e6) << ',' << (r.mcs_se ? fixed4(*r.mcs_se) : "") << ',';
    if (r.prr) {
      os << fixed4(r.prr->mean_prr) << ',' << fixed4(r.prr->stderr_prr) << ',' << r.num_seeds;
    } else {
      os << ",,";
    }
    os << ',' << error_field(r) << '\n';
  }
  return os.str();
}

nlohmann::json to_json(std::span<const engine::SweepResult> rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["ivd_m"] = r.ivd_m;
    j["tx_freq_hz"] = r.tx_frequency_hz;
    j["num_ues"] = r.num_ues;
    j["data_volume_mbps"] = rounded4(r.data_volume_bps / 1e6);
    j["mcs_se"] = r.mcs_se ? nlohmann::json(rounded4(*r.mcs_se)) : nlohmann::json(nullptr);
    if (r.prr) {
      j["prr_mean"] = rounded4(r.prr->mean_prr);
      j["prr_stderr"] = rounded4(r.prr->stderr_prr);
      j["num_seeds"] = r.num_seeds;
      j["per_seed_prr"] = r.prr->per_seed_prr;
      j["warnings"] = {{"clamped_distances", r.prr->warnings.clamped_distances},
                       {"half_duplex_skips", r.prr->warnings.half_duplex_skips}};
    } else {
      j["prr_mean"] = nullptr;
      j["prr_stderr"] = nullptr;
      j["num_seeds"] = nullptr;
      j["per_seed_prr"] = nlohmann::json::array();
    }
    j["error"] = error_field(r);
    if (r.error) j["error_message"] = r.error_message;
    out.push_back(std::move(j));
  }
  return out;
}

std::string format_table(std::span<const engine::SweepResult> rows) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%8s %8s %8s %14s %10s %10s %10s  %s\n", "IVD[m]", "TF[Hz]", "UEs",
                "Volume[Mbps]", "MCS SE", "PRR[%]", "+/-[%]", "error");
  os << line;
  for (const auto& r : rows) {
    const std::string se = r.mcs_se ? fixed4(*r.mcs_se) : "-";
    const std::string prr = r.prr ? fixed4(100.0 * r.prr->mean_prr).substr(0, 7) : "-";
    const std::string err = r.prr ? fixed4(100.0 * r.prr->stderr_prr).substr(0, 7) : "-";
    std::snprintf(line, sizeof line, "%8s %8s %8zu %14s %10s %10s %10s  %s\n",
                  shortest(r.ivd_m).c_str(), shortest(r.tx_frequency_hz).c_str(), r.num_ues,
                  fixed4(r.data_volume_bps / 1e6).c_str(), se.c_str(), prr.c_str(), err.c_str(),
                  error_field(r).c_str());
    os << line;
  }
  return os.str();
}

nlohmann::json make_manifest(std::span<const engine::SweepResult> rows, const RunInfo& info) {
  metrics::WarningCounters totals;
  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (r.prr) totals += r.prr->warnings;
    if (!r.ok()) ++failed;
  }
  nlohmann::json m;
  m["tool"] = "sidelink_sim";
  m["version"] = kVersion;
  m["command"] = info.command;
  m["master_seed"] = info.config.master_seed;
  m["num_seeds"] = info.config.num_seeds;
  m["rows"] = rows.size();
  m["failed_rows"] = failed;
  m["warnings"] = {{"clamped_distances", totals.clamped_distances},
                   {"half_duplex_skips", totals.half_duplex_skips}};
  m["config"] = to_ini(info.config);
  return m;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SimError(ErrorCode::io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw SimError(ErrorCode::io, "write failed for '" + path.string() + "'");
}

}  // namespace

OutputBundle emit_results(std::span<const engine::SweepResult> rows, OutputFormat format,
                          const std::filesystem::path& out_dir, const RunInfo& info) {
  if (rows.empty()) throw SimError(ErrorCode::invalid_argument, "emit_results: no rows");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw SimError(ErrorCode::io, "cannot create '" + out_dir.string() + "': " + ec.message());
  }

  OutputBundle bundle;
  if (format != OutputFormat::json) {
    bundle.results_csv = out_dir / "results.csv";
    write_file(bundle.results_csv, format_csv(rows));
  }
  if (format != OutputFormat::csv) {
    bundle.results_json = out_dir / "results.json";
    write_file(bundle.results_json, to_json(rows).dump(2) + '\n');
  }
  bundle.run_manifest = out_dir / "manifest.json";
  write_file(bundle.run_manifest, make_manifest(rows, info).dump(2) + '\n');
  return bundle;
}

}  // namespace sidelink::cli
