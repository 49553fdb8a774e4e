#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sidelink/channel.hpp"
#include "sidelink/error.hpp"
#include "sidelink/geometry.hpp"
#include "sidelink/linkbudget.hpp"
#include "sidelink/mac.hpp"
#include "sidelink/metrics.hpp"

namespace sidelink::engine {

struct MacConfig {
  mac::AllocationPolicy policy = mac::AllocationPolicy::round_robin;
  double bler_margin_db = 2.0;
  double bler_slope_db = 2.0;
  /// Optional curve file; overrides the Shannon-plus-margin calibration.
  std::string mcs_table_file;
};

struct SweepSpec {
  std::vector<double> ivd_values_m{5, 10, 20, 40, 50, 80, 100};
  std::vector<double> tx_frequency_values_hz{10};

  void validate() const;
};

struct SimConfig {
  geometry::ScenarioConfig scenario;
  channel::ChannelParams channel;
  linkbudget::RadioParams radio;
  mac::TrafficModel traffic;
  MacConfig mac;
  metrics::PrrOptions metrics;
  std::size_t num_seeds = 20;
  std::uint64_t master_seed = 1;
  /// Bernoulli draws per drop; deterministic mode always evaluates once.
  std::size_t periods_per_drop = 10;
  SweepSpec sweep;

  void validate() const;
  /// Loads mac.mcs_table_file when set, otherwise the calibrated CQI table.
  mac::McsTable mcs_table() const;
};

struct DropResult {
  std::vector<metrics::PrrSample> samples;
  std::vector<std::size_t> slot_of;  ///< indexed by vehicle id
  std::size_t num_ues = 0;
  double data_volume_bps = 0.0;
  double required_se = 0.0;
  double mcs_se = 0.0;
  std::size_t num_slots = 0;
  metrics::WarningCounters warnings;
};

/// One static drop: deploy, pick the MCS, allocate, then evaluate every
/// vehicle's broadcast against its in-range receivers and its co-slot
/// interferers.
DropResult run_drop(const SimConfig& config, std::uint64_t seed, const mac::McsTable& table);
DropResult run_drop(const SimConfig& config, std::uint64_t seed);

/// Seed of drop `seed_index` in the sweep cell (ivd, tf). Keyed by the cell's
/// values, so adding sweep points leaves existing cells' streams untouched.
std::uint64_t cell_seed(std::uint64_t master_seed, double ivd_m, double tx_frequency_hz,
                        std::size_t seed_index) noexcept;

struct SweepResult {
  double ivd_m = 0.0;
  double tx_frequency_hz = 0.0;
  std::size_t num_ues = 0;
  double data_volume_bps = 0.0;
  std::optional<double> mcs_se;
  std::optional<metrics::AggregateResult> prr;
  std::size_t num_seeds = 0;
  std::optional<ErrorCode> error;
  std::string error_message;

  bool ok() const noexcept { return !error.has_value(); }
};

struct SweepOptions {
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
  /// Called after every finished drop with (done, total). May be called from
  /// worker threads, serialized.
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Cartesian product ivd x tf in input order; each cell runs config.num_seeds
/// drops. Per-cell failures are recorded in the row and the sweep continues.
std::vector<SweepResult> run_sweep(const SimConfig& config, const SweepSpec& spec,
                                   const SweepOptions& options = {});

}  // namespace sidelink::engine
