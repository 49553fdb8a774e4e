#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sidelink/geometry.hpp"
#include "sidelink/linkbudget.hpp"
#include "sidelink/mac.hpp"
#include "sidelink/rng.hpp"

namespace sidelink::metrics {

enum class PrrMode { deterministic, bernoulli };

std::string_view to_string(PrrMode m) noexcept;
PrrMode parse_prr_mode(std::string_view text);

struct PrrOptions {
  /// A receiver succeeds when its BLER is strictly below this value.
  double bler_threshold = 0.01;
  PrrMode mode = PrrMode::deterministic;
  /// Count half-duplex-skipped receivers as failures instead of excluding them.
  bool halfduplex_as_loss = false;

  void validate() const;
};

struct PrrSample {
  geometry::VehicleId tx_id = 0;
  std::size_t num_in_range = 0;
  std::size_t num_success = 0;
  /// Empty when num_in_range == 0.
  std::optional<double> prr;
};

struct WarningCounters {
  std::uint64_t clamped_distances = 0;
  std::uint64_t half_duplex_skips = 0;

  WarningCounters& operator+=(const WarningCounters& o) noexcept {
    clamped_distances += o.clamped_distances;
    half_duplex_skips += o.half_duplex_skips;
    return *this;
  }
};

struct AggregateResult {
  double mean_prr = 0.0;
  double stderr_prr = 0.0;
  std::vector<double> per_seed_prr;
  WarningCounters warnings;
};

/// Packet reception ratio of one transmitter's broadcast. `rng` is only
/// drawn from in bernoulli mode.
PrrSample prr_for_tx(std::span<const linkbudget::LinkBudgetRecord> budgets,
                     const mac::McsEntry& mcs, const PrrOptions& options, Rng& rng);

/// Sums counts of two samples of the same transmitter (repeated periods).
PrrSample combine(const PrrSample& a, const PrrSample& b);

/// Mean over transmitters with a defined PRR within each seed, then mean and
/// standard error over seeds. Throws no_samples when nothing is defined.
AggregateResult aggregate(std::span<const std::vector<PrrSample>> per_seed_samples);

}  // namespace sidelink::metrics
