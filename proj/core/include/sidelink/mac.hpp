#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "sidelink/geometry.hpp"
#include "sidelink/rng.hpp"

namespace sidelink::mac {

struct TrafficModel {
  double packet_size_bytes = 256.0;
  double tx_frequency_hz = 10.0;

  double period_s() const noexcept { return 1.0 / tx_frequency_hz; }
  double packet_bits() const noexcept { return packet_size_bytes * 8.0; }
  void validate() const;
};

struct McsEntry {
  std::size_t index = 0;
  double spectral_efficiency = 0.0;  // bit/s/Hz
  double bler_threshold_db = 0.0;    // SINR where BLER = 0.5
  double bler_slope_db = 2.0;        // BLER(threshold + slope) = 0.01
};

/// Entries ordered by strictly increasing spectral efficiency.
class McsTable {
 public:
  explicit McsTable(std::vector<McsEntry> entries);

  /// The 15 LTE CQI efficiencies (indices 1..15), curves not yet calibrated.
  static McsTable lte_cqi();

  std::span<const McsEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  double max_se() const noexcept { return entries_.back().spectral_efficiency; }

 private:
  std::vector<McsEntry> entries_;
};

/// Reads `index,se,threshold_db,slope_db` rows after a mandatory header line.
McsTable load_mcs_table_csv(const std::filesystem::path& path);

/// Shannon inverse plus margin: threshold = 10 log10(2^SE - 1) + margin.
McsTable calibrate_default_curves(const McsTable& table, double margin_db = 2.0,
                                  double slope_db = 2.0);

/// P * 8 * UE * TF, in bit/s.
double data_volume(double packet_size_bytes, std::size_t num_ues, double tx_frequency_hz);

double required_se(double data_volume_bps, double bandwidth_hz);

/// Smallest entry with spectral_efficiency >= required; throws
/// capacity_exceeded when nothing qualifies.
const McsEntry& select_mcs(double required_se, const McsTable& table);

/// Logistic waterfall: 0.5 at the threshold, 0.01 one slope above it.
double bler(double sinr_db, const McsEntry& mcs) noexcept;

enum class AllocationPolicy { round_robin, random };

std::string_view to_string(AllocationPolicy p) noexcept;
AllocationPolicy parse_allocation_policy(std::string_view text);

/// Orthogonal packet-sized resources in one traffic period:
/// floor(BW * period * SE / packet_bits).
std::size_t num_slots(double bandwidth_hz, const TrafficModel& traffic, const McsEntry& mcs);

class ResourceGrid {
 public:
  ResourceGrid() = default;
  explicit ResourceGrid(std::size_t num_slots) : num_slots_(num_slots) {}

  void assign(geometry::VehicleId tx, std::size_t slot);

  std::size_t num_slots() const noexcept { return num_slots_; }
  const std::map<geometry::VehicleId, std::size_t>& assignment() const noexcept { return assignment_; }
  std::size_t slot_of(geometry::VehicleId tx) const;

  /// Other transmitters sharing tx's slot, ascending id.
  std::vector<geometry::VehicleId> co_channel(geometry::VehicleId tx) const;

 private:
  std::size_t num_slots_ = 0;
  std::map<geometry::VehicleId, std::size_t> assignment_;
  std::map<std::size_t, std::vector<geometry::VehicleId>> members_;
};

/// Mode-3 allocation: each cell assigns its own transmitters to the K slots
/// independently (reuse-1 across cells). Throws capacity_exceeded when K = 0.
ResourceGrid allocate_resources(std::span<const geometry::Vehicle> vehicles, const McsEntry& mcs,
                                const TrafficModel& traffic, double bandwidth_hz,
                                AllocationPolicy policy, Rng& rng);

}  // namespace sidelink::mac
