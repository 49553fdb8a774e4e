#include "sidelink/mac.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "sidelink/error.hpp"

namespace sidelink::mac {

void TrafficModel::validate() const {
  if (!(packet_size_bytes > 0.0)) throw ConfigError("packet_size_bytes", "must be > 0");
  if (!(tx_frequency_hz > 0.0)) throw ConfigError("tx_frequency_hz", "must be > 0");
}

McsTable::McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw SimError(ErrorCode::invalid_argument, "McsTable: no entries");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (!(e.spectral_efficiency > 0.0)) {
      throw SimError(ErrorCode::invalid_argument, "McsTable: spectral efficiency must be > 0");
    }
    if (!(e.bler_slope_db > 0.0)) {
      throw SimError(ErrorCode::invalid_argument, "McsTable: BLER slope must be > 0");
    }
    if (i > 0 && !(e.spectral_efficiency > entries_[i - 1].spectral_efficiency)) {
      throw SimError(ErrorCode::invalid_argument,
                     "McsTable: spectral efficiencies must be strictly increasing");
    }
  }
}

McsTable McsTable::lte_cqi() {
  static constexpr double kEfficiencies[] = {0.1523, 0.2344, 0.3770, 0.6016, 0.8770,
                                             1.1758, 1.4766, 1.9141, 2.4063, 2.7305,
                                             3.3223, 3.9023, 4.5234, 5.1152, 5.5547};
  std::vector<McsEntry> entries;
  std::size_t index = 1;
  for (double se : kEfficiencies) entries.push_back({index++, se, 0.0, 2.0});
  return McsTable(std::move(entries));
}

McsTable load_mcs_table_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("mcs_table_file", "cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw ConfigError("mcs_table_file", "missing header row");

  std::vector<McsEntry> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    McsEntry e;
    if (!(fields >> e.index >> e.spectral_efficiency >> e.bler_threshold_db >> e.bler_slope_db)) {
      throw ConfigError("mcs_table_file", "malformed row at line " + std::to_string(line_no));
    }
    entries.push_back(e);
  }
  try {
    return McsTable(std::move(entries));
  } catch (const SimError& e) {
    throw ConfigError("mcs_table_file", e.what());
  }
}

McsTable calibrate_default_curves(const McsTable& table, double margin_db, double slope_db) {
  std::vector<McsEntry> out(table.entries().begin(), table.entries().end());
  for (auto& e : out) {
    e.bler_threshold_db = 10.0 * std::log10(std::exp2(e.spectral_efficiency) - 1.0) + margin_db;
    e.bler_slope_db = slope_db;
  }
  return McsTable(std::move(out));
}

double data_volume(double packet_size_bytes, std::size_t num_ues, double tx_frequency_hz) {
  return packet_size_bytes * 8.0 * static_cast<double>(num_ues) * tx_frequency_hz;
}

double required_se(double data_volume_bps, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) {
    throw SimError(ErrorCode::invalid_argument, "required_se: bandwidth must be > 0");
  }
  return data_volume_bps / bandwidth_hz;
}

const McsEntry& select_mcs(double required, const McsTable& table) {
  for (const auto& e : table.entries()) {
    if (e.spectral_efficiency >= required) return e;
  }
  throw SimError(ErrorCode::capacity_exceeded,
                 "required spectral efficiency " + std::to_string(required) +
                     " b/s/Hz exceeds the MCS table maximum " + std::to_string(table.max_se()));
}

double bler(double sinr_db, const McsEntry& mcs) noexcept {
  static const double kLn99 = std::log(99.0);
  const double x = (sinr_db - mcs.bler_threshold_db) / mcs.bler_slope_db * kLn99;
  return 1.0 / (1.0 + std::exp(x));
}

std::string_view to_string(AllocationPolicy p) noexcept {
  return p == AllocationPolicy::random ? "random" : "round_robin";
}

AllocationPolicy parse_allocation_policy(std::string_view text) {
  if (text == "round_robin" || text == "round-robin") return AllocationPolicy::round_robin;
  if (text == "random") return AllocationPolicy::random;
  throw ConfigError("allocation_policy",
                    "expected round_robin or random, got '" + std::string(text) + "'");
}

std::size_t num_slots(double bandwidth_hz, const TrafficModel& traffic, const McsEntry& mcs) {
  const double k = std::floor(bandwidth_hz * traffic.period_s() * mcs.spectral_efficiency /
                              traffic.packet_bits());
  return k > 0.0 ? static_cast<std::size_t>(k) : 0;
}

void ResourceGrid::assign(geometry::VehicleId tx, std::size_t slot) {
  if (slot >= num_slots_) {
    throw SimError(ErrorCode::invalid_argument, "ResourceGrid: slot index out of range");
  }
  if (!assignment_.emplace(tx, slot).second) {
    throw SimError(ErrorCode::invalid_argument, "ResourceGrid: transmitter assigned twice");
  }
  auto& m = members_[slot];
  m.insert(std::upper_bound(m.begin(), m.end(), tx), tx);
}

std::size_t ResourceGrid::slot_of(geometry::VehicleId tx) const {
  auto it = assignment_.find(tx);
  if (it == assignment_.end()) {
    throw SimError(ErrorCode::invalid_argument, "ResourceGrid: transmitter not scheduled");
  }
  return it->second;
}

std::vector<geometry::VehicleId> ResourceGrid::co_channel(geometry::VehicleId tx) const {
  std::vector<geometry::VehicleId> out;
  for (auto id : members_.at(slot_of(tx))) {
    if (id != tx) out.push_back(id);
  }
  return out;
}

ResourceGrid allocate_resources(std::span<const geometry::Vehicle> vehicles, const McsEntry& mcs,
                                const TrafficModel& traffic, double bandwidth_hz,
                                AllocationPolicy policy, Rng& rng) {
  const std::size_t k = num_slots(bandwidth_hz, traffic, mcs);
  if (k == 0) {
    throw SimError(ErrorCode::capacity_exceeded,
                   "no packet-sized resource fits one period at SE " +
                       std::to_string(mcs.spectral_efficiency));
  }

  std::map<geometry::CellId, std::vector<geometry::VehicleId>> by_cell;
  for (const auto& v : vehicles) by_cell[v.attached_cell].push_back(v.id);

  ResourceGrid grid(k);
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  for (auto& [cell, ids] : by_cell) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      grid.assign(ids[i], policy == AllocationPolicy::round_robin ? i % k : pick(rng));
    }
  }
  return grid;
}

}  // namespace sidelink::mac
