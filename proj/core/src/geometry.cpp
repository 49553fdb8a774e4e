#include "sidelink/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sidelink/error.hpp"
#include "sidelink/rng.hpp"

namespace sidelink::geometry {

double distance(const Point& a, const Point& b) noexcept {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* key, const char* reason) {
    if (!ok) throw ConfigError(key, reason);
  };
  require(highway_length_m > 0.0, "highway_length_m", "must be > 0");
  require(evaluation_length_m > 0.0, "evaluation_length_m", "must be > 0");
  require(evaluation_length_m <= highway_length_m, "evaluation_length_m",
          "must not exceed highway_length_m");
  require(num_lanes >= 1, "num_lanes", "must be >= 1");
  require(lane_width_m > 0.0, "lane_width_m", "must be > 0");
  require(ivd_m > 0.0, "ivd_m", "must be > 0");
  require(comm_range_m > 0.0, "comm_range_m", "must be > 0");
  require(bs_isd_m > 0.0, "bs_isd_m", "must be > 0");
  require(bs_height_m > 0.0, "bs_height_m", "must be > 0");
  require(ue_height_m > 0.0, "ue_height_m", "must be > 0");
  require(bs_setback_m >= 0.0, "bs_setback_m", "must be >= 0");
  require(vehicle_speed_kmh >= 0.0, "vehicle_speed_kmh", "must be >= 0");
}

std::size_t expected_vehicle_count(const ScenarioConfig& config) {
  config.validate();
  const auto per_lane = static_cast<std::size_t>(std::floor(config.evaluation_length_m / config.ivd_m));
  return per_lane * config.num_lanes;
}

Deployment build_scenario(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();

  Deployment d{
      .scenario = {config.highway_length_m, config.evaluation_length_m, config.num_lanes,
                   config.lane_width_m, config.ivd_m, config.comm_range_m, config.bs_isd_m,
                   config.bs_height_m, config.ue_height_m},
      .vehicles = {},
      .base_stations = {},
  };

  const auto per_lane = static_cast<std::size_t>(std::floor(config.evaluation_length_m / config.ivd_m));
  const double start = 0.5 * (config.highway_length_m - config.evaluation_length_m);

  Rng rng = make_rng(seed, Stream::placement);
  std::uniform_real_distribution<double> offset_dist(0.0, config.ivd_m);

  d.vehicles.reserve(per_lane * config.num_lanes);
  for (std::size_t lane = 0; lane < config.num_lanes; ++lane) {
    const double offset = config.aligned_lanes ? 0.0 : offset_dist(rng);
    const double y = (static_cast<double>(lane) + 0.5) * config.lane_width_m;
    for (std::size_t k = 0; k < per_lane; ++k) {
      Vehicle v;
      v.id = d.vehicles.size();
      v.position = {start + offset + static_cast<double>(k) * config.ivd_m, y};
      v.lane_index = lane;
      d.vehicles.push_back(v);
    }
  }

  const double bs_y = static_cast<double>(config.num_lanes) * config.lane_width_m + config.bs_setback_m;
  for (std::size_t i = 0;; ++i) {
    const double x = static_cast<double>(i) * config.bs_isd_m;
    if (x > config.highway_length_m) break;
    d.base_stations.push_back({i, {x, bs_y}, config.bs_height_m});
  }

  d.vehicles = attach_cells(std::move(d.vehicles), d.base_stations);
  return d;
}

namespace {

template <typename Out, typename Emit>
void collect_in_range(const Vehicle& tx, std::span<const Vehicle> all, double comm_range_m,
                      Out& out, Emit emit) {
  struct Hit {
    double dist;
    std::size_t index;
  };
  std::vector<Hit> hits;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].id == tx.id) continue;
    const double dist = distance(tx.position, all[i].position);
    if (dist <= comm_range_m) hits.push_back({dist, i});
  }
  std::sort(hits.begin(), hits.end(), [&](const Hit& a, const Hit& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return all[a.index].id < all[b.index].id;
  });
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(emit(all[h.index]));
}

}  // namespace

std::vector<Vehicle> receivers_in_range(const Vehicle& tx, std::span<const Vehicle> all,
                                        double comm_range_m) {
  std::vector<Vehicle> out;
  collect_in_range(tx, all, comm_range_m, out, [](const Vehicle& v) { return v; });
  return out;
}

std::vector<VehicleId> receiver_ids_in_range(const Vehicle& tx, std::span<const Vehicle> all,
                                             double comm_range_m) {
  std::vector<VehicleId> out;
  collect_in_range(tx, all, comm_range_m, out, [](const Vehicle& v) { return v.id; });
  return out;
}

std::vector<Vehicle> attach_cells(std::vector<Vehicle> vehicles,
                                  std::span<const BaseStation> base_stations) {
  if (base_stations.empty()) {
    throw SimError(ErrorCode::invalid_argument, "attach_cells: empty base station list");
  }
  for (auto& v : vehicles) {
    const BaseStation* best = nullptr;
    double best_dist = 0.0;
    for (const auto& bs : base_stations) {
      const double dist = distance(v.position, bs.position);
      if (best == nullptr || dist < best_dist || (dist == best_dist && bs.id < best->id)) {
        best = &bs;
        best_dist = dist;
      }
    }
    v.attached_cell = best->id;
  }
  return vehicles;
}

}  // namespace sidelink::geometry
