#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace sidelink::geometry {

using VehicleId = std::size_t;
using CellId = std::size_t;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b) noexcept;

/// Highway deployment parameters. Defaults are the reference highway setup.
struct ScenarioConfig {
  double highway_length_m = 3000.0;
  /// Populated span, centered in the highway.
  double evaluation_length_m = 1600.0;
  std::size_t num_lanes = 6;
  double lane_width_m = 4.0;
  double ivd_m = 100.0;
  double comm_range_m = 400.0;
  double bs_isd_m = 1732.0;
  double bs_height_m = 35.0;
  double ue_height_m = 1.5;
  /// Disables the per-lane random start offset.
  bool aligned_lanes = false;
  /// Lateral distance of the BS row from the outermost lane edge.
  double bs_setback_m = 10.0;
  /// Stored for completeness; positions are a static snapshot.
  double vehicle_speed_kmh = 140.0;

  /// Throws ConfigError naming the first violated key.
  void validate() const;
};

struct HighwayScenario {
  double highway_length_m;
  double evaluation_length_m;
  std::size_t num_lanes;
  double lane_width_m;
  double ivd_m;
  double comm_range_m;
  double bs_isd_m;
  double bs_antenna_height_m;
  double ue_antenna_height_m;
};

struct Vehicle {
  VehicleId id = 0;
  Point position;
  std::size_t lane_index = 0;
  CellId attached_cell = 0;
};

struct BaseStation {
  CellId id = 0;
  Point position;
  double antenna_height_m = 0.0;
};

/// One static drop. Vehicle ids equal their index in `vehicles`.
struct Deployment {
  HighwayScenario scenario;
  std::vector<Vehicle> vehicles;
  std::vector<BaseStation> base_stations;
};

/// floor(evaluation_length / ivd) * num_lanes, computed without placing anything.
std::size_t expected_vehicle_count(const ScenarioConfig& config);

/// Places vehicles lane by lane (ids are lane-major, ascending x within a
/// lane), places the BS row and attaches every vehicle to its nearest cell.
Deployment build_scenario(const ScenarioConfig& config, std::uint64_t seed);

/// Every other vehicle within `comm_range_m` (inclusive) of `tx`, ordered by
/// ascending distance, ties broken by lower id.
std::vector<Vehicle> receivers_in_range(const Vehicle& tx, std::span<const Vehicle> all,
                                        double comm_range_m);

/// Index-only variant of receivers_in_range used by the engine.
std::vector<VehicleId> receiver_ids_in_range(const Vehicle& tx, std::span<const Vehicle> all,
                                             double comm_range_m);

/// Nearest BS by 2-D distance, lower id on ties. Throws on an empty BS list.
std::vector<Vehicle> attach_cells(std::vector<Vehicle> vehicles,
                                  std::span<const BaseStation> base_stations);

}  // namespace sidelink::geometry
