#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <string_view>

#include "sidelink/geometry.hpp"
#include "sidelink/rng.hpp"

namespace sidelink::channel {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

/// WINNER II validity limits.
inline constexpr double kLosMinDistance = 10.0;
inline constexpr double kLosMaxDistance = 10'000.0;
inline constexpr double kNlosMinDistance = 50.0;
inline constexpr double kNlosMaxDistance = 5'000.0;

enum class LosMode { always_los, always_nlos, fixed_probability };
enum class Regime { los_near, los_far, nlos };

std::string_view to_string(LosMode m) noexcept;
std::string_view to_string(Regime r) noexcept;
LosMode parse_los_mode(std::string_view text);

struct ChannelParams {
  double carrier_freq_hz = 5.9e9;
  double sigma_los_near_db = 4.0;
  double sigma_los_far_db = 6.0;
  double sigma_nlos_db = 8.0;
  LosMode los_mode = LosMode::always_los;
  /// Probability of NLOS per link, used in fixed_probability mode.
  double nlos_probability = 0.0;
  bool shadowing_enabled = true;

  void validate() const;
};

struct PathlossResult {
  double pathloss_db = 0.0;  ///< deterministic part, shadowing excluded
  Regime regime = Regime::los_near;
  double shadowing_db = 0.0;
  double breakpoint_m = 0.0;
  double distance_m = 0.0;
  bool clamped = false;  ///< distance raised to the model's validity floor

  double total_loss_db() const noexcept { return pathloss_db + shadowing_db; }
};

struct LosPathloss {
  double pathloss_db;
  Regime regime;
  bool clamped;
};

struct NlosPathloss {
  double pathloss_db;
  bool clamped;
};

/// 4 h_tx h_rx f_c / c.
double breakpoint_distance(double h_tx_m, double h_rx_m, double carrier_freq_hz);

/// LOS pathloss; near branch below the breakpoint, far branch at and above it.
/// Distances below 10 m are evaluated at 10 m and flagged; above 10 km throws.
LosPathloss pathloss_los(double d_m, double h_tx_m, double h_rx_m, double carrier_freq_hz);

/// NLOS pathloss. Requires h_bs > 25 m; distances below 50 m are evaluated at
/// 50 m and flagged; above 5 km throws.
NlosPathloss pathloss_nlos(double d_m, double h_bs_m, double h_ms_m, double carrier_freq_hz);

double shadowing_sigma(Regime regime, const ChannelParams& params) noexcept;

/// Zero-mean Gaussian in dB with the regime's standard deviation.
double sample_shadowing(Regime regime, const ChannelParams& params, Rng& rng);

/// Per-drop link model between vehicles.
///
/// Shadowing and the LOS/NLOS state are drawn once per unordered vehicle pair
/// from a counter-based generator keyed by (drop seed, pair), so (a,b) and
/// (b,a) see the same draw and repeated queries return identical results.
/// All query methods are safe to call concurrently.
class LinkChannel {
 public:
  /// `nlos_bs_height_m` is the h_BS argument used when a V2V link is in the
  /// NLOS state; the NLOS formula is undefined for h_BS <= 25 m.
  LinkChannel(ChannelParams params, double ue_height_m, double nlos_bs_height_m,
              std::uint64_t drop_seed);

  PathlossResult link_pathloss(const geometry::Vehicle& tx, const geometry::Vehicle& rx) const;

  bool is_nlos(geometry::VehicleId a, geometry::VehicleId b) const;
  double standard_shadowing(geometry::VehicleId a, geometry::VehicleId b) const;

  const ChannelParams& params() const noexcept { return params_; }
  double breakpoint_m() const noexcept { return breakpoint_m_; }
  std::uint64_t clamped_count() const noexcept { return clamped_.load(std::memory_order_relaxed); }

 private:
  ChannelParams params_;
  double ue_height_m_;
  double nlos_bs_height_m_;
  double breakpoint_m_;
  std::uint64_t shadow_seed_;
  std::uint64_t los_seed_;
  mutable std::atomic<std::uint64_t> clamped_{0};
};

}  // namespace sidelink::channel
