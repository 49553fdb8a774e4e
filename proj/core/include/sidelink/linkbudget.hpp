#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "sidelink/channel.hpp"
#include "sidelink/geometry.hpp"

namespace sidelink::linkbudget {

inline constexpr double kNoPower = -std::numeric_limits<double>::infinity();

inline double dbm_to_mw(double dbm) noexcept { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) noexcept {
  return mw > 0.0 ? 10.0 * std::log10(mw) : kNoPower;
}

struct RadioParams {
  double tx_power_dbm = 24.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 3.0;
  double noise_figure_db = 9.0;
  double thermal_psd_dbm_hz = -174.0;
  double bandwidth_hz = 10e6;

  void validate() const;
};

struct LinkBudgetRecord {
  geometry::VehicleId tx_id = 0;
  geometry::VehicleId rx_id = 0;
  double distance_m = 0.0;
  double pathloss_db = 0.0;
  double shadowing_db = 0.0;
  channel::Regime regime = channel::Regime::los_near;
  double rx_power_dbm = kNoPower;
  /// Aggregate co-channel interference; kNoPower when there is none.
  double interference_power_dbm = kNoPower;
  double noise_power_dbm = 0.0;
  /// -inf for half-duplex-skipped receivers.
  double sinr_db = kNoPower;
  bool half_duplex_skipped = false;
  bool clamped = false;
};

/// P_tx + G_tx + G_rx - PL.
constexpr double received_power(double tx_power_dbm, double g_tx_dbi, double g_rx_dbi,
                                double pathloss_db) noexcept {
  return tx_power_dbm + g_tx_dbi + g_rx_dbi - pathloss_db;
}

/// Thermal PSD + NF + 10 log10(bandwidth).
double noise_power(double thermal_psd_dbm_hz, double noise_figure_db, double bandwidth_hz);

/// SINR in dB; all powers summed in mW.
double sinr(double rx_power_dbm, std::span<const double> interferer_powers_dbm,
            double noise_power_dbm);

/// Desired and interfering powers at every receiver of `tx`.
///
/// Every interferer transmits with the same RadioParams on the same resource.
/// A receiver that is itself one of the interferers is transmitting in the
/// slot and is marked half_duplex_skipped instead of being evaluated.
std::vector<LinkBudgetRecord> build_link_budgets(const geometry::Vehicle& tx,
                                                 std::span<const geometry::Vehicle> receivers,
                                                 std::span<const geometry::Vehicle> interferers,
                                                 const channel::LinkChannel& channel,
                                                 const RadioParams& radio);

}  // namespace sidelink::linkbudget
