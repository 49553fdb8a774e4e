#include "sidelink/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sidelink/error.hpp"

namespace sidelink::channel {

std::string_view to_string(LosMode m) noexcept {
  switch (m) {
    case LosMode::always_los: return "los";
    case LosMode::always_nlos: return "nlos";
    case LosMode::fixed_probability: return "probability";
  }
  return "los";
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::los_near: return "los_near";
    case Regime::los_far: return "los_far";
    case Regime::nlos: return "nlos";
  }
  return "los_near";
}

LosMode parse_los_mode(std::string_view text) {
  if (text == "los" || text == "always_los") return LosMode::always_los;
  if (text == "nlos" || text == "always_nlos") return LosMode::always_nlos;
  if (text == "probability" || text == "fixed_probability") return LosMode::fixed_probability;
  throw ConfigError("los_mode", "expected los, nlos or probability, got '" + std::string(text) + "'");
}

void ChannelParams::validate() const {
  if (!(carrier_freq_hz > 0.0)) throw ConfigError("carrier_freq_hz", "must be > 0");
  if (!(sigma_los_near_db >= 0.0)) throw ConfigError("sigma_los_near_db", "must be >= 0");
  if (!(sigma_los_far_db >= 0.0)) throw ConfigError("sigma_los_far_db", "must be >= 0");
  if (!(sigma_nlos_db >= 0.0)) throw ConfigError("sigma_nlos_db", "must be >= 0");
  if (!(nlos_probability >= 0.0 && nlos_probability <= 1.0)) {
    throw ConfigError("nlos_probability", "must lie in [0, 1]");
  }
}

double breakpoint_distance(double h_tx_m, double h_rx_m, double carrier_freq_hz) {
  if (!(h_tx_m > 0.0) || !(h_rx_m > 0.0) || !(carrier_freq_hz > 0.0)) {
    throw SimError(ErrorCode::invalid_argument, "breakpoint_distance: arguments must be > 0");
  }
  return 4.0 * h_tx_m * h_rx_m * carrier_freq_hz / kSpeedOfLight;
}

LosPathloss pathloss_los(double d_m, double h_tx_m, double h_rx_m, double carrier_freq_hz) {
  if (!(d_m <= kLosMaxDistance)) {
    throw SimError(ErrorCode::out_of_validity,
                   "pathloss_los: distance " + std::to_string(d_m) + " m beyond 10 km");
  }
  const double d_bp = breakpoint_distance(h_tx_m, h_rx_m, carrier_freq_hz);
  const bool clamped = d_m < kLosMinDistance;
  const double d = std::max(d_m, kLosMinDistance);
  const double f_ghz = carrier_freq_hz / 1e9;

  if (d < d_bp) {
    return {21.5 * std::log10(d) + 20.0 * std::log10(f_ghz / 5.0), Regime::los_near, clamped};
  }
  const double pl = 40.0 * std::log10(d) + 10.5 - 18.5 * std::log10(h_tx_m) -
                    18.5 * std::log10(h_rx_m) + 1.5 * std::log10(f_ghz / 5.0);
  return {pl, Regime::los_far, clamped};
}

NlosPathloss pathloss_nlos(double d_m, double h_bs_m, double h_ms_m, double carrier_freq_hz) {
  if (!(h_bs_m > 25.0)) {
    throw SimError(ErrorCode::nlos_height,
                   "pathloss_nlos: h_bs must exceed 25 m, got " + std::to_string(h_bs_m));
  }
  if (!(carrier_freq_hz > 0.0)) {
    throw SimError(ErrorCode::invalid_argument, "pathloss_nlos: carrier frequency must be > 0");
  }
  if (!(d_m <= kNlosMaxDistance)) {
    throw SimError(ErrorCode::out_of_validity,
                   "pathloss_nlos: distance " + std::to_string(d_m) + " m beyond 5 km");
  }
  const bool clamped = d_m < kNlosMinDistance;
  const double d = std::max(d_m, kNlosMinDistance);
  const double f_ghz = carrier_freq_hz / 1e9;
  const double pl = 25.1 * std::log10(d) + 55.4 -
                    0.13 * std::log10(h_bs_m - 25.0) * std::log10(d / 100.0) -
                    0.9 * (h_ms_m - 1.5) + 21.3 * std::log10(f_ghz / 5.0);
  return {pl, clamped};
}

double shadowing_sigma(Regime regime, const ChannelParams& params) noexcept {
  if (!params.shadowing_enabled) return 0.0;
  switch (regime) {
    case Regime::los_near: return params.sigma_los_near_db;
    case Regime::los_far: return params.sigma_los_far_db;
    case Regime::nlos: return params.sigma_nlos_db;
  }
  return 0.0;
}

double sample_shadowing(Regime regime, const ChannelParams& params, Rng& rng) {
  const double sigma = shadowing_sigma(regime, params);
  if (sigma == 0.0) return 0.0;
  std::normal_distribution<double> dist(0.0, sigma);
  return dist(rng);
}

namespace {

std::uint64_t pair_key(geometry::VehicleId a, geometry::VehicleId b) noexcept {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (hi << 32) ^ lo;
}

}  // namespace

LinkChannel::LinkChannel(ChannelParams params, double ue_height_m, double nlos_bs_height_m,
                         std::uint64_t drop_seed)
    : params_(params),
      ue_height_m_(ue_height_m),
      nlos_bs_height_m_(nlos_bs_height_m),
      breakpoint_m_(breakpoint_distance(ue_height_m, ue_height_m, params.carrier_freq_hz)),
      shadow_seed_(derive_seed(drop_seed, {static_cast<std::uint64_t>(Stream::shadowing)})),
      los_seed_(derive_seed(drop_seed, {static_cast<std::uint64_t>(Stream::los_state)})) {
  params_.validate();
}

bool LinkChannel::is_nlos(geometry::VehicleId a, geometry::VehicleId b) const {
  switch (params_.los_mode) {
    case LosMode::always_los: return false;
    case LosMode::always_nlos: return true;
    case LosMode::fixed_probability:
      return counter_uniform(los_seed_, pair_key(a, b)) < params_.nlos_probability;
  }
  return false;
}

double LinkChannel::standard_shadowing(geometry::VehicleId a, geometry::VehicleId b) const {
  return counter_normal(shadow_seed_, pair_key(a, b));
}

PathlossResult LinkChannel::link_pathloss(const geometry::Vehicle& tx,
                                          const geometry::Vehicle& rx) const {
  if (tx.id == rx.id) {
    throw SimError(ErrorCode::invalid_argument, "link_pathloss: tx and rx are the same vehicle");
  }
  PathlossResult r;
  r.distance_m = geometry::distance(tx.position, rx.position);
  r.breakpoint_m = breakpoint_m_;

  if (is_nlos(tx.id, rx.id)) {
    const auto nl = pathloss_nlos(r.distance_m, nlos_bs_height_m_, ue_height_m_,
                                  params_.carrier_freq_hz);
    r.pathloss_db = nl.pathloss_db;
    r.regime = Regime::nlos;
    r.clamped = nl.clamped;
  } else {
    const auto los = pathloss_los(r.distance_m, ue_height_m_, ue_height_m_, params_.carrier_freq_hz);
    r.pathloss_db = los.pathloss_db;
    r.regime = los.regime;
    r.clamped = los.clamped;
  }
  if (r.clamped) clamped_.fetch_add(1, std::memory_order_relaxed);

  const double sigma = shadowing_sigma(r.regime, params_);
  r.shadowing_db = sigma == 0.0 ? 0.0 : sigma * standard_shadowing(tx.id, rx.id);
  return r;
}

}  // namespace sidelink::channel
