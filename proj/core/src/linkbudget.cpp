#include "sidelink/linkbudget.hpp"

#include <algorithm>

#include "sidelink/error.hpp"

namespace sidelink::linkbudget {

void RadioParams::validate() const {
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz", "must be > 0");
  if (!(thermal_psd_dbm_hz < 0.0)) throw ConfigError("thermal_psd_dbm_hz", "must be < 0");
  if (!std::isfinite(tx_power_dbm)) throw ConfigError("tx_power_dbm", "must be finite");
  if (!std::isfinite(tx_gain_dbi)) throw ConfigError("tx_gain_dbi", "must be finite");
  if (!std::isfinite(rx_gain_dbi)) throw ConfigError("rx_gain_dbi", "must be finite");
  if (!std::isfinite(noise_figure_db)) throw ConfigError("noise_figure_db", "must be finite");
}

double noise_power(double thermal_psd_dbm_hz, double noise_figure_db, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0)) {
    throw SimError(ErrorCode::invalid_argument, "noise_power: bandwidth must be > 0");
  }
  return thermal_psd_dbm_hz + noise_figure_db + 10.0 * std::log10(bandwidth_hz);
}

double sinr(double rx_power_dbm, std::span<const double> interferer_powers_dbm,
            double noise_power_dbm) {
  double denom = dbm_to_mw(noise_power_dbm);
  for (double p : interferer_powers_dbm) denom += dbm_to_mw(p);
  return 10.0 * std::log10(dbm_to_mw(rx_power_dbm) / denom);
}

std::vector<LinkBudgetRecord> build_link_budgets(const geometry::Vehicle& tx,
                                                 std::span<const geometry::Vehicle> receivers,
                                                 std::span<const geometry::Vehicle> interferers,
                                                 const channel::LinkChannel& channel,
                                                 const RadioParams& radio) {
  for (const auto& i : interferers) {
    if (i.id == tx.id) {
      throw SimError(ErrorCode::invalid_argument,
                     "build_link_budgets: interferer list contains the transmitter");
    }
  }

  const double noise_dbm = noise_power(radio.thermal_psd_dbm_hz, radio.noise_figure_db, radio.bandwidth_hz);
  const double noise_mw = dbm_to_mw(noise_dbm);

  std::vector<LinkBudgetRecord> out;
  out.reserve(receivers.size());
  for (const auto& rx : receivers) {
    const auto pl = channel.link_pathloss(tx, rx);

    LinkBudgetRecord rec;
    rec.tx_id = tx.id;
    rec.rx_id = rx.id;
    rec.distance_m = pl.distance_m;
    rec.pathloss_db = pl.pathloss_db;
    rec.shadowing_db = pl.shadowing_db;
    rec.regime = pl.regime;
    rec.clamped = pl.clamped;
    rec.rx_power_dbm = received_power(radio.tx_power_dbm, radio.tx_gain_dbi, radio.rx_gain_dbi,
                                      pl.total_loss_db());
    rec.noise_power_dbm = noise_dbm;

    const bool transmitting = std::any_of(interferers.begin(), interferers.end(),
                                          [&](const geometry::Vehicle& v) { return v.id == rx.id; });
    if (transmitting) {
      rec.half_duplex_skipped = true;
      out.push_back(rec);
      continue;
    }

    double interference_mw = 0.0;
    for (const auto& intf : interferers) {
      const auto ipl = channel.link_pathloss(intf, rx);
      interference_mw += dbm_to_mw(received_power(radio.tx_power_dbm, radio.tx_gain_dbi,
                                                  radio.rx_gain_dbi, ipl.total_loss_db()));
    }
    rec.interference_power_dbm = mw_to_dbm(interference_mw);
    rec.sinr_db = 10.0 * std::log10(dbm_to_mw(rec.rx_power_dbm) / (interference_mw + noise_mw));
    out.push_back(rec);
  }
  return out;
}

}  // namespace sidelink::linkbudget
