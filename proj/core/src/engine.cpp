#include "sidelink/engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <mutex>
#include <sstream>
#include <thread>
#include <variant>

namespace sidelink::engine {

void SweepSpec::validate() const {
  if (ivd_values_m.empty()) throw ConfigError("ivd_values_m", "must not be empty");
  if (tx_frequency_values_hz.empty()) throw ConfigError("tx_frequency_values_hz", "must not be empty");
  for (double v : ivd_values_m) {
    if (!(v > 0.0)) throw ConfigError("ivd_values_m", "values must be > 0");
  }
  for (double v : tx_frequency_values_hz) {
    if (!(v > 0.0)) throw ConfigError("tx_frequency_values_hz", "values must be > 0");
  }
}

void SimConfig::validate() const {
  scenario.validate();
  channel.validate();
  radio.validate();
  traffic.validate();
  metrics.validate();
  if (!(mac.bler_slope_db > 0.0)) throw ConfigError("bler_slope_db", "must be > 0");
  if (!std::isfinite(mac.bler_margin_db)) throw ConfigError("bler_margin_db", "must be finite");
  if (num_seeds == 0) throw ConfigError("num_seeds", "must be >= 1");
  if (periods_per_drop == 0) throw ConfigError("periods_per_drop", "must be >= 1");
  if (channel.los_mode != channel::LosMode::always_los && !(scenario.bs_height_m > 25.0)) {
    throw ConfigError("bs_height_m", "NLOS links need a reference BS height above 25 m");
  }
  sweep.validate();
}

mac::McsTable SimConfig::mcs_table() const {
  if (!mac.mcs_table_file.empty()) return mac::load_mcs_table_csv(mac.mcs_table_file);
  return mac::calibrate_default_curves(mac::McsTable::lte_cqi(), mac.bler_margin_db,
                                       mac.bler_slope_db);
}

namespace {

std::string cell_label(const SimConfig& config) {
  std::ostringstream os;
  os << " (ivd " << config.scenario.ivd_m << " m, tf " << config.traffic.tx_frequency_hz << " Hz)";
  return os.str();
}

}  // namespace

DropResult run_drop(const SimConfig& config, std::uint64_t seed, const mac::McsTable& table) {
  using geometry::Vehicle;

  const auto deployment = geometry::build_scenario(config.scenario, seed);
  const auto& vehicles = deployment.vehicles;

  DropResult r;
  r.num_ues = vehicles.size();
  r.data_volume_bps = mac::data_volume(config.traffic.packet_size_bytes, r.num_ues,
                                       config.traffic.tx_frequency_hz);
  r.required_se = mac::required_se(r.data_volume_bps, config.radio.bandwidth_hz);

  const mac::McsEntry* mcs = nullptr;
  mac::ResourceGrid grid;
  try {
    mcs = &mac::select_mcs(r.required_se, table);
    Rng alloc_rng = make_rng(seed, Stream::allocation);
    grid = mac::allocate_resources(vehicles, *mcs, config.traffic, config.radio.bandwidth_hz,
                                   config.mac.policy, alloc_rng);
  } catch (const SimError& e) {
    throw SimError(e.code(), e.what() + cell_label(config));
  }
  r.mcs_se = mcs->spectral_efficiency;
  r.num_slots = grid.num_slots();
  r.slot_of.reserve(vehicles.size());
  for (const auto& v : vehicles) r.slot_of.push_back(grid.slot_of(v.id));

  const channel::LinkChannel link_channel(config.channel, config.scenario.ue_height_m,
                                          config.scenario.bs_height_m, seed);
  Rng rx_rng = make_rng(seed, Stream::reception);
  const std::size_t periods =
      config.metrics.mode == metrics::PrrMode::bernoulli ? config.periods_per_drop : 1;

  r.samples.reserve(vehicles.size());
  std::vector<Vehicle> receivers;
  std::vector<Vehicle> interferers;
  for (const auto& tx : vehicles) {
    receivers = geometry::receivers_in_range(tx, vehicles, config.scenario.comm_range_m);
    interferers.clear();
    for (auto id : grid.co_channel(tx.id)) interferers.push_back(vehicles[id]);

    const auto budgets = linkbudget::build_link_budgets(tx, receivers, interferers, link_channel,
                                                        config.radio);
    r.warnings.half_duplex_skips += static_cast<std::uint64_t>(
        std::count_if(budgets.begin(), budgets.end(), [](const auto& b) { return b.half_duplex_skipped; }));

    auto sample = metrics::prr_for_tx(budgets, *mcs, config.metrics, rx_rng);
    for (std::size_t p = 1; p < periods; ++p) {
      sample = metrics::combine(sample, metrics::prr_for_tx(budgets, *mcs, config.metrics, rx_rng));
    }
    sample.tx_id = tx.id;
    r.samples.push_back(sample);
  }
  r.warnings.clamped_distances = link_channel.clamped_count();
  return r;
}

DropResult run_drop(const SimConfig& config, std::uint64_t seed) {
  config.validate();
  return run_drop(config, seed, config.mcs_table());
}

std::uint64_t cell_seed(std::uint64_t master_seed, double ivd_m, double tx_frequency_hz,
                        std::size_t seed_index) noexcept {
  return derive_seed(master_seed, {std::bit_cast<std::uint64_t>(ivd_m),
                                   std::bit_cast<std::uint64_t>(tx_frequency_hz),
                                   static_cast<std::uint64_t>(seed_index)});
}

namespace {

struct DropFailure {
  ErrorCode code;
  std::string message;
};

using DropOutcome = std::variant<std::monostate, DropResult, DropFailure>;

SimConfig cell_config(const SimConfig& base, double ivd, double tf) {
  SimConfig c = base;
  c.scenario.ivd_m = ivd;
  c.traffic.tx_frequency_hz = tf;
  return c;
}

}  // namespace

std::vector<SweepResult> run_sweep(const SimConfig& config, const SweepSpec& spec,
                                   const SweepOptions& options) {
  config.validate();
  spec.validate();
  const mac::McsTable table = config.mcs_table();

  std::vector<SimConfig> cells;
  for (double ivd : spec.ivd_values_m) {
    for (double tf : spec.tx_frequency_values_hz) cells.push_back(cell_config(config, ivd, tf));
  }

  const std::size_t seeds = config.num_seeds;
  const std::size_t total = cells.size() * seeds;
  std::vector<DropOutcome> outcomes(total);

  std::size_t threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::clamp<std::size_t>(threads, 1, total);

  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t job = next.fetch_add(1); job < total; job = next.fetch_add(1)) {
      const auto& cfg = cells[job / seeds];
      const auto seed = cell_seed(config.master_seed, cfg.scenario.ivd_m,
                                  cfg.traffic.tx_frequency_hz, job % seeds);
      try {
        outcomes[job] = run_drop(cfg, seed, table);
      } catch (const SimError& e) {
        outcomes[job] = DropFailure{e.code(), e.what()};
      }
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        options.progress(++done, total);
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<SweepResult> rows;
  rows.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cfg = cells[c];
    SweepResult row;
    row.ivd_m = cfg.scenario.ivd_m;
    row.tx_frequency_hz = cfg.traffic.tx_frequency_hz;
    row.num_ues = geometry::expected_vehicle_count(cfg.scenario);
    row.data_volume_bps = mac::data_volume(cfg.traffic.packet_size_bytes, row.num_ues,
                                           cfg.traffic.tx_frequency_hz);

    std::vector<std::vector<metrics::PrrSample>> per_seed;
    metrics::WarningCounters warnings;
    for (std::size_t s = 0; s < seeds; ++s) {
      auto& outcome = outcomes[c * seeds + s];
      if (const auto* fail = std::get_if<DropFailure>(&outcome)) {
        row.error = fail->code;
        row.error_message = fail->message;
        break;
      }
      auto& drop = std::get<DropResult>(outcome);
      row.mcs_se = drop.mcs_se;
      warnings += drop.warnings;
      per_seed.push_back(std::move(drop.samples));
    }

    if (row.ok()) {
      try {
        auto agg = metrics::aggregate(per_seed);
        agg.warnings = warnings;
        row.prr = std::move(agg);
        row.num_seeds = seeds;
      } catch (const SimError& e) {
        row.error = e.code();
        row.error_message = e.what();
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace sidelink::engine
