#include "sidelink/cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sidelink/cli/config.hpp"
#include "sidelink/cli/output.hpp"

namespace sidelink::cli {

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> seeds;
  std::string out_dir;
  std::string format = "both";
  bool format_given = false;
  std::vector<double> ivd;
  std::vector<double> tf;
  bool quiet = false;
  bool detail = false;

  std::string model = "los";
  std::optional<double> fc;
  std::vector<double> distances;
  double d_min = 10.0;
  double d_max = 1000.0;
  double d_step = 10.0;
  std::optional<double> h_tx;
  std::optional<double> h_rx;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config_path, "Config file (INI) or a run manifest (.json)");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--seeds", o.seeds, "Number of drops per sweep cell");
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_option("--format", o.format, "csv|json|both")->check(CLI::IsMember({"csv", "json", "both"}));
  cmd->add_option("--ivd", o.ivd, "Inter-vehicle distances [m], comma separated")->delimiter(',');
  cmd->add_option("--tf", o.tf, "Transmission frequencies [Hz], comma separated")->delimiter(',');
  cmd->add_flag("--quiet", o.quiet, "Suppress progress and tables");
}

engine::SimConfig resolve_config(const Options& o) {
  engine::SimConfig c = o.config_path.empty() ? engine::SimConfig{} : load_config(o.config_path);
  if (o.seed) c.master_seed = *o.seed;
  if (o.seeds) c.num_seeds = *o.seeds;
  if (!o.ivd.empty()) c.sweep.ivd_values_m = o.ivd;
  if (!o.tf.empty()) c.sweep.tx_frequency_values_hz = o.tf;
  c.validate();
  return c;
}

std::size_t thread_count() {
  if (const char* env = std::getenv("SIDELINK_SIM_THREADS")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      throw ConfigError("SIDELINK_SIM_THREADS", std::string("expected an integer, got '") + env + "'");
    }
  }
  return 0;
}

void print_rows(std::span<const engine::SweepResult> rows, const Options& o, std::ostream& out) {
  if (!o.out_dir.empty()) {
    if (!o.quiet) out << format_table(rows);
    return;
  }
  if (!o.format_given) {
    out << format_table(rows);
    return;
  }
  const auto fmt = parse_output_format(o.format);
  if (fmt != OutputFormat::json) out << format_csv(rows);
  if (fmt != OutputFormat::csv) out << to_json(rows).dump(2) << '\n';
}

int finish(std::span<const engine::SweepResult> rows, const Options& o, const std::string& command,
           const engine::SimConfig& config, std::ostream& out, std::ostream& err) {
  print_rows(rows, o, out);
  if (!o.out_dir.empty()) {
    const auto bundle = emit_results(rows, parse_output_format(o.format), o.out_dir, {command, config});
    if (!o.quiet) err << "wrote " << bundle.run_manifest.parent_path().string() << '\n';
  }
  const bool all_capacity = std::all_of(rows.begin(), rows.end(), [](const auto& r) {
    return r.error == ErrorCode::capacity_exceeded;
  });
  return all_capacity ? kExitCapacityExceeded : kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = resolve_config(o);
  engine::SweepOptions opts;
  opts.threads = thread_count();
  if (!o.quiet) {
    opts.progress = [&err](std::size_t done, std::size_t total) {
      err << "\rdrops " << done << '/' << total << (done == total ? "\n" : "") << std::flush;
    };
  }
  const auto rows = engine::run_sweep(config, config.sweep, opts);
  return finish(rows, o, "sweep", config, out, err);
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  auto config = resolve_config(o);
  if (!o.ivd.empty()) config.scenario.ivd_m = o.ivd.front();
  if (!o.tf.empty()) config.traffic.tx_frequency_hz = o.tf.front();
  config.validate();

  const double ivd = config.scenario.ivd_m;
  const double tf = config.traffic.tx_frequency_hz;
  const auto seed = engine::cell_seed(config.master_seed, ivd, tf, 0);

  engine::SweepResult row;
  row.ivd_m = ivd;
  row.tx_frequency_hz = tf;
  row.num_ues = geometry::expected_vehicle_count(config.scenario);
  row.data_volume_bps = mac::data_volume(config.traffic.packet_size_bytes, row.num_ues, tf);

  std::optional<engine::DropResult> drop;
  try {
    drop = engine::run_drop(config, seed);
    row.mcs_se = drop->mcs_se;
    std::vector<std::vector<metrics::PrrSample>> per_seed{drop->samples};
    auto agg = metrics::aggregate(per_seed);
    agg.warnings = drop->warnings;
    row.prr = std::move(agg);
    row.num_seeds = 1;
  } catch (const ConfigError&) {
    throw;
  } catch (const SimError& e) {
    row.error = e.code();
    row.error_message = e.what();
    if (!o.quiet) err << "error: " << e.what() << '\n';
  }

  config.sweep.ivd_values_m = {ivd};
  config.sweep.tx_frequency_values_hz = {tf};
  config.num_seeds = 1;
  const std::vector<engine::SweepResult> rows{row};
  const int status = finish(rows, o, "run", config, out, err);

  if (o.detail && drop) {
    const auto deployment = geometry::build_scenario(config.scenario, seed);
    out << "tx_id,x_m,y_m,lane,cell,slot,num_in_range,num_success,prr\n";
    for (const auto& s : drop->samples) {
      const auto& v = deployment.vehicles[s.tx_id];
      out << s.tx_id << ',' << fixed4(v.position.x) << ',' << fixed4(v.position.y) << ','
          << v.lane_index << ',' << v.attached_cell << ',' << drop->slot_of[s.tx_id] << ','
          << s.num_in_range << ',' << s.num_success << ',' << (s.prr ? fixed4(*s.prr) : "") << '\n';
    }
  }
  return status;
}

int cmd_pathloss(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = resolve_config(o);
  const bool nlos = o.model == "nlos";
  const double fc = o.fc.value_or(config.channel.carrier_freq_hz);
  const double h_tx = o.h_tx.value_or(nlos ? config.scenario.bs_height_m : config.scenario.ue_height_m);
  const double h_rx = o.h_rx.value_or(config.scenario.ue_height_m);

  std::vector<double> grid = o.distances;
  if (grid.empty()) {
    if (!(o.d_step > 0.0) || !(o.d_max >= o.d_min)) {
      throw ConfigError("d-step", "distance grid needs d-step > 0 and d-max >= d-min");
    }
    const auto n = static_cast<std::size_t>((o.d_max - o.d_min) / o.d_step + 1e-9);
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(o.d_min + static_cast<double>(i) * o.d_step);
  }

  std::ostringstream csv;
  csv << "distance_m,pathloss_db,regime,clamped\n";
  for (double d : grid) {
    try {
      if (nlos) {
        const auto r = channel::pathloss_nlos(d, h_tx, h_rx, fc);
        csv << shortest(d) << ',' << fixed4(r.pathloss_db) << ",nlos," << (r.clamped ? 1 : 0) << '\n';
      } else {
        const auto r = channel::pathloss_los(d, h_tx, h_rx, fc);
        csv << shortest(d) << ',' << fixed4(r.pathloss_db) << ',' << channel::to_string(r.regime)
            << ',' << (r.clamped ? 1 : 0) << '\n';
      }
    } catch (const SimError& e) {
      err << "error: " << e.what() << '\n';
      return kExitConfigError;
    }
  }

  if (o.out_dir.empty()) {
    out << csv.str();
  } else {
    std::filesystem::create_directories(o.out_dir);
    const auto path = std::filesystem::path(o.out_dir) / "pathloss.csv";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SimError(ErrorCode::io, "cannot write '" + path.string() + "'");
    f << csv.str();
    if (!o.quiet) err << "wrote " << path.string() << '\n';
  }
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  resolve_config(o);
  if (!o.quiet) out << "config OK\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"LTE sidelink mode-3 highway system-level simulator", "sidelink_sim"};
  app.require_subcommand(1);

  Options o;
  auto* run = app.add_subcommand("run", "Single drop; prints the row (and per-tx detail with --detail)");
  auto* sweep = app.add_subcommand("sweep", "IVD x traffic-load sweep");
  auto* pathloss = app.add_subcommand("pathloss", "Tabulate the WINNER II pathloss over distance");
  auto* validate = app.add_subcommand("validate-config", "Schema and invariant check only");
  for (auto* cmd : {run, sweep, pathloss, validate}) add_common(cmd, o);

  run->add_flag("--detail", o.detail, "Per-transmitter detail");
  pathloss->add_option("--model", o.model, "los|nlos")->check(CLI::IsMember({"los", "nlos"}));
  pathloss->add_option("--fc", o.fc, "Carrier frequency [Hz]");
  pathloss->add_option("--d", o.distances, "Distances [m], comma separated")->delimiter(',');
  pathloss->add_option("--d-min", o.d_min, "Grid start [m]");
  pathloss->add_option("--d-max", o.d_max, "Grid end [m]");
  pathloss->add_option("--d-step", o.d_step, "Grid step [m]");
  pathloss->add_option("--htx", o.h_tx, "Tx (or BS) antenna height [m]");
  pathloss->add_option("--hrx", o.h_rx, "Rx (or MS) antenna height [m]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }
  for (auto* cmd : {run, sweep, pathloss, validate}) {
    if (cmd->count("--format") > 0) o.format_given = true;
  }

  try {
    if (*sweep) return cmd_sweep(o, out, err);
    if (*run) return cmd_run(o, out, err);
    if (*pathloss) return cmd_pathloss(o, out, err);
    return cmd_validate(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const SimError& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::capacity_exceeded ? kExitCapacityExceeded : kExitConfigError;
  }
}

}  // namespace sidelink::cli
