#include "sidelink/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace sidelink::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ',';
    out += fmt(vs[i]);
  }
  return out;
}

using Setter = std::function<void(engine::SimConfig&, const std::string& key, const std::string& value)>;
using SectionTable = std::map<std::string, Setter>;

template <typename T>
Setter number(T engine::SimConfig::*section, double T::*field) {
  return [=](engine::SimConfig& c, const std::string& k, const std::string& v) {
    (c.*section).*field = to_double(k, v);
  };
}

std::map<std::string, SectionTable> schema(const std::filesystem::path& base_dir) {
  using engine::SimConfig;
  using geometry::ScenarioConfig;
  using channel::ChannelParams;
  using linkbudget::RadioParams;
  using mac::TrafficModel;
  using engine::MacConfig;

  std::map<std::string, SectionTable> s;
  s["scenario"] = {
      {"highway_length_m", number(&SimConfig::scenario, &ScenarioConfig::highway_length_m)},
      {"evaluation_length_m", number(&SimConfig::scenario, &ScenarioConfig::evaluation_length_m)},
      {"num_lanes", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.scenario.num_lanes = to_u64(k, v);
       }},
      {"lane_width_m", number(&SimConfig::scenario, &ScenarioConfig::lane_width_m)},
      {"ivd_m", number(&SimConfig::scenario, &ScenarioConfig::ivd_m)},
      {"comm_range_m", number(&SimConfig::scenario, &ScenarioConfig::comm_range_m)},
      {"bs_isd_m", number(&SimConfig::scenario, &ScenarioConfig::bs_isd_m)},
      {"bs_height_m", number(&SimConfig::scenario, &ScenarioConfig::bs_height_m)},
      {"ue_height_m", number(&SimConfig::scenario, &ScenarioConfig::ue_height_m)},
      {"aligned_lanes", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.scenario.aligned_lanes = to_bool(k, v);
       }},
      {"bs_setback_m", number(&SimConfig::scenario, &ScenarioConfig::bs_setback_m)},
      {"vehicle_speed_kmh", number(&SimConfig::scenario, &ScenarioConfig::vehicle_speed_kmh)},
  };
  s["channel"] = {
      {"carrier_freq_hz", number(&SimConfig::channel, &ChannelParams::carrier_freq_hz)},
      {"los_mode", [](SimConfig& c, const std::string&, const std::string& v) {
         c.channel.los_mode = channel::parse_los_mode(trim(v));
       }},
      {"nlos_probability", number(&SimConfig::channel, &ChannelParams::nlos_probability)},
      {"shadowing_enabled", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.channel.shadowing_enabled = to_bool(k, v);
       }},
      {"sigma_los_near_db", number(&SimConfig::channel, &ChannelParams::sigma_los_near_db)},
      {"sigma_los_far_db", number(&SimConfig::channel, &ChannelParams::sigma_los_far_db)},
      {"sigma_nlos_db", number(&SimConfig::channel, &ChannelParams::sigma_nlos_db)},
  };
  s["linkbudget"] = {
      {"tx_power_dbm", number(&SimConfig::radio, &RadioParams::tx_power_dbm)},
      {"tx_gain_dbi", number(&SimConfig::radio, &RadioParams::tx_gain_dbi)},
      {"rx_gain_dbi", number(&SimConfig::radio, &RadioParams::rx_gain_dbi)},
      {"noise_figure_db", number(&SimConfig::radio, &RadioParams::noise_figure_db)},
      {"thermal_psd_dbm_hz", number(&SimConfig::radio, &RadioParams::thermal_psd_dbm_hz)},
      {"bandwidth_hz", number(&SimConfig::radio, &RadioParams::bandwidth_hz)},
      {"prr_counts_halfduplex_as_loss", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.metrics.halfduplex_as_loss = to_bool(k, v);
       }},
  };
  s["mac"] = {
      {"packet_size_bytes", number(&SimConfig::traffic, &TrafficModel::packet_size_bytes)},
      {"tx_frequency_hz", number(&SimConfig::traffic, &TrafficModel::tx_frequency_hz)},
      {"allocation_policy", [](SimConfig& c, const std::string&, const std::string& v) {
         c.mac.policy = mac::parse_allocation_policy(trim(v));
       }},
      {"bler_margin_db", number(&SimConfig::mac, &MacConfig::bler_margin_db)},
      {"bler_slope_db", number(&SimConfig::mac, &MacConfig::bler_slope_db)},
      {"mcs_table_file", [base_dir](SimConfig& c, const std::string&, const std::string& v) {
         const std::string t = trim(v);
         if (t.empty()) {
           c.mac.mcs_table_file.clear();
           return;
         }
         std::filesystem::path p(t);
         if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
         c.mac.mcs_table_file = p.lexically_normal().string();
       }},
  };
  s["metrics"] = {
      {"bler_success_threshold", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.metrics.bler_threshold = to_double(k, v);
       }},
      {"prr_mode", [](SimConfig& c, const std::string&, const std::string& v) {
         c.metrics.mode = metrics::parse_prr_mode(trim(v));
       }},
      {"num_seeds", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.num_seeds = to_u64(k, v);
       }},
  };
  s["engine"] = {
      {"master_seed", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.master_seed = to_u64(k, v);
       }},
      {"periods_per_drop", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.periods_per_drop = to_u64(k, v);
       }},
  };
  s["sweep"] = {
      {"ivd_values_m", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.sweep.ivd_values_m = to_list(k, v);
       }},
      {"tx_frequency_values_hz", [](SimConfig& c, const std::string& k, const std::string& v) {
         c.sweep.tx_frequency_values_hz = to_list(k, v);
       }},
  };
  return s;
}

}  // namespace

engine::SimConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config", "line " + std::to_string(e.line()) + ": " + e.message());
  }

  const auto table = schema(base_dir);
  engine::SimConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(section, "key outside of any section");
    }
    auto sec = table.find(section);
    if (sec == table.end()) throw ConfigError(section, "unknown section");
    for (const auto& [key, node] : body) {
      auto setter = sec->second.find(key);
      if (setter == sec->second.end()) {
        throw ConfigError(key, "unknown key in section [" + section + "]");
      }
      setter->second(config, key, node.data());
    }
  }
  config.validate();
  return config;
}

engine::SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  const auto base_dir = path.parent_path();

  if (path.extension() == ".json") {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config", std::string("malformed manifest: ") + e.what());
    }
    if (!manifest.contains("config") || !manifest["config"].is_string()) {
      throw ConfigError("config", "manifest has no embedded config");
    }
    std::istringstream text(manifest["config"].get<std::string>());
    return parse_config(text, base_dir);
  }
  return parse_config(in, base_dir);
}

std::string to_ini(const engine::SimConfig& c) {
  std::ostringstream os;
  const auto b = [](bool v) { return v ? "true" : "false"; };
  os << "[scenario]\n"
     << "highway_length_m = " << fmt(c.scenario.highway_length_m) << '\n'
     << "evaluation_length_m = " << fmt(c.scenario.evaluation_length_m) << '\n'
     << "num_lanes = " << c.scenario.num_lanes << '\n'
     << "lane_width_m = " << fmt(c.scenario.lane_width_m) << '\n'
     << "ivd_m = " << fmt(c.scenario.ivd_m) << '\n'
     << "comm_range_m = " << fmt(c.scenario.comm_range_m) << '\n'
     << "bs_isd_m = " << fmt(c.scenario.bs_isd_m) << '\n'
     << "bs_height_m = " << fmt(c.scenario.bs_height_m) << '\n'
     << "ue_height_m = " << fmt(c.scenario.ue_height_m) << '\n'
     << "aligned_lanes = " << b(c.scenario.aligned_lanes) << '\n'
     << "bs_setback_m = " << fmt(c.scenario.bs_setback_m) << '\n'
     << "vehicle_speed_kmh = " << fmt(c.scenario.vehicle_speed_kmh) << "\n\n";
  os << "[channel]\n"
     << "carrier_freq_hz = " << fmt(c.channel.carrier_freq_hz) << '\n'
     << "los_mode = " << channel::to_string(c.channel.los_mode) << '\n'
     << "nlos_probability = " << fmt(c.channel.nlos_probability) << '\n'
     << "shadowing_enabled = " << b(c.channel.shadowing_enabled) << '\n'
     << "sigma_los_near_db = " << fmt(c.channel.sigma_los_near_db) << '\n'
     << "sigma_los_far_db = " << fmt(c.channel.sigma_los_far_db) << '\n'
     << "sigma_nlos_db = " << fmt(c.channel.sigma_nlos_db) << "\n\n";
  os << "[linkbudget]\n"
     << "tx_power_dbm = " << fmt(c.radio.tx_power_dbm) << '\n'
     << "tx_gain_dbi = " << fmt(c.radio.tx_gain_dbi) << '\n'
     << "rx_gain_dbi = " << fmt(c.radio.rx_gain_dbi) << '\n'
     << "noise_figure_db = " << fmt(c.radio.noise_figure_db) << '\n'
     << "thermal_psd_dbm_hz = " << fmt(c.radio.thermal_psd_dbm_hz) << '\n'
     << "bandwidth_hz = " << fmt(c.radio.bandwidth_hz) << '\n'
     << "prr_counts_halfduplex_as_loss = " << b(c.metrics.halfduplex_as_loss) << "\n\n";
  os << "[mac]\n"
     << "packet_size_bytes = " << fmt(c.traffic.packet_size_bytes) << '\n'
     << "tx_frequency_hz = " << fmt(c.traffic.tx_frequency_hz) << '\n'
     << "allocation_policy = " << mac::to_string(c.mac.policy) << '\n'
     << "bler_margin_db = " << fmt(c.mac.bler_margin_db) << '\n'
     << "bler_slope_db = " << fmt(c.mac.bler_slope_db) << '\n'
     << "mcs_table_file = " << c.mac.mcs_table_file << "\n\n";
  os << "[metrics]\n"
     << "bler_success_threshold = " << fmt(c.metrics.bler_threshold) << '\n'
     << "prr_mode = " << metrics::to_string(c.metrics.mode) << '\n'
     << "num_seeds = " << c.num_seeds << "\n\n";
  os << "[engine]\n"
     << "master_seed = " << c.master_seed << '\n'
     << "periods_per_drop = " << c.periods_per_drop << "\n\n";
  os << "[sweep]\n"
     << "ivd_values_m = " << fmt_list(c.sweep.ivd_values_m) << '\n'
     << "tx_frequency_values_hz = " << fmt_list(c.sweep.tx_frequency_values_hz) << '\n';
  return os.str();
}

}  // namespace sidelink::cli
