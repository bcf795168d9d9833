#include "mevsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mevsim/error.hpp"

namespace mevsim {
namespace {

using nlohmann::json;

std::string_view denominator_name(EfficiencyDenominator d) {
  return d == EfficiencyDenominator::total_at_deadline ? "total_at_deadline" : "total_at_submission";
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

AlphaSetting parse_alpha_setting(const std::string& text) {
  if (text == "auto") return {AlphaMode::automatic, 0.0};
  if (text == "sweep") return {AlphaMode::sweep, 0.0};
  if (text == "bound" || text == "lower_bound") return {AlphaMode::bound, 0.0};
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError("alpha must be 'auto', 'sweep', 'bound' or a positive number, got '" + text + "'");
  }
  return {AlphaMode::fixed, value};
}

std::string to_string(const AlphaSetting& a) {
  switch (a.mode) {
    case AlphaMode::automatic:
      return "auto";
    case AlphaMode::sweep:
      return "sweep";
    case AlphaMode::bound:
      return "bound";
    case AlphaMode::fixed: {
      std::ostringstream os;
      os.precision(17);
      os << a.value;
      return os.str();
    }
  }
  return "auto";
}

ExperimentConfig::ExperimentConfig() {
  for (int g = 0; g <= 200; g += 10) latency_gaps_ms.push_back(g);
  for (int t = 4; t <= 10; ++t) theta_high_values.push_back(t / 10.0);
}

void ExperimentConfig::validate() const {
  if (games.empty()) throw ConfigError("no game kind selected");
  if (n_sims < 1) throw ConfigError("n_sims must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (alpha_grid_points < 1) throw ConfigError("alpha_grid_points must be at least 1");
  if (population_size != 0 && population_size < 2) throw ConfigError("population_size must be 0 or >= 2");
  for (double g : latency_gaps_ms) {
    if (!(g >= 0.0)) throw ConfigError("latency gaps must be non-negative");
  }
  for (double t : theta_high_values) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("theta_high values must lie in [0, 1]");
  }
  if (!(theta_low >= 0.0 && theta_low <= 1.0)) throw ConfigError("theta_low must lie in [0, 1]");
  if (calibration.horizon_s < t_mean_s + 6.0 * t_sigma_s) {
    throw ConfigError("horizon_s must cover t_mean_s + 6 t_sigma_s");
  }
  for (GameKind kind : games) {
    for (double v : sweep_values(kind)) game_spec(kind, v).validate();
  }
}

GameSpec ExperimentConfig::game_spec(GameKind kind, double param) const {
  GameSpec spec;
  spec.kind = kind;
  spec.signal = calibrate_rates(calibration);
  spec.auction.t_mean_s = t_mean_s;
  spec.auction.t_sigma_s = t_sigma_s;
  spec.auction.step_ms = calibration.step_ms;
  spec.auction.n_builders = calibration.n_builders;
  spec.auction.efficiency_denominator = efficiency_denominator;
  spec.base_latency_ms = base_latency_ms;
  spec.theta_prior_lo = calibration.theta_min;
  spec.theta_prior_hi = calibration.theta_max;
  spec.theta_low = theta_low;
  spec.players_per_role = calibration.n_builders / 2;
  if (kind == GameKind::latency_roles) spec.latency_gap_ms = param;
  if (kind == GameKind::orderflow_roles) spec.theta_high = param;
  return spec;
}

std::vector<double> ExperimentConfig::sweep_values(GameKind kind) const {
  switch (kind) {
    case GameKind::symmetric:
      return {0.0};
    case GameKind::latency_roles:
      return latency_gaps_ms;
    case GameKind::orderflow_roles:
      return theta_high_values;
  }
  return {};
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    c.validate();
    return c;
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  static const std::vector<std::string> known = {
      "game_kind", "latency_gaps_ms", "theta_high_values", "base_latency_ms", "theta_low",
      "n_sims", "master_seed", "alpha", "alpha_grid_points", "population_size",
      "efficiency_denominator", "public_tx_per_block", "public_tx_value_eth", "public_value_share",
      "private_share_min", "private_share_max", "theta_min", "theta_max", "slot_seconds",
      "lognormal_shape_public", "lognormal_shape_private", "step_ms", "horizon_s", "n_builders",
      "t_mean_s", "t_sigma_s", "out_dir", "workers"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  if (j.contains("game_kind")) {
    std::string kind;
    read(j, "game_kind", kind);
    if (kind == "all") {
      c.games = {GameKind::symmetric, GameKind::latency_roles, GameKind::orderflow_roles};
    } else {
      c.games = {parse_game_kind(kind)};
    }
  }
  read(j, "latency_gaps_ms", c.latency_gaps_ms);
  read(j, "theta_high_values", c.theta_high_values);
  read(j, "base_latency_ms", c.base_latency_ms);
  read(j, "theta_low", c.theta_low);
  read(j, "n_sims", c.n_sims);
  read(j, "master_seed", c.master_seed);
  if (j.contains("alpha")) {
    const json& a = j.at("alpha");
    if (a.is_number()) {
      c.alpha = parse_alpha_setting(std::to_string(a.get<double>()));
    } else if (a.is_string()) {
      c.alpha = parse_alpha_setting(a.get<std::string>());
    } else {
      throw ConfigError("config key 'alpha' must be a string or number");
    }
  }
  read(j, "alpha_grid_points", c.alpha_grid_points);
  read(j, "population_size", c.population_size);
  if (j.contains("efficiency_denominator")) {
    std::string d;
    read(j, "efficiency_denominator", d);
    if (d == "total_at_deadline") {
      c.efficiency_denominator = EfficiencyDenominator::total_at_deadline;
    } else if (d == "total_at_submission") {
      c.efficiency_denominator = EfficiencyDenominator::total_at_submission;
    } else {
      throw ConfigError("efficiency_denominator must be total_at_deadline or total_at_submission");
    }
  }
  CalibrationConstants& cal = c.calibration;
  read(j, "public_tx_per_block", cal.public_tx_per_block);
  read(j, "public_tx_value_eth", cal.public_tx_value_eth);
  read(j, "public_value_share", cal.public_value_share);
  read(j, "private_share_min", cal.private_share_min);
  read(j, "private_share_max", cal.private_share_max);
  read(j, "theta_min", cal.theta_min);
  read(j, "theta_max", cal.theta_max);
  read(j, "slot_seconds", cal.slot_seconds);
  read(j, "lognormal_shape_public", cal.lognormal_shape_public);
  read(j, "lognormal_shape_private", cal.lognormal_shape_private);
  read(j, "step_ms", cal.step_ms);
  read(j, "horizon_s", cal.horizon_s);
  read(j, "n_builders", cal.n_builders);
  read(j, "t_mean_s", c.t_mean_s);
  read(j, "t_sigma_s", c.t_sigma_s);
  if (j.contains("out_dir")) {
    std::string dir;
    read(j, "out_dir", dir);
    c.out_dir = dir;
  }
  read(j, "workers", c.workers);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  if (c.games.size() == 3) {
    j["game_kind"] = "all";
  } else {
    j["game_kind"] = std::string(game_kind_name(c.games.front()));
  }
  j["latency_gaps_ms"] = c.latency_gaps_ms;
  j["theta_high_values"] = c.theta_high_values;
  j["base_latency_ms"] = c.base_latency_ms;
  j["theta_low"] = c.theta_low;
  j["n_sims"] = c.n_sims;
  j["master_seed"] = c.master_seed;
  j["alpha"] = to_string(c.alpha);
  j["alpha_grid_points"] = c.alpha_grid_points;
  j["population_size"] = c.population_size;
  j["efficiency_denominator"] = std::string(denominator_name(c.efficiency_denominator));
  const CalibrationConstants& cal = c.calibration;
  j["public_tx_per_block"] = cal.public_tx_per_block;
  j["public_tx_value_eth"] = cal.public_tx_value_eth;
  j["public_value_share"] = cal.public_value_share;
  j["private_share_min"] = cal.private_share_min;
  j["private_share_max"] = cal.private_share_max;
  j["theta_min"] = cal.theta_min;
  j["theta_max"] = cal.theta_max;
  j["slot_seconds"] = cal.slot_seconds;
  j["lognormal_shape_public"] = cal.lognormal_shape_public;
  j["lognormal_shape_private"] = cal.lognormal_shape_private;
  j["step_ms"] = cal.step_ms;
  j["horizon_s"] = cal.horizon_s;
  j["n_builders"] = cal.n_builders;
  j["t_mean_s"] = c.t_mean_s;
  j["t_sigma_s"] = c.t_sigma_s;
  j["out_dir"] = c.out_dir.string();
  j["workers"] = c.workers;
  return j.dump(2);
}

}  // namespace mevsim
