#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mevsim/auction.hpp"
#include "mevsim/hpt.hpp"
#include "mevsim/signal.hpp"

namespace mevsim {

enum class AlphaMode : std::uint8_t {
  automatic,  // sweep for the symmetric game, lower bound for role games
  sweep,
  bound,
  fixed,
};

struct AlphaSetting {
  AlphaMode mode = AlphaMode::automatic;
  double value = 0.0;  // used when mode == fixed
};

// Parses "sweep", "bound", "auto" or a positive number. Throws ConfigError.
AlphaSetting parse_alpha_setting(const std::string& text);
std::string to_string(const AlphaSetting& a);

struct ExperimentConfig {
  std::vector<GameKind> games{GameKind::symmetric};
  std::vector<double> latency_gaps_ms;   // 0, 10, ..., 200
  std::vector<double> theta_high_values; // 0.4, 0.5, ..., 1.0
  double base_latency_ms = 10.0;
  double theta_low = 0.3;
  int n_sims = 1000;
  std::uint64_t master_seed = 20240711;
  AlphaSetting alpha;
  int alpha_grid_points = 30;
  int population_size = 0;  // 0: players per role
  EfficiencyDenominator efficiency_denominator = EfficiencyDenominator::total_at_deadline;
  CalibrationConstants calibration;  // theta_min/theta_max double as the theta prior
  double t_mean_s = 13.0;
  double t_sigma_s = 0.1;
  std::filesystem::path out_dir = "results";
  int workers = 1;

  ExperimentConfig();
  void validate() const;

  // Game spec for one sweep point of `kind` (param: gap in ms or theta_high).
  GameSpec game_spec(GameKind kind, double param) const;
  // Sweep values for a game kind; {0} for the symmetric game.
  std::vector<double> sweep_values(GameKind kind) const;
};

// Reads a JSON object; missing keys keep their defaults, unknown keys are
// rejected. An empty or whitespace-only file is the all-defaults config.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

// JSON echo of every field, used in the manifest.
std::string config_to_json(const ExperimentConfig& config);

}  // namespace mevsim
