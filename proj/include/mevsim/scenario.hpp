#pragma once

// End-to-end experiment suites: for each sweep point, estimate a payoff
// table, solve it, fold the metrics, and export every artifact.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mevsim/alpharank.hpp"
#include "mevsim/config.hpp"
#include "mevsim/hpt.hpp"
#include "mevsim/metrics.hpp"

namespace mevsim {

struct StageTimings {
  double hpt_s = 0.0;
  double solve_s = 0.0;
  double report_s = 0.0;
};

struct ScenarioResult {
  std::string id;
  ScenarioReport report;
  HeuristicPayoffTable hpt;
  SweepResult sweep;  // a single alpha unless the alpha mode is a sweep
  StageTimings timings;

  const StationaryDistribution& pi() const { return sweep.final_distribution(); }
};

struct ScenarioFailure {
  std::string id;
  GameKind kind = GameKind::symmetric;
  double param = 0.0;
  std::string message;
};

struct SuiteResult {
  ExperimentConfig config;
  std::vector<ScenarioResult> results;
  std::vector<ScenarioFailure> failures;
  double wall_s = 0.0;
};

// "symmetric", "latency_gap_<ms>", "orderflow_theta_<percent>".
std::string scenario_id(GameKind kind, double param);

// Profiles for the game kind, in table order.
HeuristicPayoffTable estimate_table(const GameSpec& spec, int n_sims, std::uint64_t master_seed, int workers);

// Solves a table under an alpha setting. `automatic` sweeps the symmetric
// game and uses the lower bound for role games.
SweepResult solve_table(const HeuristicPayoffTable& hpt, const AlphaSetting& alpha, int grid_points,
                        int population_size);

// Throws on any module error.
ScenarioResult run_scenario(const ExperimentConfig& config, GameKind kind, double param);

// Runs every sweep point of every configured game. A failing point is logged
// to `log` (if given), recorded, and skipped.
SuiteResult run_scenario_suite(const ExperimentConfig& config, std::ostream* log = nullptr);

std::string manifest_json(const SuiteResult& suite);

// Writes summary.csv, hpt_<id>.csv (+ hpt_<id>.json), stationary_<id>.csv,
// sweep_<id>.csv and manifest.json under out_dir. Returns the paths written.
// Throws Error (before writing) when there are no results.
std::vector<std::filesystem::path> export_results(const SuiteResult& suite, const std::filesystem::path& out_dir);

}  // namespace mevsim
