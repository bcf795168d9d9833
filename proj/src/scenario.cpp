#include "mevsim/scenario.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include <json.hpp>

#include "mevsim/error.hpp"
#include "mevsim/kernels.hpp"
#include "mevsim/persistence.hpp"
#include "mevsim/profiles.hpp"

namespace mevsim {
namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string param_label(double v) {
  if (v == std::round(v)) return std::to_string(static_cast<long long>(v));
  return format_number(v);
}

}  // namespace

std::string scenario_id(GameKind kind, double param) {
  switch (kind) {
    case GameKind::symmetric:
      return "symmetric";
    case GameKind::latency_roles:
      return "latency_gap_" + param_label(param);
    case GameKind::orderflow_roles:
      return "orderflow_theta_" + param_label(std::round(param * 1e6) / 1e4);
  }
  return "unknown";
}

HeuristicPayoffTable estimate_table(const GameSpec& spec, int n_sims, std::uint64_t master_seed, int workers) {
  const EstimateOptions options{workers};
  if (spec.kind == GameKind::symmetric) {
    const auto profiles = enumerate_profiles(spec.n_players(), kNumStrategies);
    return estimate_hpt_symmetric(profiles, spec, n_sims, master_seed, options);
  }
  const auto profiles = enumerate_role_profiles(spec.players_per_role, kNumStrategies);
  return estimate_hpt_role(profiles, spec, n_sims, master_seed, options);
}

SweepResult solve_table(const HeuristicPayoffTable& hpt, const AlphaSetting& alpha, int grid_points,
                        int population_size) {
  const EmpiricalGame game = EmpiricalGame::from_hpt(hpt);
  AlphaMode mode = alpha.mode;
  if (mode == AlphaMode::automatic) {
    mode = hpt.spec().kind == GameKind::symmetric ? AlphaMode::sweep : AlphaMode::bound;
  }
  std::vector<double> grid;
  switch (mode) {
    case AlphaMode::sweep:
      grid = default_alpha_grid(game, grid_points);
      break;
    case AlphaMode::bound:
      grid = {estimate_alpha_lower_bound(game)};
      break;
    case AlphaMode::fixed:
    case AlphaMode::automatic:
      grid = {alpha.value};
      break;
  }
  return sweep_alpha(game, grid, population_size);
}

ScenarioResult run_scenario(const ExperimentConfig& config, GameKind kind, double param) {
  ScenarioResult result;
  result.id = scenario_id(kind, param);
  const GameSpec spec = config.game_spec(kind, param);
  spec.validate();

  auto start = Clock::now();
  result.hpt = estimate_table(spec, config.n_sims, config.master_seed, config.workers);
  result.timings.hpt_s = seconds_since(start);

  start = Clock::now();
  result.sweep = solve_table(result.hpt, config.alpha, config.alpha_grid_points, config.population_size);
  result.timings.solve_s = seconds_since(start);

  start = Clock::now();
  result.report = make_report(result.hpt, result.pi());
  result.report.id = result.id;
  result.timings.report_s = seconds_since(start);
  return result;
}

SuiteResult run_scenario_suite(const ExperimentConfig& config, std::ostream* log) {
  config.validate();
  SuiteResult suite;
  suite.config = config;
  const auto start = Clock::now();
  for (GameKind kind : config.games) {
    for (double param : config.sweep_values(kind)) {
      const std::string id = scenario_id(kind, param);
      try {
        suite.results.push_back(run_scenario(config, kind, param));
        if (log) {
          const ScenarioResult& r = suite.results.back();
          *log << id << ": w_low=" << r.report.win_rates.low << " w_high=" << r.report.win_rates.high
               << " hhi=" << r.report.concentration.scaled << " efficiency=" << r.report.efficiency
               << " (" << r.timings.hpt_s + r.timings.solve_s << " s)\n";
        }
      } catch (const Error& e) {
        suite.failures.push_back({id, kind, param, e.what()});
        if (log) *log << id << ": failed: " << e.what() << "\n";
      }
    }
  }
  suite.wall_s = seconds_since(start);
  return suite;
}

std::string manifest_json(const SuiteResult& suite) {
  std::vector<ScenarioReport> reports;
  for (const ScenarioResult& r : suite.results) reports.push_back(r.report);
  const std::string summary = summary_csv(reports);

  json j;
  j["version"] = kVersion;
  j["simd"] = std::string(kernels::level_name(kernels::active_level()));
  j["config"] = json::parse(config_to_json(suite.config));
  j["master_seed"] = suite.config.master_seed;
  j["n_sims"] = suite.config.n_sims;
  j["summary_hash"] = content_hash(summary);
  j["wall_time_s"] = suite.wall_s;
  // Sampling tolerances scale with 1/sqrt(n_sims) from their full-run values.
  const double widen = std::sqrt(1000.0 / suite.config.n_sims);
  j["tolerances"] = {{"win_rate", 0.02 * widen}, {"usage", 0.01 * widen}};
  json scenarios = json::array();
  for (const ScenarioResult& r : suite.results) {
    const StationaryDistribution& pi = r.pi();
    scenarios.push_back({{"id", r.id},
                         {"game_kind", std::string(game_kind_name(r.report.game_kind))},
                         {"scenario_param", r.report.scenario_param},
                         {"alpha", pi.alpha},
                         {"alpha_points", r.sweep.alphas.size()},
                         {"sweep_converged", r.sweep.converged},
                         {"residual", pi.residual},
                         {"perturbed", pi.perturbed},
                         {"power_iteration", pi.power_iteration},
                         {"no_winner_rounds", r.report.no_winner_rounds},
                         {"hpt_hash", content_hash(hpt_csv(r.hpt))},
                         {"timings_s",
                          {{"hpt", r.timings.hpt_s}, {"solve", r.timings.solve_s}, {"report", r.timings.report_s}}}});
  }
  j["scenarios"] = scenarios;
  json failures = json::array();
  for (const ScenarioFailure& f : suite.failures) {
    failures.push_back({{"id", f.id},
                        {"game_kind", std::string(game_kind_name(f.kind))},
                        {"scenario_param", f.param},
                        {"error", f.message}});
  }
  j["failures"] = failures;
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> export_results(const SuiteResult& suite, const std::filesystem::path& out_dir) {
  if (suite.results.empty()) throw Error("no scenario results to export");
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& text) {
    const std::filesystem::path path = out_dir / name;
    write_text_file(path, text);
    written.push_back(path);
  };

  std::vector<ScenarioReport> reports;
  for (const ScenarioResult& r : suite.results) reports.push_back(r.report);
  emit("summary.csv", summary_csv(reports));
  for (const ScenarioResult& r : suite.results) {
    std::vector<std::vector<int>> counts;
    for (const HptRow& row : r.hpt.rows()) counts.push_back(row.counts);
    emit("hpt_" + r.id + ".csv", hpt_csv(r.hpt));
    emit("hpt_" + r.id + ".json", hpt_sidecar_json(r.hpt));
    emit("stationary_" + r.id + ".csv", stationary_csv(counts, r.pi()));
    emit("sweep_" + r.id + ".csv", sweep_csv(r.sweep));
  }
  emit("manifest.json", manifest_json(suite));
  return written;
}

}  // namespace mevsim
