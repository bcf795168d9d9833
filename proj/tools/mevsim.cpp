// mevsim command-line front end.
//
//   mevsim calibrate [--config f]
//   mevsim hpt       --game g [--param p] [--config f] [--seed s] [--sims n] [--workers w] [--out dir]
//   mevsim solve     --hpt hpt_<id>.csv [--alpha a] [--out dir]
//   mevsim scenario  [--config f] [--game g] [--seed s] [--sims n] [--workers w] [--alpha a] [--out dir]
//   mevsim report    --hpt hpt_<id>.csv --stationary stationary_<id>.csv [--out summary.csv]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "mevsim/config.hpp"
#include "mevsim/error.hpp"
#include "mevsim/persistence.hpp"
#include "mevsim/profiles.hpp"
#include "mevsim/scenario.hpp"

namespace {

using namespace mevsim;
namespace fs = std::filesystem;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> sims;
  std::optional<int> workers;
  std::optional<std::string> alpha;
  std::optional<std::string> out;
  std::optional<std::string> game;
};

ExperimentConfig build_config(const CommonOptions& o) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
  if (o.seed) c.master_seed = *o.seed;
  if (o.sims) c.n_sims = *o.sims;
  if (o.workers) c.workers = *o.workers;
  if (o.alpha) c.alpha = parse_alpha_setting(*o.alpha);
  if (o.out) c.out_dir = *o.out;
  if (o.game) {
    if (*o.game == "all") {
      c.games = {GameKind::symmetric, GameKind::latency_roles, GameKind::orderflow_roles};
    } else {
      c.games = {parse_game_kind(*o.game)};
    }
  }
  c.validate();
  return c;
}

fs::path sidecar_for(const fs::path& csv) {
  fs::path p = csv;
  return p.replace_extension(".json");
}

std::string stem_id(const fs::path& csv, const std::string& prefix) {
  std::string stem = csv.stem().string();
  if (stem.rfind(prefix, 0) == 0) stem = stem.substr(prefix.size());
  return stem;
}

void print_ranking(const HeuristicPayoffTable& hpt, const StationaryDistribution& pi, std::size_t top) {
  const auto order = rank_profiles(pi.masses);
  for (std::size_t i = 0; i < std::min(top, order.size()); ++i) {
    const std::size_t k = order[i];
    std::printf("  %-20s %.6f\n", counts_label(hpt.row(k).counts).c_str(), pi.masses[k]);
  }
}

int cmd_calibrate(const CommonOptions& o) {
  const ExperimentConfig c = build_config(o);
  const SignalConfig s = calibrate_rates(c.calibration);
  nlohmann::json j{{"lambda_p", s.lambda_p},
                   {"lambda_e", s.lambda_e},
                   {"expected_private_events", expected_private_events(c.calibration)},
                   {"public_value_mean", s.public_value_mean},
                   {"private_value_mean", s.private_value_mean},
                   {"step_ms", s.step_ms},
                   {"horizon_s", s.horizon_s},
                   {"n_ticks", s.n_ticks()}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_hpt(const CommonOptions& o, double param) {
  const ExperimentConfig c = build_config(o);
  if (c.games.size() != 1) throw ConfigError("hpt needs exactly one --game");
  const GameKind kind = c.games.front();
  const GameSpec spec = c.game_spec(kind, param);
  spec.validate();
  const HeuristicPayoffTable hpt = estimate_table(spec, c.n_sims, c.master_seed, c.workers);
  const std::string id = scenario_id(kind, param);
  const fs::path csv = c.out_dir / ("hpt_" + id + ".csv");
  write_hpt(hpt, csv, sidecar_for(csv));
  std::cout << csv.string() << "\n";
  return 0;
}

int cmd_solve(const CommonOptions& o, const std::string& hpt_path, int grid_points, int population) {
  const fs::path csv(hpt_path);
  const HeuristicPayoffTable hpt = read_hpt(csv, sidecar_for(csv));
  const AlphaSetting alpha = o.alpha ? parse_alpha_setting(*o.alpha) : AlphaSetting{};
  const SweepResult sweep = solve_table(hpt, alpha, grid_points, population);
  const fs::path dir = o.out ? fs::path(*o.out) : csv.parent_path();
  const std::string id = stem_id(csv, "hpt_");
  std::vector<std::vector<int>> counts;
  for (const HptRow& row : hpt.rows()) counts.push_back(row.counts);
  write_text_file(dir / ("stationary_" + id + ".csv"), stationary_csv(counts, sweep.final_distribution()));
  write_text_file(dir / ("sweep_" + id + ".csv"), sweep_csv(sweep));
  const StationaryDistribution& pi = sweep.final_distribution();
  std::printf("alpha %.6g  residual %.3g  points %zu  converged %s\n", pi.alpha, pi.residual,
              sweep.alphas.size(), sweep.converged ? "yes" : "no");
  print_ranking(hpt, pi, 5);
  return 0;
}

int cmd_scenario(const CommonOptions& o) {
  const ExperimentConfig c = build_config(o);
  const SuiteResult suite = run_scenario_suite(c, &std::cerr);
  if (suite.results.empty()) throw Error("every scenario failed");
  const auto files = export_results(suite, c.out_dir);
  std::cout << "wrote " << files.size() << " files to " << c.out_dir.string() << "\n";
  return suite.failures.empty() ? 0 : 2;
}

int cmd_report(const std::string& hpt_path, const std::string& stationary_path, const std::optional<std::string>& out) {
  const fs::path csv(hpt_path);
  const HeuristicPayoffTable hpt = read_hpt(csv, sidecar_for(csv));
  const CsvTable table = parse_csv(read_text_file(stationary_path));
  if (table.rows.size() != hpt.size()) throw Error("stationary file does not match the table");
  StationaryDistribution pi;
  const std::size_t mass = table.column("mass");
  const std::size_t alpha = table.column("alpha");
  const std::size_t counts = table.column("counts");
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    if (parse_counts_label(table.rows[k][counts]) != hpt.row(k).counts) {
      throw Error("stationary row " + std::to_string(k) + " does not match the table profile");
    }
    pi.masses.push_back(std::stod(table.rows[k][mass]));
    pi.alpha = std::stod(table.rows[k][alpha]);
  }
  ScenarioReport report = make_report(hpt, pi);
  const std::vector<ScenarioReport> reports{report};
  const std::string text = summary_csv(reports);
  if (out) {
    write_text_file(*out, text);
  } else {
    std::cout << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-builder auction simulation and empirical game analysis"};
  app.require_subcommand(1);

  CommonOptions o;
  auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--sims", o.sims, "Rounds per profile");
    cmd->add_option("--workers", o.workers, "Worker threads");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--game", o.game, "symmetric | latency_roles | orderflow_roles | all");
  };

  auto* calibrate = app.add_subcommand("calibrate", "Print the calibrated signal rates");
  calibrate->add_option("--config", o.config_path, "JSON configuration file")->check(CLI::ExistingFile);

  double param = 0.0;
  auto* hpt = app.add_subcommand("hpt", "Estimate one heuristic payoff table");
  add_common(hpt);
  hpt->add_option("--param", param, "Latency gap (ms) or theta_high");

  std::string hpt_path;
  int grid_points = 30;
  int population = 0;
  auto* solve = app.add_subcommand("solve", "Solve a stored payoff table");
  solve->add_option("--hpt", hpt_path, "hpt_<id>.csv with its .json sidecar")->required()->check(CLI::ExistingFile);
  solve->add_option("--alpha", o.alpha, "sweep | bound | auto | <value>");
  solve->add_option("--grid-points", grid_points, "Sweep grid size");
  solve->add_option("--population", population, "Population size (0: role size)");
  solve->add_option("--out", o.out, "Output directory (default: next to the table)");

  auto* scenario = app.add_subcommand("scenario", "Run experiment suites and export all artifacts");
  add_common(scenario);
  scenario->add_option("--alpha", o.alpha, "sweep | bound | auto | <value>");

  std::string stationary_path;
  auto* report = app.add_subcommand("report", "Summary row from a table and its stationary distribution");
  report->add_option("--hpt", hpt_path, "hpt_<id>.csv")->required()->check(CLI::ExistingFile);
  report->add_option("--stationary", stationary_path, "stationary_<id>.csv")->required()->check(CLI::ExistingFile);
  report->add_option("--out", o.out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*calibrate) return cmd_calibrate(o);
    if (*hpt) return cmd_hpt(o, param);
    if (*solve) return cmd_solve(o, hpt_path, grid_points, population);
    if (*scenario) return cmd_scenario(o);
    if (*report) return cmd_report(hpt_path, stationary_path, o.out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
