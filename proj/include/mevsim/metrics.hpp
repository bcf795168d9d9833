#pragma once

// Market metrics at equilibrium: per-profile statistics weighted by the
// stationary mass of each profile.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mevsim/alpharank.hpp"
#include "mevsim/hpt.hpp"

namespace mevsim {

struct GroupWinRates {
  double low = 0.0;
  double high = 0.0;
};

// Sum_k pi_k * w_k per group. Throws Error if the lengths differ.
GroupWinRates overall_win_rates(std::span<const double> masses, std::span<const GroupWinRates> per_profile);

struct Concentration {
  double fraction = 0.0;  // sum of squared shares, in [1/n, 1]
  double scaled = 0.0;    // fraction * 1e4
};

// Each group's rate is split evenly over its members (group_size each).
Concentration hhi(double w_low, double w_high, int group_size = 5);

// Sum_k pi_k * eta_k.
double overall_efficiency(std::span<const double> masses, std::span<const double> per_profile_efficiency);

struct ScenarioReport {
  GameKind game_kind = GameKind::symmetric;
  double scenario_param = 0.0;
  // Mass-weighted strategy usage per group: [conservative, moderate, aggressive].
  std::vector<double> usage_low;
  std::vector<double> usage_high;
  GroupWinRates win_rates;
  Concentration concentration;
  double efficiency = 0.0;
  double alpha = 0.0;
  int n_sims = 0;
  std::uint64_t master_seed = 0;
  int no_winner_rounds = 0;
  std::string id;  // file stem for per-scenario artifacts
};

// Folds a solved table into a report. For the symmetric game the strategy
// usage of each half is reconstructed from the slot assignment.
ScenarioReport make_report(const HeuristicPayoffTable& hpt, const StationaryDistribution& pi);

// Mass-weighted usage per slot half for any table, computed from the slot
// assignment used during estimation.
std::vector<double> group_usage(const HeuristicPayoffTable& hpt, std::span<const double> masses, Role role);

}  // namespace mevsim
