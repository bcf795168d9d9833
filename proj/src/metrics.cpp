#include "mevsim/metrics.hpp"

#include "mevsim/error.hpp"

namespace mevsim {

GroupWinRates overall_win_rates(std::span<const double> masses, std::span<const GroupWinRates> per_profile) {
  if (masses.size() != per_profile.size()) {
    throw Error("stationary masses (" + std::to_string(masses.size()) + ") and win rates (" +
                std::to_string(per_profile.size()) + ") are not aligned");
  }
  GroupWinRates out;
  for (std::size_t k = 0; k < masses.size(); ++k) {
    out.low += masses[k] * per_profile[k].low;
    out.high += masses[k] * per_profile[k].high;
  }
  return out;
}

Concentration hhi(double w_low, double w_high, int group_size) {
  if (group_size < 1) throw Error("group size must be positive");
  const double g = static_cast<double>(group_size);
  Concentration c;
  c.fraction = (w_low * w_low + w_high * w_high) / g;
  c.scaled = c.fraction * 1e4;
  return c;
}

double overall_efficiency(std::span<const double> masses, std::span<const double> per_profile_efficiency) {
  if (masses.size() != per_profile_efficiency.size()) throw Error("masses and efficiencies are not aligned");
  double eta = 0.0;
  for (std::size_t k = 0; k < masses.size(); ++k) eta += masses[k] * per_profile_efficiency[k];
  return eta;
}

std::vector<double> group_usage(const HeuristicPayoffTable& hpt, std::span<const double> masses, Role role) {
  if (masses.size() != hpt.size()) throw Error("masses and table are not aligned");
  std::vector<double> usage(kNumStrategies, 0.0);
  const int n = hpt.n_players();
  const int half = (n + 1) / 2;
  const int first = role == Role::low ? 0 : half;
  const int last = role == Role::low ? half : n;
  for (std::size_t k = 0; k < hpt.size(); ++k) {
    if (masses[k] == 0.0) continue;
    const std::vector<BuilderSpec> slots = assign_slots(hpt.spec(), hpt.row(k).counts);
    for (int i = first; i < last; ++i) {
      usage[static_cast<std::size_t>(slots[static_cast<std::size_t>(i)].strategy)] += masses[k];
    }
  }
  return usage;
}

ScenarioReport make_report(const HeuristicPayoffTable& hpt, const StationaryDistribution& pi) {
  ScenarioReport report;
  const GameSpec& spec = hpt.spec();
  report.game_kind = spec.kind;
  report.scenario_param = spec.scenario_param();
  report.usage_low = group_usage(hpt, pi.masses, Role::low);
  report.usage_high = group_usage(hpt, pi.masses, Role::high);

  std::vector<GroupWinRates> rates(hpt.size());
  std::vector<double> efficiency(hpt.size());
  for (std::size_t k = 0; k < hpt.size(); ++k) {
    rates[k] = {hpt.group_win_rate(k, Role::low), hpt.group_win_rate(k, Role::high)};
    efficiency[k] = hpt.row(k).efficiency_mean;
  }
  report.win_rates = overall_win_rates(pi.masses, rates);
  report.concentration = hhi(report.win_rates.low, report.win_rates.high, (hpt.n_players() + 1) / 2);
  report.efficiency = overall_efficiency(pi.masses, efficiency);
  report.alpha = pi.alpha;
  report.n_sims = hpt.n_sims();
  report.master_seed = hpt.master_seed();
  report.no_winner_rounds = hpt.total_no_winner_rounds();
  return report;
}

}  // namespace mevsim
