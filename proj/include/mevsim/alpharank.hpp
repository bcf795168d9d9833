#pragma once

// Alpha-Rank over heuristic payoff tables.
//
// States are profiles (strategy counts per role). From a profile, one player
// switches strategy: the player is picked uniformly among all players, the
// target strategy uniformly among the others, and the switch is accepted with
// the fixation probability rho of the payoff difference. The
// stationary distribution of that chain ranks the profiles.

#include <cstdint>
#include <span>
#include <vector>

#include "mevsim/hpt.hpp"

namespace mevsim {

// Counts and average payoffs per (role, strategy), independent of how they
// were estimated. Small hand-built games use this directly.
struct EmpiricalGame {
  int n_roles = 1;
  int n_strategies = 3;
  int role_size = 10;
  std::vector<std::vector<int>> counts;      // per profile, n_roles * n_strategies
  std::vector<std::vector<double>> payoffs;  // same layout

  std::size_t size() const { return counts.size(); }
  int n_players() const { return n_roles * role_size; }
  // Throws Error on inconsistent shapes.
  void validate() const;

  static EmpiricalGame from_hpt(const HeuristicPayoffTable& hpt);
};

// Probability that a player switching from payoff u_sigma to u_tau takes
// over: (1 - e^{-a d}) / (1 - e^{-N a d}) with d = u_tau - u_sigma, and 1/N
// when d == 0. Evaluated without overflow for any a * d.
double switch_rate(double u_sigma, double u_tau, double alpha, int population_size);

struct TransitionChain {
  std::vector<std::vector<int>> states;
  std::vector<double> matrix;  // row-major, size() x size()
  double alpha = 0.0;
  int population_size = 0;

  std::size_t size() const { return states.size(); }
  double at(std::size_t from, std::size_t to) const { return matrix[from * size() + to]; }
  std::span<const double> row(std::size_t from) const {
    return std::span<const double>(matrix).subspan(from * size(), size());
  }
};

// Throws Error if a unilateral deviation leads to a profile missing from the
// table. population_size <= 0 selects the role size.
TransitionChain build_transition_chain(const EmpiricalGame& game, double alpha, int population_size = 0);
TransitionChain build_transition_chain(const HeuristicPayoffTable& hpt, double alpha, int population_size = 0);

struct StationaryDistribution {
  std::vector<double> masses;
  double alpha = 0.0;
  double residual = 0.0;  // |pi P - pi|_1
  bool perturbed = false;  // chain was reducible and got a 1e-12 uniform perturbation
  bool power_iteration = false;  // direct solve fell short and power iteration finished it
};

inline constexpr double kStationaryTolerance = 1e-9;
inline constexpr double kReducibilityPerturbation = 1e-12;

// Direct solve (Grassmann-Taksar-Heyman elimination) with a power-iteration
// fallback. Throws Error carrying the residual if neither reaches
// kStationaryTolerance.
StationaryDistribution stationary_distribution(const TransitionChain& chain);

// Profile indices by descending mass; ties keep table order.
std::vector<std::size_t> rank_profiles(std::span<const double> masses);

struct SweepResult {
  std::vector<double> alphas;
  std::vector<StationaryDistribution> distributions;
  bool converged = false;

  const StationaryDistribution& final_distribution() const { return distributions.back(); }
  std::vector<std::size_t> final_ranking() const { return rank_profiles(final_distribution().masses); }
};

// Ascending, positive grid. Throws Error (with the alpha) if a solve fails.
SweepResult sweep_alpha(const EmpiricalGame& game, std::span<const double> alpha_grid,
                        int population_size = 0);

std::vector<double> geometric_grid(double lo, double hi, int points);

struct PayoffGaps {
  double smallest = 0.0;  // smallest nonzero |u_tau - u_sigma| over unilateral deviations
  double largest = 0.0;
};
PayoffGaps payoff_gaps(const EmpiricalGame& game);

inline constexpr double kAlphaBoundEpsilon = 1e-3;

// ln(1/epsilon) / smallest gap. Throws Error if every gap is zero.
double estimate_alpha_lower_bound(const EmpiricalGame& game, double epsilon = kAlphaBoundEpsilon);

// 30 geometric points from 1e-2 / largest gap to 10 x the lower bound.
std::vector<double> default_alpha_grid(const EmpiricalGame& game, int points = 30);

// Mass-weighted strategy counts, laid out per (role, strategy).
std::vector<double> equilibrium_summary(std::span<const double> masses,
                                        std::span<const std::vector<int>> counts);

}  // namespace mevsim
