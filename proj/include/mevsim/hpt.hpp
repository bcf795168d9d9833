#pragma once

// Heuristic payoff tables estimated by Monte Carlo.
//
// A table row is one profile: counts per (role, strategy), the average payoff
// of a player on each (role, strategy), and win statistics. The symmetric game
// has one role of 10 players; the role games have two roles of 5.

#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "mevsim/auction.hpp"
#include "mevsim/profiles.hpp"
#include "mevsim/signal.hpp"

namespace mevsim {

enum class GameKind : std::uint8_t { symmetric, latency_roles, orderflow_roles };

std::string_view game_kind_name(GameKind kind);
GameKind parse_game_kind(std::string_view name);  // throws ConfigError

struct GameSpec {
  GameKind kind = GameKind::symmetric;
  SignalConfig signal;
  AuctionParams auction;
  double base_latency_ms = 10.0;
  double latency_gap_ms = 0.0;   // latency roles: high = base + gap
  double theta_prior_lo = 0.3;   // theta ~ U[lo, hi] unless fixed by role
  double theta_prior_hi = 1.0;
  double theta_low = 0.3;        // orderflow roles
  double theta_high = 1.0;
  int players_per_role = 5;      // role games; the symmetric game uses all players
  // Optional relabelling of player slots (symmetric game only); slot_order[q]
  // is the slot that receives the q-th strategy label.
  std::vector<int> slot_order;

  int n_roles() const { return kind == GameKind::symmetric ? 1 : 2; }
  int n_players() const { return auction.n_builders; }
  int role_size() const { return kind == GameKind::symmetric ? n_players() : players_per_role; }
  // Latency gap in ms or theta_high; 0 for the symmetric game.
  double scenario_param() const;
  void validate() const;
};

// Baseline spec for a game kind: calibrated signals, 10 builders, 10 ms latency.
GameSpec default_game_spec(GameKind kind);

struct HptRow {
  std::vector<int> counts;            // n_roles * n_strategies
  std::vector<double> payoffs;        // same layout; 0 where count is 0
  std::vector<double> win_rates;      // same layout; fraction of rounds won
  std::vector<double> slot_win_rates; // per player slot
  double efficiency_mean = 0.0;
  int no_winner_rounds = 0;
};

class HeuristicPayoffTable {
 public:
  HeuristicPayoffTable() = default;
  HeuristicPayoffTable(GameSpec spec, int n_sims, std::uint64_t master_seed, std::vector<HptRow> rows);

  const GameSpec& spec() const { return spec_; }
  int n_roles() const { return spec_.n_roles(); }
  int n_strategies() const { return kNumStrategies; }
  int role_size() const { return spec_.role_size(); }
  int n_players() const { return spec_.n_players(); }
  int n_sims() const { return n_sims_; }
  std::uint64_t master_seed() const { return master_seed_; }

  std::size_t size() const { return rows_.size(); }
  const HptRow& row(std::size_t k) const { return rows_[k]; }
  const std::vector<HptRow>& rows() const { return rows_; }

  int count(std::size_t k, int role, int strategy) const;
  double payoff(std::size_t k, int role, int strategy) const;
  // Profile index for a counts vector, or -1.
  std::ptrdiff_t find(std::span<const int> counts) const;

  // Win rate of the slot group that plays `role` (slots [0,5) low, [5,10)
  // high). For the symmetric game the two halves are an arbitrary split.
  double group_win_rate(std::size_t k, Role role) const;
  int total_no_winner_rounds() const;

 private:
  GameSpec spec_;
  int n_sims_ = 0;
  std::uint64_t master_seed_ = 0;
  std::vector<HptRow> rows_;
  std::map<std::vector<int>, std::size_t> index_;
};

// One simulated auction for profile `profile_index` at round `round`, seeded
// from (master_seed, profile_index, round) only.
struct RoundResult {
  AuctionOutcome outcome;
  std::vector<BuilderSpec> builders;  // slot order, with the drawn theta and lambda
};

// Slot assignment of (role, strategy) labels for a counts row.
std::vector<BuilderSpec> assign_slots(const GameSpec& spec, std::span<const int> counts);

RoundResult simulate_round(const GameSpec& spec, std::span<const int> counts,
                           std::size_t profile_index, std::size_t round, std::uint64_t master_seed);

struct EstimateOptions {
  int workers = 1;
};

// Averages n_sims rounds per profile. Throws Error if n_sims < 1.
HeuristicPayoffTable estimate_hpt_symmetric(std::span<const Profile> profiles, const GameSpec& spec,
                                            int n_sims, std::uint64_t master_seed,
                                            EstimateOptions options = {});
HeuristicPayoffTable estimate_hpt_role(std::span<const RoleProfile> profiles, const GameSpec& spec,
                                       int n_sims, std::uint64_t master_seed,
                                       EstimateOptions options = {});

// Folds rounds into one row: per-(role, strategy) mean payoff per player,
// zero where nobody plays that strategy.
HptRow aggregate_rounds(const GameSpec& spec, std::span<const int> counts,
                        std::span<const RoundResult> rounds);

}  // namespace mevsim
