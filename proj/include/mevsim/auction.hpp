#pragma once

// One MEV-Boost auction over a SignalTrace.
//
// Every tick each builder submits P(t) + lambda_i * E_i(t). A bid submitted at
// tick t reaches the relay at t + latency_i and only counts if that is no
// later than the deadline T. The proposer takes the highest accepted bid at T.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "mevsim/random.hpp"
#include "mevsim/signal.hpp"

namespace mevsim {

enum class MetaStrategy : std::uint8_t { conservative = 0, moderate = 1, aggressive = 2 };
inline constexpr int kNumStrategies = 3;
inline constexpr std::array<MetaStrategy, kNumStrategies> kAllStrategies{
    MetaStrategy::conservative, MetaStrategy::moderate, MetaStrategy::aggressive};

std::string_view strategy_name(MetaStrategy s);

// Share of the private signal a strategy puts into its bid. Conservative is
// the closed interval [0, 1/3]; the other two are open on the left.
struct FractionInterval {
  double lo;
  double hi;
  bool lo_open;
  bool contains(double x) const { return (lo_open ? x > lo : x >= lo) && x <= hi; }
};

FractionInterval fraction_interval(MetaStrategy s);

// Maps u in [0, 1) onto the strategy's interval, never producing its open end.
double fraction_from_unit(MetaStrategy s, double u);

// Uniform draw from the strategy's interval.
template <class URBG>
double draw_meta_fraction(MetaStrategy s, URBG& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return fraction_from_unit(s, unit(rng));
}

// P + fraction * E. Throws Error on negative signals or a fraction outside [0, 1].
double compute_bid(double public_eth, double private_eth, double fraction);

enum class Role : std::uint8_t { low = 0, high = 1 };

struct BuilderSpec {
  int id = 0;
  double latency_ms = 10.0;
  double theta = 1.0;
  MetaStrategy strategy = MetaStrategy::aggressive;
  std::optional<Role> role;
  // Pins lambda instead of drawing it from the strategy's interval.
  std::optional<double> fraction;
};

enum class EfficiencyDenominator : std::uint8_t {
  total_at_deadline,    // L(T)
  total_at_submission,  // L(t_w)
};

struct AuctionParams {
  double t_mean_s = 13.0;
  double t_sigma_s = 0.1;
  double step_ms = 10.0;
  int n_builders = 10;
  EfficiencyDenominator efficiency_denominator = EfficiencyDenominator::total_at_deadline;

  void validate() const;
};

struct AuctionOutcome {
  bool has_winner = false;
  int winner = -1;  // index into the builder list
  double winning_bid = 0.0;
  std::int64_t submission_tick = -1;
  double t_w_s = 0.0;
  double acceptance_time_s = 0.0;
  double deadline_s = 0.0;  // the drawn T
  std::vector<double> payoffs;
  double winner_signal_at_tw = 0.0;  // L_winner(t_w)
  double winner_private_at_tw = 0.0;  // E_winner(t_w)
  double total_signal_at_deadline = 0.0;  // L(T)
  double efficiency = 0.0;
  std::vector<double> lambda_draws;
  bool random_tie_break = false;
};

// Reusable per-thread engine. Keeps the bid series and the relay's running
// highest accepted bid from the last run for inspection.
class AuctionRunner {
 public:
  AuctionOutcome run(const AuctionParams& params, std::span<const BuilderSpec> builders,
                     const SignalTrace& trace, Rng& rng);

  // Bids submitted at ticks 0..deadline tick by builder i in the last run.
  std::span<const double> bid_series(int builder) const;
  // Highest bid the relay had accepted by each tick of the last run.
  std::span<const double> highest_bid_series() const { return highest_; }
  // Last submission tick whose bid reaches the relay by T, or -1.
  std::int64_t last_eligible_tick(int builder) const {
    return last_eligible_[static_cast<std::size_t>(builder)];
  }

  // tick,builder,bid,accepted
  void write_bid_log_csv(std::ostream& os) const;

 private:
  std::size_t ticks_ = 0;
  std::vector<double> bids_;  // builder-major
  std::vector<double> highest_;
  std::vector<std::int64_t> last_eligible_;
};

AuctionOutcome run_auction(const AuctionParams& params, std::span<const BuilderSpec> builders,
                           const SignalTrace& trace, Rng& rng);

}  // namespace mevsim
