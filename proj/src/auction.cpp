#include "mevsim/auction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "mevsim/error.hpp"
#include "mevsim/kernels.hpp"

namespace mevsim {

std::string_view strategy_name(MetaStrategy s) {
  switch (s) {
    case MetaStrategy::conservative:
      return "conservative";
    case MetaStrategy::moderate:
      return "moderate";
    case MetaStrategy::aggressive:
      return "aggressive";
  }
  return "unknown";
}

FractionInterval fraction_interval(MetaStrategy s) {
  switch (s) {
    case MetaStrategy::conservative:
      return {0.0, 1.0 / 3.0, false};
    case MetaStrategy::moderate:
      return {1.0 / 3.0, 2.0 / 3.0, true};
    case MetaStrategy::aggressive:
      return {2.0 / 3.0, 1.0, true};
  }
  throw Error("unknown meta strategy");
}

double fraction_from_unit(MetaStrategy s, double u) {
  const FractionInterval iv = fraction_interval(s);
  const double x = iv.lo_open ? iv.hi - (iv.hi - iv.lo) * u : iv.lo + (iv.hi - iv.lo) * u;
  return std::clamp(x, iv.lo, iv.hi);
}

double compute_bid(double public_eth, double private_eth, double fraction) {
  if (public_eth < 0.0 || private_eth < 0.0) throw Error("signals must be non-negative");
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw Error("bid fraction outside [0, 1]");
  return public_eth + fraction * private_eth;
}

void AuctionParams::validate() const {
  if (!(t_mean_s > 0.0)) throw ConfigError("t_mean_s must be positive");
  if (!(t_sigma_s >= 0.0)) throw ConfigError("t_sigma_s must be non-negative");
  if (!(step_ms > 0.0)) throw ConfigError("step_ms must be positive");
  if (n_builders < 1 || n_builders > kMaxBuilders) throw ConfigError("n_builders must be in [1, 64]");
}

std::span<const double> AuctionRunner::bid_series(int builder) const {
  return std::span<const double>(bids_).subspan(static_cast<std::size_t>(builder) * ticks_, ticks_);
}

AuctionOutcome AuctionRunner::run(const AuctionParams& params, std::span<const BuilderSpec> builders,
                                  const SignalTrace& trace, Rng& rng) {
  params.validate();
  const int n = static_cast<int>(builders.size());
  if (n != params.n_builders) {
    throw Error("got " + std::to_string(n) + " builders, params expect " +
                std::to_string(params.n_builders));
  }
  if (trace.n_builders() != n) throw Error("trace builder count does not match the auction");
  if (trace.step_ms() != params.step_ms) throw Error("trace tick size does not match the auction");
  const double required_s = params.t_mean_s + 6.0 * params.t_sigma_s;
  if (trace.horizon_s() < required_s) {
    throw Error("signal trace covers " + std::to_string(trace.horizon_s()) + " s but the deadline needs " +
                std::to_string(required_s) + " s");
  }
  for (const BuilderSpec& b : builders) {
    if (!(b.latency_ms > 0.0)) throw Error("builder latency must be positive");
    if (!(b.theta >= 0.0 && b.theta <= 1.0)) throw Error("builder theta outside [0, 1]");
  }

  AuctionOutcome out;
  double deadline = params.t_mean_s;
  if (params.t_sigma_s > 0.0) {
    std::normal_distribution<double> draw(params.t_mean_s, params.t_sigma_s);
    deadline = draw(rng);
  }
  deadline = std::clamp(deadline, 0.0, trace.horizon_s());
  out.deadline_s = deadline;
  const double deadline_ms = deadline * 1000.0;
  const auto deadline_tick = std::min<std::size_t>(
      static_cast<std::size_t>(std::floor(deadline_ms / params.step_ms)), trace.n_ticks() - 1);

  out.lambda_draws.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const BuilderSpec& b = builders[static_cast<std::size_t>(i)];
    double lambda = b.fraction ? *b.fraction : draw_meta_fraction(b.strategy, rng);
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error("bid fraction outside [0, 1]");
    out.lambda_draws[static_cast<std::size_t>(i)] = lambda;
  }

  ticks_ = deadline_tick + 1;
  bids_.resize(ticks_ * static_cast<std::size_t>(n));
  highest_.assign(ticks_, 0.0);
  last_eligible_.assign(static_cast<std::size_t>(n), -1);

  const auto pub = trace.public_cumulative().first(ticks_);
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    std::span<double> bids = std::span<double>(bids_).subspan(idx * ticks_, ticks_);
    kernels::scaled_add(pub, trace.private_cumulative(i).first(ticks_), out.lambda_draws[idx], bids);

    // Submission at tick s is accepted by tick t iff s*step + latency <= t*step.
    const double delay_ticks = builders[idx].latency_ms / params.step_ms;
    const auto shift = static_cast<std::size_t>(std::ceil(delay_ticks));
    if (shift < ticks_) {
      kernels::max_into(std::span<double>(highest_).subspan(shift),
                        std::span<const double>(bids).first(ticks_ - shift));
    }
    const double slack = (deadline_ms - builders[idx].latency_ms) / params.step_ms;
    if (slack >= 0.0) {
      last_eligible_[idx] = std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(slack)),
                                                   static_cast<std::int64_t>(deadline_tick));
    }
  }

  out.payoffs.assign(static_cast<std::size_t>(n), 0.0);
  out.total_signal_at_deadline = trace.total_at(deadline_tick);

  // Bids are non-decreasing, so each builder's best accepted bid is the one
  // from its last eligible tick.
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const std::int64_t s = last_eligible_[static_cast<std::size_t>(i)];
    if (s >= 0) best = std::max(best, bid_series(i)[static_cast<std::size_t>(s)]);
  }
  if (best == -std::numeric_limits<double>::infinity()) return out;  // nobody reached the relay

  // Among equal bids the relay keeps the earliest arrival.
  std::vector<int> tied;
  std::vector<std::int64_t> first_tick(static_cast<std::size_t>(n), -1);
  double earliest_arrival = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const std::int64_t s = last_eligible_[static_cast<std::size_t>(i)];
    if (s < 0) continue;
    const auto series = bid_series(i).first(static_cast<std::size_t>(s) + 1);
    if (series.back() != best) continue;
    const auto first = std::lower_bound(series.begin(), series.end(), best) - series.begin();
    first_tick[static_cast<std::size_t>(i)] = first;
    const double arrival =
        static_cast<double>(first) * params.step_ms + builders[static_cast<std::size_t>(i)].latency_ms;
    if (arrival < earliest_arrival) {
      earliest_arrival = arrival;
      tied.assign(1, i);
    } else if (arrival == earliest_arrival) {
      tied.push_back(i);
    }
  }
  int winner = tied.front();
  if (tied.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
    winner = tied[pick(rng)];
    out.random_tie_break = true;
  }

  const auto w = static_cast<std::size_t>(winner);
  const auto tw = static_cast<std::size_t>(first_tick[w]);
  out.has_winner = true;
  out.winner = winner;
  out.winning_bid = best;
  out.submission_tick = first_tick[w];
  out.t_w_s = static_cast<double>(tw) * params.step_ms / 1000.0;
  out.acceptance_time_s = earliest_arrival / 1000.0;
  out.winner_signal_at_tw = trace.aggregated_at(winner, tw);
  out.winner_private_at_tw = trace.private_at(winner, tw);
  out.payoffs[w] = out.winner_signal_at_tw - best;

  const double denominator = params.efficiency_denominator == EfficiencyDenominator::total_at_deadline
                                 ? out.total_signal_at_deadline
                                 : trace.total_at(tw);
  out.efficiency = denominator > 0.0 ? best / denominator : 0.0;
  return out;
}

void AuctionRunner::write_bid_log_csv(std::ostream& os) const {
  os << "tick,builder,bid,accepted\n";
  char buf[32];
  const std::size_t n = last_eligible_.size();
  for (std::size_t t = 0; t < ticks_; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", bids_[i * ticks_ + t]);
      const bool accepted = static_cast<std::int64_t>(t) <= last_eligible_[i];
      os << t << ',' << i << ',' << buf << ',' << (accepted ? 1 : 0) << '\n';
    }
  }
}

AuctionOutcome run_auction(const AuctionParams& params, std::span<const BuilderSpec> builders,
                           const SignalTrace& trace, Rng& rng) {
  AuctionRunner runner;
  return runner.run(params, builders, trace, rng);
}

}  // namespace mevsim
