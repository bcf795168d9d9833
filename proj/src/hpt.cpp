#include "mevsim/hpt.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "mevsim/error.hpp"

namespace mevsim {

std::string_view game_kind_name(GameKind kind) {
  switch (kind) {
    case GameKind::symmetric:
      return "symmetric";
    case GameKind::latency_roles:
      return "latency_roles";
    case GameKind::orderflow_roles:
      return "orderflow_roles";
  }
  return "unknown";
}

GameKind parse_game_kind(std::string_view name) {
  for (GameKind k : {GameKind::symmetric, GameKind::latency_roles, GameKind::orderflow_roles}) {
    if (name == game_kind_name(k)) return k;
  }
  throw ConfigError("unknown game kind '" + std::string(name) +
                    "' (symmetric|latency_roles|orderflow_roles)");
}

double GameSpec::scenario_param() const {
  switch (kind) {
    case GameKind::symmetric:
      return 0.0;
    case GameKind::latency_roles:
      return latency_gap_ms;
    case GameKind::orderflow_roles:
      return theta_high;
  }
  return 0.0;
}

void GameSpec::validate() const {
  signal.validate();
  auction.validate();
  if (signal.n_builders != auction.n_builders) throw ConfigError("signal and auction builder counts differ");
  if (signal.step_ms != auction.step_ms) throw ConfigError("signal and auction tick sizes differ");
  if (!(base_latency_ms > 0.0)) throw ConfigError("base latency must be positive");
  if (!(latency_gap_ms >= 0.0)) throw ConfigError("latency gap must be non-negative");
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(theta_prior_lo) || !unit(theta_prior_hi) || theta_prior_lo > theta_prior_hi) {
    throw ConfigError("theta prior must be a sub-interval of [0, 1]");
  }
  if (!unit(theta_low) || !unit(theta_high)) throw ConfigError("role thetas must lie in [0, 1]");
  if (kind != GameKind::symmetric && 2 * players_per_role != n_players()) {
    throw ConfigError("role games need two roles of equal size covering every builder");
  }
  if (!slot_order.empty()) {
    std::vector<int> sorted = slot_order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> identity(static_cast<std::size_t>(n_players()));
    std::iota(identity.begin(), identity.end(), 0);
    if (sorted != identity) throw ConfigError("slot_order must be a permutation of the player slots");
  }
}

GameSpec default_game_spec(GameKind kind) {
  GameSpec spec;
  spec.kind = kind;
  spec.signal = calibrate_rates(CalibrationConstants{});
  spec.auction = AuctionParams{};
  return spec;
}

HeuristicPayoffTable::HeuristicPayoffTable(GameSpec spec, int n_sims, std::uint64_t master_seed,
                                           std::vector<HptRow> rows)
    : spec_(std::move(spec)), n_sims_(n_sims), master_seed_(master_seed), rows_(std::move(rows)) {
  const std::size_t width = static_cast<std::size_t>(n_roles() * n_strategies());
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const HptRow& r = rows_[k];
    if (r.counts.size() != width || r.payoffs.size() != width || r.win_rates.size() != width) {
      throw Error("HPT row " + std::to_string(k) + " has the wrong width");
    }
    if (!index_.emplace(r.counts, k).second) throw Error("duplicate profile in HPT");
  }
}

int HeuristicPayoffTable::count(std::size_t k, int role, int strategy) const {
  return rows_[k].counts[static_cast<std::size_t>(role * n_strategies() + strategy)];
}

double HeuristicPayoffTable::payoff(std::size_t k, int role, int strategy) const {
  return rows_[k].payoffs[static_cast<std::size_t>(role * n_strategies() + strategy)];
}

std::ptrdiff_t HeuristicPayoffTable::find(std::span<const int> counts) const {
  const auto it = index_.find(std::vector<int>(counts.begin(), counts.end()));
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

double HeuristicPayoffTable::group_win_rate(std::size_t k, Role role) const {
  const std::vector<double>& slots = rows_[k].slot_win_rates;
  const std::size_t half = (slots.size() + 1) / 2;
  const auto first = slots.begin() + (role == Role::low ? 0 : static_cast<std::ptrdiff_t>(half));
  const auto last = role == Role::low ? slots.begin() + static_cast<std::ptrdiff_t>(half) : slots.end();
  return std::accumulate(first, last, 0.0);
}

int HeuristicPayoffTable::total_no_winner_rounds() const {
  int total = 0;
  for (const HptRow& r : rows_) total += r.no_winner_rounds;
  return total;
}

std::vector<BuilderSpec> assign_slots(const GameSpec& spec, std::span<const int> counts) {
  const int n = spec.n_players();
  const int roles = spec.n_roles();
  if (static_cast<int>(counts.size()) != roles * kNumStrategies) throw Error("profile width mismatch");
  std::vector<BuilderSpec> builders(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) builders[static_cast<std::size_t>(i)].id = i + 1;

  if (spec.kind == GameKind::symmetric) {
    if (std::accumulate(counts.begin(), counts.end(), 0) != n) throw Error("profile does not cover every player");
    // Labels alternate between the two slot halves so each half gets a
    // near-equal share of every strategy.
    const int half = (n + 1) / 2;
    int q = 0;
    for (int j = 0; j < kNumStrategies; ++j) {
      for (int c = 0; c < counts[static_cast<std::size_t>(j)]; ++c, ++q) {
        int slot = (q % 2 == 0) ? q / 2 : half + q / 2;
        if (!spec.slot_order.empty()) slot = spec.slot_order[static_cast<std::size_t>(slot)];
        BuilderSpec& b = builders[static_cast<std::size_t>(slot)];
        b.strategy = kAllStrategies[static_cast<std::size_t>(j)];
        b.latency_ms = spec.base_latency_ms;
      }
    }
    return builders;
  }

  const int per_role = spec.players_per_role;
  for (int r = 0; r < 2; ++r) {
    const auto row = counts.subspan(static_cast<std::size_t>(r * kNumStrategies), kNumStrategies);
    if (std::accumulate(row.begin(), row.end(), 0) != per_role) throw Error("role profile does not fill its role");
    int slot = r * per_role;
    for (int j = 0; j < kNumStrategies; ++j) {
      for (int c = 0; c < row[static_cast<std::size_t>(j)]; ++c, ++slot) {
        BuilderSpec& b = builders[static_cast<std::size_t>(slot)];
        b.strategy = kAllStrategies[static_cast<std::size_t>(j)];
        b.role = r == 0 ? Role::low : Role::high;
        b.latency_ms = spec.base_latency_ms;
        if (spec.kind == GameKind::latency_roles && r == 1) b.latency_ms += spec.latency_gap_ms;
        if (spec.kind == GameKind::orderflow_roles) b.theta = r == 0 ? spec.theta_low : spec.theta_high;
      }
    }
  }
  return builders;
}

namespace {

// Per-thread buffers for running many rounds.
class RoundSimulator {
 public:
  explicit RoundSimulator(const GameSpec& spec) : spec_(spec) {}

  // Runs round (k, v) for a slot template from assign_slots.
  const AuctionOutcome& run(std::span<const BuilderSpec> slots, std::size_t k, std::size_t v,
                            std::uint64_t master_seed) {
    builders_.assign(slots.begin(), slots.end());
    thetas_.resize(builders_.size());
    const bool theta_from_prior = spec_.kind != GameKind::orderflow_roles;
    std::uniform_real_distribution<double> prior(spec_.theta_prior_lo, spec_.theta_prior_hi);
    for (std::size_t i = 0; i < builders_.size(); ++i) {
      SplitMix64 slot_rng(derive_seed(master_seed, {k, v, stream::kSlot, i}));
      BuilderSpec& b = builders_[i];
      if (theta_from_prior) b.theta = prior(slot_rng);
      b.fraction = draw_meta_fraction(b.strategy, slot_rng);
      thetas_[i] = b.theta;
    }
    Rng rng(derive_seed(master_seed, {k, v, stream::kTrace}));
    generate_signal_trace(spec_.signal, thetas_, rng, trace_);
    outcome_ = runner_.run(spec_.auction, builders_, trace_, rng);
    return outcome_;
  }

  const std::vector<BuilderSpec>& builders() const { return builders_; }

 private:
  const GameSpec& spec_;
  std::vector<BuilderSpec> builders_;
  std::vector<double> thetas_;
  SignalTrace trace_;
  AuctionRunner runner_;
  AuctionOutcome outcome_;
};

class RowAccumulator {
 public:
  RowAccumulator(const GameSpec& spec, std::span<const int> counts)
      : counts_(counts.begin(), counts.end()),
        payoff_sum_(counts_.size(), 0.0),
        wins_(counts_.size(), 0),
        slot_wins_(static_cast<std::size_t>(spec.n_players()), 0) {}

  void add(const AuctionOutcome& outcome, std::span<const BuilderSpec> builders) {
    ++rounds_;
    for (std::size_t i = 0; i < builders.size(); ++i) {
      payoff_sum_[cell(builders[i])] += outcome.payoffs[i];
    }
    efficiency_sum_ += outcome.efficiency;
    if (!outcome.has_winner) {
      ++no_winner_;
      return;
    }
    const auto w = static_cast<std::size_t>(outcome.winner);
    ++wins_[cell(builders[w])];
    ++slot_wins_[w];
  }

  HptRow finish() const {
    if (rounds_ == 0) throw Error("no rounds to aggregate");
    HptRow row;
    row.counts = counts_;
    row.payoffs.assign(counts_.size(), 0.0);
    row.win_rates.assign(counts_.size(), 0.0);
    const double rounds = static_cast<double>(rounds_);
    for (std::size_t c = 0; c < counts_.size(); ++c) {
      if (counts_[c] > 0) row.payoffs[c] = payoff_sum_[c] / (rounds * counts_[c]);
      row.win_rates[c] = static_cast<double>(wins_[c]) / rounds;
    }
    row.slot_win_rates.reserve(slot_wins_.size());
    for (long w : slot_wins_) row.slot_win_rates.push_back(static_cast<double>(w) / rounds);
    row.efficiency_mean = efficiency_sum_ / rounds;
    row.no_winner_rounds = no_winner_;
    return row;
  }

 private:
  static std::size_t cell(const BuilderSpec& b) {
    const int role = b.role ? static_cast<int>(*b.role) : 0;
    return static_cast<std::size_t>(role * kNumStrategies + static_cast<int>(b.strategy));
  }

  std::vector<int> counts_;
  std::vector<double> payoff_sum_;
  std::vector<long> wins_;
  std::vector<long> slot_wins_;
  double efficiency_sum_ = 0.0;
  int no_winner_ = 0;
  long rounds_ = 0;
};

HeuristicPayoffTable estimate(const std::vector<std::vector<int>>& all_counts, const GameSpec& spec,
                              int n_sims, std::uint64_t master_seed, EstimateOptions options) {
  if (n_sims < 1) throw Error("n_sims must be at least 1");
  spec.validate();
  std::vector<HptRow> rows(all_counts.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    RoundSimulator sim(spec);
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= all_counts.size()) return;
      try {
        const std::vector<BuilderSpec> slots = assign_slots(spec, all_counts[k]);
        RowAccumulator acc(spec, all_counts[k]);
        for (int v = 0; v < n_sims; ++v) {
          const AuctionOutcome& outcome = sim.run(slots, k, static_cast<std::size_t>(v), master_seed);
          acc.add(outcome, sim.builders());
        }
        rows[k] = acc.finish();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(all_counts.size());
        return;
      }
    }
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return HeuristicPayoffTable(spec, n_sims, master_seed, std::move(rows));
}

}  // namespace

RoundResult simulate_round(const GameSpec& spec, std::span<const int> counts, std::size_t profile_index,
                           std::size_t round, std::uint64_t master_seed) {
  spec.validate();
  RoundSimulator sim(spec);
  const std::vector<BuilderSpec> slots = assign_slots(spec, counts);
  RoundResult result;
  result.outcome = sim.run(slots, profile_index, round, master_seed);
  result.builders = sim.builders();
  return result;
}

HptRow aggregate_rounds(const GameSpec& spec, std::span<const int> counts,
                        std::span<const RoundResult> rounds) {
  RowAccumulator acc(spec, counts);
  for (const RoundResult& r : rounds) acc.add(r.outcome, r.builders);
  return acc.finish();
}

HeuristicPayoffTable estimate_hpt_symmetric(std::span<const Profile> profiles, const GameSpec& spec,
                                            int n_sims, std::uint64_t master_seed,
                                            EstimateOptions options) {
  if (spec.kind != GameKind::symmetric) throw Error("estimate_hpt_symmetric needs a symmetric game spec");
  std::vector<std::vector<int>> counts;
  counts.reserve(profiles.size());
  for (const Profile& p : profiles) counts.push_back(p.counts);
  return estimate(counts, spec, n_sims, master_seed, options);
}

HeuristicPayoffTable estimate_hpt_role(std::span<const RoleProfile> profiles, const GameSpec& spec,
                                       int n_sims, std::uint64_t master_seed, EstimateOptions options) {
  if (spec.kind == GameKind::symmetric) throw Error("estimate_hpt_role needs a role game spec");
  std::vector<std::vector<int>> counts;
  counts.reserve(profiles.size());
  for (const RoleProfile& p : profiles) {
    std::vector<int> row = p.low.counts;
    row.insert(row.end(), p.high.counts.begin(), p.high.counts.end());
    counts.push_back(std::move(row));
  }
  return estimate(counts, spec, n_sims, master_seed, options);
}

}  // namespace mevsim
