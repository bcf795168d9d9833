#include <doctest.h>

#include <cmath>
#include <random>

#include "mevsim/alpharank.hpp"
#include "mevsim/error.hpp"
#include "mevsim/profiles.hpp"
#include "oracle.hpp"

using namespace mevsim;

namespace {

// Two players, two strategies: profiles (2,0), (1,1), (0,2).
EmpiricalGame two_by_two(double a, double b, double c, double d) {
  EmpiricalGame g;
  g.n_strategies = 2;
  g.role_size = 2;
  g.counts = {{2, 0}, {1, 1}, {0, 2}};
  g.payoffs = {{a, 0.0}, {b, c}, {0.0, d}};
  return g;
}

// Multinomial probability of a counts vector with equal cell probabilities 1/3.
double multinomial_third(const std::vector<int>& counts) {
  double log_p = std::lgamma(counts[0] + counts[1] + counts[2] + 1.0);
  for (int c : counts) log_p -= std::lgamma(c + 1.0) + c * std::log(3.0);
  return std::exp(log_p);
}

double row_sum(const TransitionChain& chain, std::size_t k) {
  double s = 0.0;
  for (double x : chain.row(k)) s += x;
  return s;
}

}  // namespace

TEST_CASE("switch rate closed forms") {
  for (int n : {2, 5, 10}) {
    CHECK(switch_rate(0.3, 0.3, 7.0, n) == 1.0 / n);
    CHECK(switch_rate(0.0, 0.0, 1e9, n) == 1.0 / n);
  }
  CHECK(std::abs(switch_rate(0.0, 1.0, std::log(2.0), 2) - 2.0 / 3.0) < 1e-12);
  CHECK(switch_rate(0.0, 1.0, 100.0, 10) == doctest::Approx(1.0));
  CHECK(switch_rate(0.0, 1.0, 1e300, 10) == 1.0);
  const double tiny = switch_rate(1.0, 0.0, 1000.0, 10);
  CHECK(tiny >= 0.0);
  CHECK(tiny < 1e-300);
  CHECK(std::isfinite(switch_rate(1.0, 0.0, 1e300, 10)));
  for (double gap : {-2.0, -0.3, 0.1, 1.5}) {
    CHECK(switch_rate(0.0, gap, 1.7, 5) == doctest::Approx(oracle::rho(0.0, gap, 1.7, 5)).epsilon(1e-12));
  }
}

TEST_CASE("switch rate increases with the payoff gap") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 2000; ++i) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(switch_rate(0.0, a, 2.0, 10) < switch_rate(0.0, b, 2.0, 10));
  }
}

TEST_CASE("hand-built chain for two players and two strategies") {
  const EmpiricalGame g = two_by_two(1.0, 0.5, 2.0, 1.5);
  const double alpha = 0.8;
  const int n = 2;
  const TransitionChain chain = build_transition_chain(g, alpha, n);
  REQUIRE(chain.size() == 3);
  // From (2,0): either player moves to strategy 1; deviator earns c in (1,1).
  const double p01 = 1.0 * oracle::rho(1.0, 2.0, alpha, n);
  // From (1,1): the strategy-0 player moves (1/2) or the strategy-1 player moves (1/2).
  const double p12 = 0.5 * oracle::rho(0.5, 1.5, alpha, n);
  const double p10 = 0.5 * oracle::rho(2.0, 1.0, alpha, n);
  const double p21 = 1.0 * oracle::rho(1.5, 0.5, alpha, n);
  const double expected[3][3] = {{1 - p01, p01, 0.0}, {p10, 1 - p10 - p12, p12}, {0.0, p21, 1 - p21}};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(chain.at(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-14));
  }
}

TEST_CASE("uniform payoffs give 1/N on every move") {
  EmpiricalGame g;
  g.role_size = 10;
  for (const Profile& p : enumerate_profiles(10, 3)) {
    g.counts.push_back(p.counts);
    g.payoffs.push_back({0.5, 0.5, 0.5});
  }
  const TransitionChain chain = build_transition_chain(g, 3.0);
  for (std::size_t a = 0; a < chain.size(); ++a) {
    CHECK(row_sum(chain, a) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t b = 0; b < chain.size(); ++b) {
      if (a == b || chain.at(a, b) == 0.0) continue;
      int from = -1;
      for (int j = 0; j < 3; ++j) {
        if (chain.states[b][static_cast<std::size_t>(j)] < chain.states[a][static_cast<std::size_t>(j)]) from = j;
      }
      CHECK(chain.at(a, b) == doctest::Approx(chain.states[a][static_cast<std::size_t>(from)] / 10.0 * 0.5 * 0.1));
    }
  }
  // Neutral drift: every player independently uniform over the strategies.
  const StationaryDistribution pi = stationary_distribution(chain);
  for (std::size_t k = 0; k < chain.size(); ++k) {
    CHECK(pi.masses[k] == doctest::Approx(multinomial_third(chain.states[k])).epsilon(1e-9));
  }
}

TEST_CASE("chains and stationary distributions match brute force") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> alpha_draw(0.1, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int players = 2 + trial % 3;
    const int strategies = 2 + (trial / 3) % 2;
    const EmpiricalGame g = oracle::random_game(players, strategies, rng);
    const double alpha = alpha_draw(rng);
    const TransitionChain chain = build_transition_chain(g, alpha);
    const auto reference = oracle::brute_force_chain(g, alpha, players);
    CHECK(oracle::max_abs_diff(chain.matrix, reference) < 1e-12);
    for (std::size_t k = 0; k < chain.size(); ++k) {
      CHECK(std::abs(row_sum(chain, k) - 1.0) < 1e-12);
      for (double x : chain.row(k)) CHECK(x >= 0.0);
    }
    const StationaryDistribution pi = stationary_distribution(chain);
    CHECK(pi.residual < 1e-9);
    CHECK(oracle::max_abs_diff(pi.masses, oracle::eigen_stationary(reference, g.size())) < 1e-9);
  }
}

TEST_CASE("two-role chain matches brute force") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  EmpiricalGame g;
  g.n_roles = 2;
  g.n_strategies = 2;
  g.role_size = 2;
  for (const RoleProfile& rp : enumerate_role_profiles(2, 2)) {
    std::vector<int> counts = rp.low.counts;
    counts.insert(counts.end(), rp.high.counts.begin(), rp.high.counts.end());
    std::vector<double> pay(4);
    for (std::size_t c = 0; c < 4; ++c) pay[c] = counts[c] > 0 ? u(rng) : 0.0;
    g.counts.push_back(counts);
    g.payoffs.push_back(pay);
  }
  const TransitionChain chain = build_transition_chain(g, 2.5);
  CHECK(oracle::max_abs_diff(chain.matrix, oracle::brute_force_chain(g, 2.5, 2)) < 1e-12);
  const StationaryDistribution pi = stationary_distribution(chain);
  CHECK(pi.residual < 1e-9);
}

TEST_CASE("stationary distribution of small chains") {
  TransitionChain two;
  two.states = {{1, 0}, {0, 1}};
  two.matrix = {0.7, 0.3, 0.3, 0.7};
  two.alpha = 1.0;
  const StationaryDistribution half = stationary_distribution(two);
  CHECK(half.masses[0] == doctest::Approx(0.5));
  CHECK(half.masses[1] == doctest::Approx(0.5));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    TransitionChain three;
    three.states = {{0}, {1}, {2}};
    three.alpha = 1.0;
    for (int i = 0; i < 3; ++i) {
      double row[3], s = 0.0;
      for (double& x : row) s += (x = u(rng));
      for (double x : row) three.matrix.push_back(x / s);
    }
    const StationaryDistribution pi = stationary_distribution(three);
    CHECK(pi.residual < 1e-9);
    CHECK(oracle::max_abs_diff(pi.masses, oracle::eigen_stationary(three.matrix, 3)) < 1e-9);
  }
}

TEST_CASE("reducible chains are perturbed and still solved") {
  // Coordination: each pure profile is absorbing once alpha is huge.
  const EmpiricalGame g = two_by_two(1.0, 0.0, 0.0, 1.0);
  const StationaryDistribution pi = stationary_distribution(build_transition_chain(g, 1e6));
  CHECK(pi.perturbed);
  CHECK(pi.residual < 1e-9);
  double total = 0.0;
  for (double m : pi.masses) total += m;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pi.masses[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("adding a constant to every payoff leaves the chain unchanged") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    EmpiricalGame g = oracle::random_game(4, 3, rng);
    const TransitionChain before = build_transition_chain(g, 3.0);
    for (std::size_t k = 0; k < g.size(); ++k) {
      for (std::size_t c = 0; c < g.payoffs[k].size(); ++c) {
        if (g.counts[k][c] > 0) g.payoffs[k][c] += 0.75;
      }
    }
    const TransitionChain after = build_transition_chain(g, 3.0);
    CHECK(oracle::max_abs_diff(before.matrix, after.matrix) < 1e-12);
    CHECK(oracle::max_abs_diff(stationary_distribution(before).masses, stationary_distribution(after).masses) < 1e-9);
  }
}

TEST_CASE("missing deviation targets are rejected") {
  EmpiricalGame g = two_by_two(1.0, 0.5, 2.0, 1.5);
  g.counts.pop_back();
  g.payoffs.pop_back();
  CHECK_THROWS_AS(build_transition_chain(g, 1.0), Error);
  CHECK_THROWS_AS(build_transition_chain(two_by_two(1, 1, 1, 1), 0.0), Error);
}

TEST_CASE("alpha lower bound") {
  // Smallest nonzero deviation gap of 1.
  const EmpiricalGame g = two_by_two(1.0, 0.0, 2.0, 3.0);
  CHECK(payoff_gaps(g).smallest == doctest::Approx(1.0));
  CHECK(estimate_alpha_lower_bound(g) == doctest::Approx(std::log(1000.0)));
  CHECK(estimate_alpha_lower_bound(g) == doctest::Approx(6.908).epsilon(1e-3));
  const EmpiricalGame scaled = two_by_two(10.0, 0.0, 20.0, 30.0);
  CHECK(estimate_alpha_lower_bound(scaled) == doctest::Approx(estimate_alpha_lower_bound(g) / 10.0));
  CHECK_THROWS_AS(estimate_alpha_lower_bound(two_by_two(1, 1, 1, 1)), Error);
  const auto grid = default_alpha_grid(g);
  CHECK(grid.size() == 30);
  CHECK(grid.front() == doctest::Approx(1e-2 / payoff_gaps(g).largest));
  CHECK(grid.back() == doctest::Approx(10.0 * std::log(1000.0)));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("sweep behaviour") {
  std::mt19937_64 rng(77);
  const EmpiricalGame g = oracle::random_game(10, 3, rng);
  const std::vector<double> tiny{1e-9};
  const SweepResult near_zero = sweep_alpha(g, tiny);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(near_zero.final_distribution().masses[k] == doctest::Approx(multinomial_third(g.counts[k])).epsilon(1e-4));
  }

  const auto grid = default_alpha_grid(g);
  const SweepResult a = sweep_alpha(g, grid);
  const SweepResult b = sweep_alpha(g, grid);
  CHECK(a.final_ranking() == b.final_ranking());
  CHECK(a.alphas == grid);
  for (const StationaryDistribution& d : a.distributions) CHECK(d.residual < 1e-9);

  const std::vector<double> descending{2.0, 1.0};
  CHECK_THROWS_AS(sweep_alpha(g, descending), Error);
  CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 3), Error);
}

TEST_CASE("dominant strategy attracts the mass and the sweep converges") {
  // Strategy 2 strictly dominates: higher payoff regardless of the others.
  EmpiricalGame g;
  g.role_size = 10;
  for (const Profile& p : enumerate_profiles(10, 3)) {
    g.counts.push_back(p.counts);
    std::vector<double> pay(3, 0.0);
    for (int j = 0; j < 3; ++j) {
      if (p.counts[static_cast<std::size_t>(j)] > 0) pay[static_cast<std::size_t>(j)] = 0.1 * (j + 1) + 0.01 * p.counts[2];
    }
    g.payoffs.push_back(pay);
  }
  const SweepResult sweep = sweep_alpha(g, default_alpha_grid(g));
  CHECK(sweep.converged);
  const std::size_t top = sweep.final_ranking().front();
  CHECK(g.counts[top] == std::vector<int>{0, 0, 10});
  CHECK(sweep.final_distribution().masses[top] > 0.99);
  // The bound alone reproduces the sweep's ranking head.
  const std::vector<double> bound{estimate_alpha_lower_bound(g)};
  CHECK(sweep_alpha(g, bound).final_ranking().front() == top);
}

TEST_CASE("equilibrium summary") {
  const auto profiles = enumerate_profiles(10, 3);
  std::vector<std::vector<int>> counts;
  for (const Profile& p : profiles) counts.push_back(p.counts);
  std::vector<double> point(66, 0.0);
  point.back() = 1.0;
  CHECK(equilibrium_summary(point, counts) == std::vector<double>{0.0, 0.0, 10.0});
  const std::vector<double> uniform(66, 1.0 / 66.0);
  for (double x : equilibrium_summary(uniform, counts)) CHECK(x == doctest::Approx(10.0 / 3.0));
  const std::vector<std::vector<int>> hand{{2, 0}, {1, 1}, {0, 2}};
  const std::vector<double> w{0.2, 0.3, 0.5};
  const auto s = equilibrium_summary(w, hand);
  CHECK(s[0] == doctest::Approx(0.2 * 2 + 0.3));
  CHECK(s[1] == doctest::Approx(0.3 + 0.5 * 2));
  CHECK_THROWS_AS(equilibrium_summary(std::vector<double>{1.0}, hand), Error);
}
