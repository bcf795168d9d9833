#include "mevsim/alpharank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "mevsim/error.hpp"
#include "mevsim/kernels.hpp"

namespace mevsim {

void EmpiricalGame::validate() const {
  if (n_roles < 1 || n_strategies < 1 || role_size < 1) throw Error("empty game shape");
  if (payoffs.size() != counts.size()) throw Error("counts and payoffs differ in length");
  const std::size_t width = static_cast<std::size_t>(n_roles * n_strategies);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k].size() != width || payoffs[k].size() != width) {
      throw Error("profile " + std::to_string(k) + " has the wrong width");
    }
    for (int r = 0; r < n_roles; ++r) {
      int total = 0;
      for (int j = 0; j < n_strategies; ++j) total += counts[k][static_cast<std::size_t>(r * n_strategies + j)];
      if (total != role_size) throw Error("profile " + std::to_string(k) + " does not fill role " + std::to_string(r));
    }
  }
}

EmpiricalGame EmpiricalGame::from_hpt(const HeuristicPayoffTable& hpt) {
  EmpiricalGame g;
  g.n_roles = hpt.n_roles();
  g.n_strategies = hpt.n_strategies();
  g.role_size = hpt.role_size();
  g.counts.reserve(hpt.size());
  g.payoffs.reserve(hpt.size());
  for (const HptRow& row : hpt.rows()) {
    g.counts.push_back(row.counts);
    g.payoffs.push_back(row.payoffs);
  }
  return g;
}

double switch_rate(double u_sigma, double u_tau, double alpha, int population_size) {
  const double n = static_cast<double>(population_size);
  const double gap = u_tau - u_sigma;
  if (gap == 0.0) return 1.0 / n;
  const double x = alpha * gap;
  if (x > 0.0) return -std::expm1(-x) / -std::expm1(-n * x);
  // For x < 0 factor e^{(N-1)x} out so nothing overflows.
  const double y = -x;
  return std::exp(-(n - 1.0) * y) * (-std::expm1(-y) / -std::expm1(-n * y));
}

namespace {

int resolve_population(const EmpiricalGame& game, int population_size) {
  const int n = population_size > 0 ? population_size : game.role_size;
  if (n < 2) throw Error("population size must be at least 2");
  return n;
}

std::map<std::vector<int>, std::size_t> index_profiles(const EmpiricalGame& game) {
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t k = 0; k < game.size(); ++k) {
    if (!index.emplace(game.counts[k], k).second) throw Error("duplicate profile in payoff table");
  }
  return index;
}

// Calls fn(from, to, cell_from, cell_to, count_from) for every
// unilateral deviation in the table.
template <class Fn>
void for_each_deviation(const EmpiricalGame& game, Fn&& fn) {
  const auto index = index_profiles(game);
  const int s = game.n_strategies;
  std::vector<int> dest;
  for (std::size_t k = 0; k < game.size(); ++k) {
    for (int r = 0; r < game.n_roles; ++r) {
      for (int j = 0; j < s; ++j) {
        const auto cj = static_cast<std::size_t>(r * s + j);
        const int c = game.counts[k][cj];
        if (c == 0) continue;
        for (int jp = 0; jp < s; ++jp) {
          if (jp == j) continue;
          const auto cjp = static_cast<std::size_t>(r * s + jp);
          dest = game.counts[k];
          --dest[cj];
          ++dest[cjp];
          const auto it = index.find(dest);
          if (it == index.end()) {
            throw Error("payoff table is missing the deviation target of profile " + std::to_string(k));
          }
          fn(k, it->second, cj, cjp, c);
        }
      }
    }
  }
}

// Stationary vector of an irreducible stochastic matrix by GTH elimination.
// Returns false if a pivot vanishes (the chain is reducible).
bool solve_gth(std::vector<double> a, std::size_t n, std::vector<double>& pi) {
  for (std::size_t k = n; k-- > 1;) {
    double* row_k = a.data() + k * n;
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += row_k[j];
    if (!(s > 0.0) || !std::isfinite(s)) return false;
    for (std::size_t i = 0; i < k; ++i) {
      double* row_i = a.data() + i * n;
      row_i[k] /= s;
      if (row_i[k] != 0.0) kernels::axpy(row_i[k], std::span<const double>(row_k, k), std::span<double>(row_i, k));
    }
  }
  pi.assign(n, 0.0);
  pi[0] = 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += pi[i] * a[i * n + k];
    pi[k] = acc;
  }
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) return false;
  for (double& p : pi) p /= total;
  return true;
}

// out = pi * P
void left_multiply(const std::vector<double>& matrix, std::size_t n, std::span<const double> pi,
                   std::vector<double>& out) {
  out.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (pi[i] != 0.0) kernels::axpy(pi[i], std::span<const double>(matrix).subspan(i * n, n), out);
  }
}

double residual_of(const std::vector<double>& matrix, std::size_t n, std::span<const double> pi) {
  std::vector<double> next;
  left_multiply(matrix, n, pi, next);
  return kernels::l1_distance(next, pi);
}

// Iterates on `matrix` but judges convergence against `reference`, the
// unperturbed chain.
bool power_iterate(const std::vector<double>& matrix, const std::vector<double>& reference, std::size_t n,
                   std::vector<double>& pi, double& residual) {
  constexpr int kMaxIterations = 1'000'000;
  constexpr double kTarget = 1e-12;
  std::vector<double> next;
  for (int it = 0; it < kMaxIterations; ++it) {
    left_multiply(matrix, n, pi, next);
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& p : next) p /= total;
    residual = kernels::l1_distance(next, pi);
    pi.swap(next);
    if (residual < kTarget) break;
  }
  residual = residual_of(reference, n, pi);
  return residual < kStationaryTolerance;
}

}  // namespace

TransitionChain build_transition_chain(const EmpiricalGame& game, double alpha, int population_size) {
  game.validate();
  if (!(alpha > 0.0)) throw Error("alpha must be positive");
  const int population = resolve_population(game, population_size);
  const std::size_t n = game.size();

  TransitionChain chain;
  chain.states = game.counts;
  chain.alpha = alpha;
  chain.population_size = population;
  chain.matrix.assign(n * n, 0.0);
  if (game.n_strategies < 2) {
    for (std::size_t k = 0; k < n; ++k) chain.matrix[k * n + k] = 1.0;
    return chain;
  }

  const double per_target = 1.0 / static_cast<double>(game.n_strategies - 1);
  const double players = static_cast<double>(game.n_players());
  for_each_deviation(game, [&](std::size_t from, std::size_t to, std::size_t cell_from,
                               std::size_t cell_to, int count) {
    const double rho = switch_rate(game.payoffs[from][cell_from], game.payoffs[to][cell_to], alpha, population);
    chain.matrix[from * n + to] += (count / players) * per_target * rho;
  });
  for (std::size_t k = 0; k < n; ++k) {
    double out = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != k) out += chain.matrix[k * n + j];
    }
    chain.matrix[k * n + k] = 1.0 - out;
  }
  return chain;
}

TransitionChain build_transition_chain(const HeuristicPayoffTable& hpt, double alpha, int population_size) {
  return build_transition_chain(EmpiricalGame::from_hpt(hpt), alpha, population_size);
}

StationaryDistribution stationary_distribution(const TransitionChain& chain) {
  const std::size_t n = chain.size();
  if (n == 0) throw Error("empty transition chain");
  StationaryDistribution result;
  result.alpha = chain.alpha;

  std::vector<double> matrix = chain.matrix;
  std::vector<double> pi;
  if (!solve_gth(matrix, n, pi)) {
    result.perturbed = true;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) matrix[i * n + j] += kReducibilityPerturbation;
      }
      matrix[i * n + i] -= kReducibilityPerturbation * static_cast<double>(n - 1);
    }
    if (!solve_gth(matrix, n, pi)) pi.assign(n, 1.0 / static_cast<double>(n));
  }

  result.residual = residual_of(chain.matrix, n, pi);
  if (!(result.residual < kStationaryTolerance)) {
    result.power_iteration = true;
    if (!power_iterate(matrix, chain.matrix, n, pi, result.residual)) {
      throw Error("stationary solve did not converge at alpha=" + std::to_string(chain.alpha) +
                  ", residual=" + std::to_string(result.residual));
    }
  }
  result.masses = std::move(pi);
  return result;
}

std::vector<std::size_t> rank_profiles(std::span<const double> masses) {
  std::vector<std::size_t> order(masses.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return masses[a] > masses[b]; });
  return order;
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi >= lo) || points < 1) throw Error("invalid geometric grid");
  std::vector<double> grid(static_cast<std::size_t>(points));
  if (points == 1) {
    grid[0] = hi;
    return grid;
  }
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / (points - 1);
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = std::exp(log_lo + step * i);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

SweepResult sweep_alpha(const EmpiricalGame& game, std::span<const double> alpha_grid, int population_size) {
  if (alpha_grid.empty()) throw Error("empty alpha grid");
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] > 0.0)) throw Error("alpha grid values must be positive");
    if (i > 0 && alpha_grid[i] < alpha_grid[i - 1]) throw Error("alpha grid must be ascending");
  }
  SweepResult result;
  for (double alpha : alpha_grid) {
    try {
      result.distributions.push_back(stationary_distribution(build_transition_chain(game, alpha, population_size)));
    } catch (const Error& e) {
      throw Error("alpha sweep failed at alpha=" + std::to_string(alpha) + ": " + e.what());
    }
    result.alphas.push_back(alpha);
  }

  const std::size_t m = result.distributions.size();
  if (m >= 3) {
    const std::size_t top = rank_profiles(result.distributions[m - 1].masses).front();
    bool stable = true;
    for (std::size_t i = m - 3; i < m - 1; ++i) {
      if (rank_profiles(result.distributions[i].masses).front() != top) stable = false;
    }
    double max_change = 0.0;
    const auto& a = result.distributions[m - 2].masses;
    const auto& b = result.distributions[m - 1].masses;
    for (std::size_t k = 0; k < a.size(); ++k) max_change = std::max(max_change, std::fabs(a[k] - b[k]));
    result.converged = stable && max_change < 1e-3;
  }
  return result;
}

PayoffGaps payoff_gaps(const EmpiricalGame& game) {
  game.validate();
  PayoffGaps gaps;
  gaps.smallest = std::numeric_limits<double>::infinity();
  for_each_deviation(game, [&](std::size_t from, std::size_t to, std::size_t cell_from,
                               std::size_t cell_to, int) {
    const double gap = std::fabs(game.payoffs[to][cell_to] - game.payoffs[from][cell_from]);
    if (gap > 0.0) {
      gaps.smallest = std::min(gaps.smallest, gap);
      gaps.largest = std::max(gaps.largest, gap);
    }
  });
  if (gaps.largest == 0.0) gaps.smallest = 0.0;
  return gaps;
}

double estimate_alpha_lower_bound(const EmpiricalGame& game, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  const PayoffGaps gaps = payoff_gaps(game);
  if (gaps.largest == 0.0) throw Error("every payoff gap is zero; alpha is undetermined");
  return std::log(1.0 / epsilon) / gaps.smallest;
}

std::vector<double> default_alpha_grid(const EmpiricalGame& game, int points) {
  const PayoffGaps gaps = payoff_gaps(game);
  if (gaps.largest == 0.0) throw Error("every payoff gap is zero; alpha is undetermined");
  const double hi = 10.0 * estimate_alpha_lower_bound(game);
  const double lo = std::min(1e-2 / gaps.largest, hi);
  return geometric_grid(lo, hi, points);
}

std::vector<double> equilibrium_summary(std::span<const double> masses,
                                        std::span<const std::vector<int>> counts) {
  if (masses.size() != counts.size()) throw Error("masses and profiles differ in length");
  if (counts.empty()) return {};
  std::vector<double> summary(counts.front().size(), 0.0);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k].size() != summary.size()) throw Error("profiles differ in width");
    for (std::size_t c = 0; c < summary.size(); ++c) summary[c] += masses[k] * counts[k][c];
  }
  return summary;
}

}  // namespace mevsim
