#pragma once

// Independent reference constructions used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mevsim/alpharank.hpp"

namespace oracle {

// Closed form evaluated directly with std::exp; fine for moderate alpha * gap.
inline double rho(double u_sigma, double u_tau, double alpha, int n) {
  const double d = u_tau - u_sigma;
  if (d == 0.0) return 1.0 / n;
  return (1.0 - std::exp(-alpha * d)) / (1.0 - std::exp(-n * alpha * d));
}

// Builds the chain by comparing every ordered pair of states: b is reachable
// from a if, inside one role, exactly one player moved from j to j'.
inline std::vector<double> brute_force_chain(const mevsim::EmpiricalGame& g, double alpha, int population) {
  const std::size_t n = g.size();
  const int s = g.n_strategies;
  const double players = g.n_roles * g.role_size;
  std::vector<double> p(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      int changed_role = -1, from = -1, to = -1, moved = 0;
      bool valid = true;
      for (int r = 0; r < g.n_roles && valid; ++r) {
        for (int j = 0; j < s; ++j) {
          const int diff = g.counts[b][static_cast<std::size_t>(r * s + j)] - g.counts[a][static_cast<std::size_t>(r * s + j)];
          if (diff == 0) continue;
          if (changed_role != -1 && changed_role != r) valid = false;
          changed_role = r;
          if (diff == -1 && from == -1) {
            from = j;
          } else if (diff == 1 && to == -1) {
            to = j;
          } else {
            valid = false;
          }
          ++moved;
        }
      }
      if (!valid || moved != 2 || from == -1 || to == -1) continue;
      const auto cf = static_cast<std::size_t>(changed_role * s + from);
      const auto ct = static_cast<std::size_t>(changed_role * s + to);
      const double c = g.counts[a][cf];
      p[a * n + b] = c / players / (s - 1) * rho(g.payoffs[a][cf], g.payoffs[b][ct], alpha, population);
    }
    double off = 0.0;
    for (std::size_t b = 0; b < n; ++b) off += b == a ? 0.0 : p[a * n + b];
    p[a * n + a] = 1.0 - off;
  }
  return p;
}

// Solves pi (P - I) = 0 with sum(pi) = 1 as an overdetermined system by
// column-pivoted QR.
inline std::vector<double> eigen_stationary(const std::vector<double>& p, std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd a(dim + 1, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = p[i * n + j] - (i == j ? 1.0 : 0.0);
    }
  }
  a.row(dim).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(dim + 1);
  b(dim) = 1.0;
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  return std::vector<double>(x.data(), x.data() + dim);
}

// Single-role game with role_size players over `strategies` strategies and
// uniform random payoffs (zero where the count is zero).
inline mevsim::EmpiricalGame random_game(int players, int strategies, std::mt19937_64& rng) {
  mevsim::EmpiricalGame g;
  g.n_roles = 1;
  g.n_strategies = strategies;
  g.role_size = players;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> c(static_cast<std::size_t>(strategies), 0);
  // Enumerate compositions recursively by nested counting.
  std::vector<std::vector<int>> all;
  auto rec = [&](auto&& self, int idx, int left) -> void {
    if (idx == strategies - 1) {
      c[static_cast<std::size_t>(idx)] = left;
      all.push_back(c);
      return;
    }
    for (int x = left; x >= 0; --x) {
      c[static_cast<std::size_t>(idx)] = x;
      self(self, idx + 1, left - x);
    }
  };
  rec(rec, 0, players);
  for (const auto& counts : all) {
    std::vector<double> pay(counts.size(), 0.0);
    for (std::size_t j = 0; j < counts.size(); ++j) pay[j] = counts[j] > 0 ? u(rng) : 0.0;
    g.counts.push_back(counts);
    g.payoffs.push_back(pay);
  }
  return g;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? m : INFINITY;
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
