#include "mevsim/profiles.hpp"

#include <numeric>

#include "mevsim/error.hpp"

namespace mevsim {
namespace {

void enumerate_into(int remaining, int strategy, std::vector<int>& current,
                    std::vector<Profile>& out) {
  const int last = static_cast<int>(current.size()) - 1;
  if (strategy == last) {
    current[static_cast<std::size_t>(strategy)] = remaining;
    out.push_back(Profile{current});
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    current[static_cast<std::size_t>(strategy)] = c;
    enumerate_into(remaining - c, strategy + 1, current, out);
  }
}

}  // namespace

int Profile::players() const { return std::accumulate(counts.begin(), counts.end(), 0); }

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::vector<Profile> enumerate_profiles(int n_players, int n_strategies) {
  if (n_players < 1 || n_strategies < 1) throw Error("need at least one player and one strategy");
  std::vector<Profile> out;
  out.reserve(binomial(n_players + n_strategies - 1, n_players));
  std::vector<int> current(static_cast<std::size_t>(n_strategies), 0);
  enumerate_into(n_players, 0, current, out);
  return out;
}

std::vector<RoleProfile> enumerate_role_profiles(int n_per_role, int n_strategies) {
  const std::vector<Profile> side = enumerate_profiles(n_per_role, n_strategies);
  std::vector<RoleProfile> out;
  out.reserve(side.size() * side.size());
  for (const Profile& low : side) {
    for (const Profile& high : side) out.push_back({low, high});
  }
  return out;
}

std::string to_string(const Profile& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.counts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p.counts[i]);
  }
  return s + ")";
}

std::string to_string(const RoleProfile& p) {
  std::string low = to_string(p.low);
  std::string high = to_string(p.high);
  return low.substr(0, low.size() - 1) + "|" + high.substr(1);
}

}  // namespace mevsim
