#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace mevsim {

// How many players use each strategy (an anonymous-game profile).
struct Profile {
  std::vector<int> counts;

  int players() const;
  auto operator<=>(const Profile&) const = default;
};

enum class RoleKind : std::uint8_t { latency, orderflow };

struct RoleProfile {
  Profile low;
  Profile high;
  auto operator<=>(const RoleProfile&) const = default;
};

// All multisets of n_players over n_strategies, ordered so that counts are
// lexicographically descending: (n,0,..,0) first, (0,..,0,n) last.
// Size is C(n_players + n_strategies - 1, n_players).
std::vector<Profile> enumerate_profiles(int n_players, int n_strategies);

// Cartesian product low x high of the per-role enumeration, low-major.
std::vector<RoleProfile> enumerate_role_profiles(int n_per_role, int n_strategies);

// C(n, k) for small arguments.
std::uint64_t binomial(int n, int k);

std::string to_string(const Profile& p);  // e.g. "(0,0,10)"
std::string to_string(const RoleProfile& p);  // e.g. "(0,0,5|0,1,4)"

}  // namespace mevsim
