#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mevsim {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hashes a master seed together with a path of indices, e.g.
// (master, profile, round, stream). Each distinct path gets an independent
// stream, so any cell can be replayed without running the others.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master);
  for (std::uint64_t p : path) h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

// Small counter-based generator for short per-slot streams, where seeding a
// Mersenne Twister would cost more than the draws themselves.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Stream tags used with derive_seed.
namespace stream {
inline constexpr std::uint64_t kTrace = 0x7472616365ULL;
inline constexpr std::uint64_t kAuction = 0x61756374ULL;
inline constexpr std::uint64_t kSlot = 0x736c6f74ULL;
}  // namespace stream

}  // namespace mevsim
