#pragma once

// Stochastic public and private MEV signal streams for one auction.
//
// Public transactions arrive as a Poisson process with log-normal values.
// Private orderflow arrives as one global Poisson process; every event is
// visible to builder i independently with probability theta_i, so builder i
// sees a thinned stream of rate lambda_e * theta_i while the total private
// signal E(t) sums the whole stream.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mevsim/random.hpp"

namespace mevsim {

inline constexpr int kMaxBuilders = 64;

// Block-level constants the arrival rates and value means are fitted to.
struct CalibrationConstants {
  double public_tx_per_block = 105.0;
  double public_tx_value_eth = 0.00019;
  double public_value_share = 0.31;
  double private_share_min = 0.1092;  // fraction of txs at theta_min
  double private_share_max = 0.3638;  // fraction of txs at theta_max
  double theta_min = 0.3;
  double theta_max = 1.0;
  double slot_seconds = 12.0;
  // Shape (sigma of the underlying normal) of the value distributions.
  double lognormal_shape_public = 1.0;
  double lognormal_shape_private = 1.0;
  double step_ms = 10.0;
  double horizon_s = 14.0;
  int n_builders = 10;
};

struct SignalConfig {
  double lambda_p = 0.0;  // public tx per second
  double lambda_e = 0.0;  // private orderflow events per second (all builders)
  double public_value_mean = 0.0;   // ETH
  double private_value_mean = 0.0;  // ETH
  double lognormal_shape_public = 1.0;
  double lognormal_shape_private = 1.0;
  double step_ms = 10.0;
  double horizon_s = 14.0;
  int n_builders = 10;

  // Throws ConfigError on an invalid field.
  void validate() const;
  std::size_t n_ticks() const;
};

// Expected number of private events in one slot at full access: the n that
// solves n / (n + public_tx_per_block) = private_share_max.
double expected_private_events(const CalibrationConstants& c);

SignalConfig calibrate_rates(const CalibrationConstants& c);

// Bit set over builder indices (bit i = builder i sees the event).
class AccessMask {
 public:
  AccessMask() = default;
  explicit AccessMask(std::uint64_t bits) : bits_(bits) {}
  bool test(int builder) const { return (bits_ >> builder) & 1U; }
  void set(int builder) { bits_ |= std::uint64_t{1} << builder; }
  std::uint64_t bits() const { return bits_; }
  // Builder 0 first.
  std::string to_bitstring(int n_builders) const;

 private:
  std::uint64_t bits_ = 0;
};

enum class EventKind : std::uint8_t { public_tx, private_flow };

struct OrderflowEvent {
  double time_s = 0.0;
  double value_eth = 0.0;
  EventKind kind = EventKind::public_tx;
  AccessMask access;  // all builders for public events
};

// Per-tick cumulative signals. Tick s covers arrivals in [s*step, (s+1)*step),
// and every series holds the cumulative value at the end of that bin.
class SignalTrace {
 public:
  SignalTrace() = default;

  double step_ms() const { return step_ms_; }
  std::size_t n_ticks() const { return public_.size(); }
  int n_builders() const { return n_builders_; }
  double horizon_s() const { return horizon_s_; }

  std::span<const double> public_cumulative() const { return public_; }
  std::span<const double> private_cumulative_total() const { return private_total_; }
  std::span<const double> private_cumulative(int builder) const;
  const std::vector<OrderflowEvent>& events() const { return events_; }

  double public_at(std::size_t tick) const { return public_[tick]; }
  double private_at(int builder, std::size_t tick) const;
  double private_total_at(std::size_t tick) const { return private_total_[tick]; }
  double total_at(std::size_t tick) const { return public_[tick] + private_total_[tick]; }
  double aggregated_at(int builder, std::size_t tick) const {
    return public_[tick] + private_at(builder, tick);
  }

  // Rebuilds every series from an event list. Events must lie within the
  // horizon; order does not matter.
  static SignalTrace from_events(double step_ms, double horizon_s, int n_builders,
                                 std::vector<OrderflowEvent> events);

 private:
  friend void generate_signal_trace(const SignalConfig&, std::span<const double>,
                                    Rng&, SignalTrace&);
  void rebuild(double step_ms, double horizon_s, int n_builders);

  double step_ms_ = 10.0;
  double horizon_s_ = 0.0;
  int n_builders_ = 0;
  std::vector<double> public_;
  std::vector<double> private_total_;
  std::vector<double> private_per_builder_;  // builder-major, n_ticks each
  std::vector<OrderflowEvent> events_;
};

// Fills `out`, reusing its buffers. Throws Error if thetas.size() differs from
// config.n_builders or any theta is outside [0, 1].
void generate_signal_trace(const SignalConfig& config, std::span<const double> thetas,
                           Rng& rng, SignalTrace& out);
SignalTrace generate_signal_trace(const SignalConfig& config,
                                  std::span<const double> thetas, Rng& rng);

// One row per event: time_s,kind,value_eth,access_mask
void write_trace_csv(std::ostream& os, const SignalTrace& trace);

}  // namespace mevsim
