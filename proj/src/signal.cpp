#include "mevsim/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "mevsim/error.hpp"

namespace mevsim {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

std::size_t tick_count(double horizon_s, double step_ms) {
  return static_cast<std::size_t>(std::floor(horizon_s * 1000.0 / step_ms)) + 1;
}

std::size_t tick_of(double time_s, double step_ms, std::size_t n_ticks) {
  const auto tick = static_cast<std::size_t>(std::floor(time_s * 1000.0 / step_ms));
  return std::min(tick, n_ticks - 1);
}

// Log-normal values parameterised by their mean; shape 0 degenerates to the mean.
class ValueSampler {
 public:
  ValueSampler(double mean, double shape)
      : mean_(mean), shape_(shape), dist_(std::log(mean) - 0.5 * shape * shape, shape > 0.0 ? shape : 1.0) {}
  double operator()(Rng& rng) { return shape_ > 0.0 ? dist_(rng) : mean_; }

 private:
  double mean_;
  double shape_;
  std::lognormal_distribution<double> dist_;
};

}  // namespace

void SignalConfig::validate() const {
  require(lambda_p > 0.0, "lambda_p must be positive");
  require(lambda_e >= 0.0, "lambda_e must be non-negative");
  require(public_value_mean > 0.0, "public_value_mean must be positive");
  require(private_value_mean > 0.0, "private_value_mean must be positive");
  require(lognormal_shape_public >= 0.0 && lognormal_shape_private >= 0.0,
          "log-normal shapes must be non-negative");
  require(step_ms > 0.0, "step_ms must be positive");
  require(horizon_s > 0.0, "horizon_s must be positive");
  require(n_builders >= 1 && n_builders <= kMaxBuilders, "n_builders must be in [1, 64]");
}

std::size_t SignalConfig::n_ticks() const { return tick_count(horizon_s, step_ms); }

double expected_private_events(const CalibrationConstants& c) {
  return c.private_share_max * c.public_tx_per_block / (1.0 - c.private_share_max);
}

SignalConfig calibrate_rates(const CalibrationConstants& c) {
  auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
  require(in_unit(c.public_value_share), "public_value_share must lie in (0, 1)");
  require(in_unit(c.private_share_min), "private_share_min must lie in (0, 1)");
  require(in_unit(c.private_share_max), "private_share_max must lie in (0, 1)");
  require(c.private_share_min <= c.private_share_max,
          "private_share_min must not exceed private_share_max");
  require(c.theta_min >= 0.0 && c.theta_max <= 1.0 && c.theta_min <= c.theta_max,
          "theta range must be a sub-interval of [0, 1]");
  require(c.public_tx_per_block > 0.0, "public_tx_per_block must be positive");
  require(c.public_tx_value_eth > 0.0, "public_tx_value_eth must be positive");
  require(c.slot_seconds > 0.0, "slot_seconds must be positive");

  const double n_private = expected_private_events(c);
  const double public_value = c.public_tx_per_block * c.public_tx_value_eth;
  const double private_value =
      (1.0 - c.public_value_share) / c.public_value_share * public_value;

  SignalConfig config;
  config.lambda_p = c.public_tx_per_block / c.slot_seconds;
  config.lambda_e = n_private / c.slot_seconds;
  config.public_value_mean = c.public_tx_value_eth;
  config.private_value_mean = private_value / n_private;
  config.lognormal_shape_public = c.lognormal_shape_public;
  config.lognormal_shape_private = c.lognormal_shape_private;
  config.step_ms = c.step_ms;
  config.horizon_s = c.horizon_s;
  config.n_builders = c.n_builders;
  config.validate();
  return config;
}

std::string AccessMask::to_bitstring(int n_builders) const {
  std::string s(static_cast<std::size_t>(n_builders), '0');
  for (int i = 0; i < n_builders; ++i) {
    if (test(i)) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

std::span<const double> SignalTrace::private_cumulative(int builder) const {
  const std::size_t n = n_ticks();
  return std::span<const double>(private_per_builder_).subspan(
      static_cast<std::size_t>(builder) * n, n);
}

double SignalTrace::private_at(int builder, std::size_t tick) const {
  return private_per_builder_[static_cast<std::size_t>(builder) * n_ticks() + tick];
}

void SignalTrace::rebuild(double step_ms, double horizon_s, int n_builders) {
  step_ms_ = step_ms;
  horizon_s_ = horizon_s;
  n_builders_ = n_builders;
  const std::size_t n = tick_count(horizon_s, step_ms);
  public_.assign(n, 0.0);
  private_total_.assign(n, 0.0);
  private_per_builder_.assign(n * static_cast<std::size_t>(n_builders), 0.0);

  for (const OrderflowEvent& e : events_) {
    const std::size_t tick = tick_of(e.time_s, step_ms, n);
    if (e.kind == EventKind::public_tx) {
      public_[tick] += e.value_eth;
      continue;
    }
    private_total_[tick] += e.value_eth;
    for (int i = 0; i < n_builders; ++i) {
      if (e.access.test(i)) private_per_builder_[static_cast<std::size_t>(i) * n + tick] += e.value_eth;
    }
  }

  std::partial_sum(public_.begin(), public_.end(), public_.begin());
  std::partial_sum(private_total_.begin(), private_total_.end(), private_total_.begin());
  for (int i = 0; i < n_builders; ++i) {
    auto row = private_per_builder_.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(i) * n);
    std::partial_sum(row, row + static_cast<std::ptrdiff_t>(n), row);
  }
}

SignalTrace SignalTrace::from_events(double step_ms, double horizon_s, int n_builders,
                                     std::vector<OrderflowEvent> events) {
  require(step_ms > 0.0 && horizon_s > 0.0, "trace step and horizon must be positive");
  require(n_builders >= 1 && n_builders <= kMaxBuilders, "n_builders must be in [1, 64]");
  for (const OrderflowEvent& e : events) {
    if (e.time_s < 0.0 || e.time_s > horizon_s) throw Error("event outside trace horizon");
    if (!(e.value_eth > 0.0)) throw Error("event value must be positive");
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const OrderflowEvent& a, const OrderflowEvent& b) { return a.time_s < b.time_s; });
  SignalTrace trace;
  trace.events_ = std::move(events);
  trace.rebuild(step_ms, horizon_s, n_builders);
  return trace;
}

void generate_signal_trace(const SignalConfig& config, std::span<const double> thetas,
                           Rng& rng, SignalTrace& out) {
  if (static_cast<int>(thetas.size()) != config.n_builders) {
    throw Error("theta vector has " + std::to_string(thetas.size()) + " entries, expected " +
                std::to_string(config.n_builders));
  }
  for (double theta : thetas) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw Error("theta outside [0, 1]");
  }

  out.events_.clear();
  const double horizon = config.horizon_s;

  std::exponential_distribution<double> public_gap(config.lambda_p);
  ValueSampler public_value(config.public_value_mean, config.lognormal_shape_public);
  AccessMask everyone;
  for (int i = 0; i < config.n_builders; ++i) everyone.set(i);
  for (double t = public_gap(rng); t <= horizon; t += public_gap(rng)) {
    out.events_.push_back({t, public_value(rng), EventKind::public_tx, everyone});
  }

  if (config.lambda_e > 0.0) {
    std::exponential_distribution<double> private_gap(config.lambda_e);
    ValueSampler private_value(config.private_value_mean, config.lognormal_shape_private);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (double t = private_gap(rng); t <= horizon; t += private_gap(rng)) {
      OrderflowEvent e{t, private_value(rng), EventKind::private_flow, {}};
      for (int i = 0; i < config.n_builders; ++i) {
        if (unit(rng) < thetas[static_cast<std::size_t>(i)]) e.access.set(i);
      }
      out.events_.push_back(e);
    }
  }

  // Public and private streams are each time-ordered; merge them.
  const auto split = std::find_if(out.events_.begin(), out.events_.end(), [](const OrderflowEvent& e) {
    return e.kind == EventKind::private_flow;
  });
  std::inplace_merge(out.events_.begin(), split, out.events_.end(),
                     [](const OrderflowEvent& a, const OrderflowEvent& b) { return a.time_s < b.time_s; });

  out.rebuild(config.step_ms, horizon, config.n_builders);
}

SignalTrace generate_signal_trace(const SignalConfig& config, std::span<const double> thetas,
                                  Rng& rng) {
  SignalTrace trace;
  generate_signal_trace(config, thetas, rng, trace);
  return trace;
}

void write_trace_csv(std::ostream& os, const SignalTrace& trace) {
  os << "time_s,kind,value_eth,access_mask\n";
  char buf[64];
  for (const OrderflowEvent& e : trace.events()) {
    std::snprintf(buf, sizeof buf, "%.17g", e.time_s);
    os << buf << ',' << (e.kind == EventKind::public_tx ? "public" : "private") << ',';
    std::snprintf(buf, sizeof buf, "%.17g", e.value_eth);
    os << buf << ',' << e.access.to_bitstring(trace.n_builders()) << '\n';
  }
}

}  // namespace mevsim
