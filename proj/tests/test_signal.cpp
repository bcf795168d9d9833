#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "mevsim/error.hpp"
#include "mevsim/signal.hpp"

using namespace mevsim;

namespace {

// Bisection on n / (n + m) = share, independent of the closed form.
double solve_share_by_bisection(double share, double m) {
  double lo = 0.0;
  double hi = 1e6;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid / (mid + m) < share) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

SignalConfig standard_config() { return calibrate_rates(CalibrationConstants{}); }

}  // namespace

TEST_CASE("calibration matches independently derived values") {
  const CalibrationConstants c;
  const SignalConfig s = calibrate_rates(c);
  const double n_e = solve_share_by_bisection(0.3638, 105.0);
  CHECK(expected_private_events(c) == doctest::Approx(n_e).epsilon(1e-9));
  CHECK(n_e == doctest::Approx(60.05).epsilon(1e-3));
  CHECK(s.lambda_p == doctest::Approx(105.0 / 12.0));
  CHECK(s.lambda_p == doctest::Approx(8.75));
  CHECK(s.lambda_e == doctest::Approx(n_e / 12.0).epsilon(1e-9));
  CHECK(s.lambda_e == doctest::Approx(5.0).epsilon(1e-2));
  // Private value at full access is (0.69 / 0.31) times the public value.
  const double private_total = (1.0 - 0.31) / 0.31 * 105.0 * 0.00019;
  CHECK(s.private_value_mean == doctest::Approx(private_total / n_e).epsilon(1e-9));
  CHECK(s.private_value_mean == doctest::Approx(0.00074).epsilon(1e-2));
  CHECK(s.public_value_mean == 0.00019);
  CHECK(s.n_ticks() == 1401);
}

TEST_CASE("calibration rejects invalid constants") {
  CalibrationConstants c;
  c.public_value_share = 1.0;
  CHECK_THROWS_AS(calibrate_rates(c), ConfigError);
  c = {};
  c.private_share_max = 0.0;
  CHECK_THROWS_AS(calibrate_rates(c), ConfigError);
  c = {};
  c.public_tx_per_block = 0.0;
  CHECK_THROWS_AS(calibrate_rates(c), ConfigError);
  c = {};
  c.slot_seconds = -1.0;
  CHECK_THROWS_AS(calibrate_rates(c), ConfigError);
}

TEST_CASE("config validation covers the deadline horizon") {
  SignalConfig s = standard_config();
  CHECK_NOTHROW(s.validate());
  s.lambda_p = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = standard_config();
  s.step_ms = 0.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("zero and full access") {
  const SignalConfig s = standard_config();
  Rng rng(5);
  const std::vector<double> none(10, 0.0);
  const SignalTrace t0 = generate_signal_trace(s, none, rng);
  for (int i = 0; i < 10; ++i) {
    for (double e : t0.private_cumulative(i)) CHECK(e == 0.0);
  }
  CHECK(t0.private_total_at(t0.n_ticks() - 1) > 0.0);

  const std::vector<double> all(10, 1.0);
  const SignalTrace t1 = generate_signal_trace(s, all, rng);
  for (int i = 0; i < 10; ++i) {
    const auto e = t1.private_cumulative(i);
    const auto total = t1.private_cumulative_total();
    for (std::size_t k = 0; k < e.size(); ++k) CHECK(e[k] == total[k]);
  }
}

TEST_CASE("theta vector is validated") {
  const SignalConfig s = standard_config();
  Rng rng(1);
  CHECK_THROWS_AS(generate_signal_trace(s, std::vector<double>(9, 0.5), rng), Error);
  std::vector<double> bad(10, 0.5);
  bad[3] = 1.5;
  CHECK_THROWS_AS(generate_signal_trace(s, bad, rng), Error);
}

TEST_CASE("traces are a pure function of config, thetas and seed") {
  const SignalConfig s = standard_config();
  const std::vector<double> thetas{0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 0.35, 0.65};
  Rng a(99), b(99);
  const SignalTrace ta = generate_signal_trace(s, thetas, a);
  const SignalTrace tb = generate_signal_trace(s, thetas, b);
  REQUIRE(ta.events().size() == tb.events().size());
  for (std::size_t k = 0; k < ta.events().size(); ++k) {
    CHECK(ta.events()[k].time_s == tb.events()[k].time_s);
    CHECK(ta.events()[k].value_eth == tb.events()[k].value_eth);
    CHECK(ta.events()[k].access.bits() == tb.events()[k].access.bits());
  }
  for (int i = 0; i < 10; ++i) {
    const auto ea = ta.private_cumulative(i);
    const auto eb = tb.private_cumulative(i);
    CHECK(std::equal(ea.begin(), ea.end(), eb.begin()));
  }
}

TEST_CASE("cumulative series are monotone and bounded by the total") {
  const SignalConfig s = standard_config();
  Rng rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> thetas(10);
    for (double& t : thetas) t = u(rng);
    const SignalTrace t = generate_signal_trace(s, thetas, rng);
    const auto pub = t.public_cumulative();
    const auto tot = t.private_cumulative_total();
    for (std::size_t k = 1; k < t.n_ticks(); ++k) {
      REQUIRE(pub[k] >= pub[k - 1]);
      REQUIRE(tot[k] >= tot[k - 1]);
    }
    for (int i = 0; i < 10; ++i) {
      const auto e = t.private_cumulative(i);
      for (std::size_t k = 0; k < t.n_ticks(); ++k) {
        REQUIRE(e[k] >= 0.0);
        REQUIRE(e[k] <= tot[k] * (1.0 + 1e-12));
        if (k > 0) REQUIRE(e[k] >= e[k - 1]);
      }
    }
    for (std::size_t k = 0; k < t.n_ticks(); ++k) CHECK(t.total_at(k) == pub[k] + tot[k]);
  }
}

TEST_CASE("cumulative series agree with the event list") {
  const SignalConfig s = standard_config();
  Rng rng(17);
  const std::vector<double> thetas(10, 0.5);
  const SignalTrace t = generate_signal_trace(s, thetas, rng);
  for (std::size_t tick : {std::size_t{0}, std::size_t{1}, std::size_t{700}, std::size_t{1299}, t.n_ticks() - 1}) {
    const double end_s = static_cast<double>(tick + 1) * s.step_ms / 1000.0;
    double pub = 0.0, priv = 0.0, b3 = 0.0;
    for (const OrderflowEvent& e : t.events()) {
      if (std::floor(e.time_s * 1000.0 / s.step_ms) >= static_cast<double>(tick + 1)) continue;
      CHECK(e.time_s < end_s + 1e-12);
      if (e.kind == EventKind::public_tx) {
        pub += e.value_eth;
      } else {
        priv += e.value_eth;
        if (e.access.test(3)) b3 += e.value_eth;
      }
    }
    CHECK(t.public_at(tick) == doctest::Approx(pub).epsilon(1e-12));
    CHECK(t.private_total_at(tick) == doctest::Approx(priv).epsilon(1e-12));
    CHECK(t.private_at(3, tick) == doctest::Approx(b3).epsilon(1e-12));
  }
}

TEST_CASE("hand-built event list bins by flooring") {
  std::vector<OrderflowEvent> events{
      {0.005, 1.0, EventKind::public_tx, AccessMask(0b11)},
      {0.010, 2.0, EventKind::private_flow, AccessMask(0b01)},
      {0.019, 4.0, EventKind::private_flow, AccessMask(0b10)},
      {0.020, 8.0, EventKind::public_tx, AccessMask(0b11)},
  };
  const SignalTrace t = SignalTrace::from_events(10.0, 0.05, 2, events);
  CHECK(t.n_ticks() == 6);
  CHECK(t.public_at(0) == 1.0);
  CHECK(t.public_at(1) == 1.0);
  CHECK(t.public_at(2) == 9.0);
  CHECK(t.private_total_at(0) == 0.0);
  CHECK(t.private_total_at(1) == 6.0);
  CHECK(t.private_at(0, 1) == 2.0);
  CHECK(t.private_at(1, 1) == 4.0);
  CHECK(t.aggregated_at(1, 5) == 13.0);
  CHECK(t.total_at(5) == 15.0);
}

TEST_CASE("public arrivals average 105 per slot") {
  const SignalConfig s = standard_config();
  Rng rng(1);
  const std::vector<double> thetas(10, 0.65);
  SignalTrace t;
  double count = 0.0;
  const int traces = 10000;
  for (int r = 0; r < traces; ++r) {
    generate_signal_trace(s, thetas, rng, t);
    for (const OrderflowEvent& e : t.events()) {
      if (e.kind == EventKind::public_tx && e.time_s < 12.0) count += 1.0;
    }
  }
  CHECK(count / traces == doctest::Approx(105.0).epsilon(0.02));
}

TEST_CASE("thinning, value means and mask independence") {
  const SignalConfig s = standard_config();
  Rng rng(8);
  const std::vector<double> thetas{0.3, 0.45, 0.6, 0.75, 0.9, 1.0, 0.0, 0.5, 0.5, 0.5};
  std::vector<double> seen(10, 0.0);
  double n_private = 0.0, n_public = 0.0, sum_private = 0.0, sum_public = 0.0;
  double both = 0.0;
  SignalTrace t;
  while (n_private < 1e5) {
    generate_signal_trace(s, thetas, rng, t);
    for (const OrderflowEvent& e : t.events()) {
      if (e.kind == EventKind::public_tx) {
        n_public += 1.0;
        sum_public += e.value_eth;
        continue;
      }
      n_private += 1.0;
      sum_private += e.value_eth;
      for (int i = 0; i < 10; ++i) seen[static_cast<std::size_t>(i)] += e.access.test(i) ? 1.0 : 0.0;
      if (e.access.test(7) && e.access.test(8)) both += 1.0;
    }
  }
  for (int i = 0; i < 10; ++i) {
    CHECK(seen[static_cast<std::size_t>(i)] / n_private == doctest::Approx(thetas[static_cast<std::size_t>(i)]).epsilon(0.02));
  }
  CHECK(sum_public / n_public == doctest::Approx(0.00019).epsilon(0.02));
  CHECK(sum_private / n_private == doctest::Approx(s.private_value_mean).epsilon(0.02));

  // Pearson correlation of two Bernoulli(0.5) masks.
  const double p7 = seen[7] / n_private, p8 = seen[8] / n_private, p78 = both / n_private;
  const double corr = (p78 - p7 * p8) / std::sqrt(p7 * (1 - p7) * p8 * (1 - p8));
  CHECK(std::abs(corr) < 0.02);
}

TEST_CASE("zero shape gives constant values") {
  SignalConfig s = standard_config();
  s.lognormal_shape_public = 0.0;
  s.lognormal_shape_private = 0.0;
  Rng rng(4);
  const SignalTrace t = generate_signal_trace(s, std::vector<double>(10, 1.0), rng);
  for (const OrderflowEvent& e : t.events()) {
    const double expected = e.kind == EventKind::public_tx ? s.public_value_mean : s.private_value_mean;
    CHECK(e.value_eth == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("trace dump lists every event with its access bitstring") {
  std::vector<OrderflowEvent> events{
      {0.5, 0.25, EventKind::private_flow, AccessMask(0b101)},
      {0.25, 0.5, EventKind::public_tx, AccessMask(0b111)},
  };
  const SignalTrace t = SignalTrace::from_events(10.0, 1.0, 3, events);
  std::ostringstream os;
  write_trace_csv(os, t);
  const std::string csv = os.str();
  CHECK(csv.rfind("time_s,kind,value_eth,access_mask\n", 0) == 0);
  CHECK(csv.find(",101") != std::string::npos);
  CHECK(csv.find(",111") != std::string::npos);
  CHECK(AccessMask(0b001).to_bitstring(3) == "100");
}
