#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "effcap/effective_capacity.hpp"
#include "effcap/queue_sim.hpp"
#include "support/oracles.hpp"

using namespace effcap;

namespace {
const FadingModel kRay = FadingModel::rayleigh();
constexpr double kT = 2e-3;
constexpr double kB = 1e5;

double single_user_rate(std::span<const double> z) {
  return kB * std::log2(1.0 + z[0]);
}

QueueTrace synthetic_exponential_trace(double theta, std::size_t n) {
  // Queue values whose empirical tail is exactly e^{-theta q}.
  QueueTrace t;
  t.frames = n;
  t.frame_duration_s = kT;
  t.warmup_frames = 0;
  t.queue_bits.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    t.queue_bits[k] = -std::log((static_cast<double>(k) + 0.5) / static_cast<double>(n)) / theta;
  return t;
}
}  // namespace

TEST_CASE("deterministic drain empties the queue from the first frame") {
  auto constant = [](std::span<const double>) { return 1000.0; };
  const QueueTrace t = simulate(constant, {kRay}, 900.0, kT, 100'000, 1);
  for (double q : t.queue_bits) CHECK(q == 0.0);
  CHECK_FALSE(t.unstable_warning);

  const QueueTrace zero = simulate(single_user_rate, {kRay}, 0.0, kT, 100'000, 1);
  for (double q : zero.queue_bits) CHECK(q == 0.0);
}

TEST_CASE("lindley recursion recomputes bit for bit from kept services") {
  SimulateOptions opt;
  opt.keep_services = true;
  const double arrival = 0.6 * kB;
  const QueueTrace t = simulate(single_user_rate, {kRay}, arrival, kT, 100'000, 99, opt);
  REQUIRE(t.service_bits.size() == t.queue_bits.size());
  double q = 0.0;
  for (std::size_t i = 0; i < t.frames; ++i) {
    q = std::max(q + arrival * kT - t.service_bits[i], 0.0);
    CHECK(q == t.queue_bits[i]);  // exact, not approximate
  }
  // reproducibility
  const QueueTrace t2 = simulate(single_user_rate, {kRay}, arrival, kT, 100'000, 99, opt);
  CHECK(t.queue_bits == t2.queue_bits);
  CHECK_THROWS_AS(simulate(single_user_rate, {kRay}, arrival, kT, 10, 99),
                  std::invalid_argument);
}

TEST_CASE("an oversubscribed queue is flagged but still returned") {
  const double mean_rate =
      kB * expect_1d([](double z) { return std::log2(1.0 + z); }, kRay).value;
  const QueueTrace t = simulate(single_user_rate, {kRay}, 1.05 * mean_rate, kT, 100'000, 5);
  CHECK(t.unstable_warning);
  CHECK(t.queue_bits.size() == 100'000);
  CHECK(t.queue_bits.back() > 0.0);
}

TEST_CASE("decay regression recovers an exact exponential tail") {
  const QueueTrace t = synthetic_exponential_trace(0.01, 1'000'000);
  const DecayEstimate est = estimate_decay(t);
  CHECK(std::abs(est.theta_hat - 0.01) < 1e-4);
  CHECK(est.levels_used >= 20);
  CHECK(est.exceedances_at_q_lo >= 1000);
  CHECK(est.ci_low <= est.theta_hat);
  CHECK(est.ci_high >= est.theta_hat);
}

TEST_CASE("insufficient tail mass raises with a frame-count suggestion") {
  QueueTrace t = synthetic_exponential_trace(0.01, 1'000'000);
  t.frames = 10'000;
  t.queue_bits.resize(10'000);  // only 500 points above the 95th percentile
  try {
    estimate_decay(t);
    FAIL("expected InsufficientTailData");
  } catch (const InsufficientTailData& e) {
    CHECK(e.required_frames() > 10'000);
    CHECK(std::string(e.what()).find("frames") != std::string::npos);
  }
}

TEST_CASE("decay estimate brackets theta at arrival = C(theta)") {
  const QosSpec qos{0.01, kT, kB};
  const double c = single_user_capacity(1.0, kRay, qos).c_bits_per_sec;
  const QueueTrace t = simulate(single_user_rate, {kRay}, c, kT, 2'000'000, 42);
  const DecayEstimate est = estimate_decay(t);
  // asymptotic approximation: generous band at this frame count
  CHECK(est.theta_hat > 0.7 * 0.01);
  CHECK(est.theta_hat < 1.4 * 0.01);
}

TEST_CASE("decay exponent moves against the arrival rate") {
  const QosSpec qos{0.01, kT, kB};
  const double c = single_user_capacity(1.0, kRay, qos).c_bits_per_sec;
  const QueueTrace low = simulate(single_user_rate, {kRay}, 0.8 * c, kT, 1'000'000, 7);
  const QueueTrace high = simulate(single_user_rate, {kRay}, 1.2 * c, kT, 1'000'000, 7);
  const double th_low = estimate_decay(low).theta_hat;
  const double th_high = estimate_decay(high).theta_hat;
  CHECK(th_low > 0.01);   // slack arrival decays faster
  CHECK(th_high < 0.01);  // overloaded-relative-to-C decays slower
  CHECK(th_low > th_high);
}
