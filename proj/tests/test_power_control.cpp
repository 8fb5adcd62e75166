#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "effcap/power_control.hpp"
#include "effcap/region.hpp"
#include "support/oracles.hpp"

using namespace effcap;

namespace {
const FadingModel kRay = FadingModel::rayleigh();

PowerPolicy single_user_policy(double alpha, double beta) {
  PowerPolicy p;
  p.order = DecodingOrder::identity(1);
  p.alpha = {alpha};
  p.beta = {beta};
  return p;
}

SystemParams two_user_defaults() {
  SystemParams p;
  p.snr = {1.0, 1.0};
  p.theta = {0.01, 0.01};
  return p;
}
}  // namespace

TEST_CASE("closed-form mu for the last-decoded user") {
  CHECK(policy_mu({4.0}, single_user_policy(1.0, 1.0))[0] ==
        doctest::Approx(0.25).epsilon(1e-14));
  // below threshold: clamp to zero
  CHECK(policy_mu({0.5}, single_user_policy(1.0, 1.0))[0] == 0.0);
  CHECK(policy_mu({0.0}, single_user_policy(1.0, 1.0))[0] == 0.0);
  // beta -> 0 degenerates to waterfilling (1/alpha - 1/z)+
  for (double z : {0.5, 1.0, 2.0, 7.0}) {
    const double mu = policy_mu({z}, single_user_policy(1.0, 1e-6))[0];
    const double wf = std::max(1.0 - 1.0 / z, 0.0);
    CHECK(std::abs(mu - wf) < 1e-4);
  }
}

TEST_CASE("two-user closed form agrees with the sequential policy everywhere") {
  const std::array<double, 2> alpha = {0.8, 1.3};
  const std::array<double, 2> beta = {1.7, 0.9};
  PowerPolicy policy;
  policy.order = DecodingOrder{{1, 0}};  // user 2 first, user 1 last
  policy.alpha = {alpha[0], alpha[1]};
  policy.beta = {beta[0], beta[1]};
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double z1 = 6.0 * i / 40.0, z2 = 6.0 * j / 40.0;
      const auto [mu1, mu2] = two_user_policy(z1, z2, alpha, beta);
      const auto mu = policy_mu({z1, z2}, policy);
      CHECK(std::abs(mu1 - mu[0]) < 1e-12);
      CHECK(std::abs(mu2 - mu[1]) < 1e-12);
      // threshold structure: mu > 0 iff normalized gain above alpha
      CHECK((mu[0] > 0.0) == (z1 > alpha[0]));
      const double intf = 1.0 + mu[0] * z1;
      CHECK((mu[1] > 0.0) == (z2 / intf > alpha[1]));
    }
  }
}

TEST_CASE("spec branch examples of the two-user policy") {
  // z1 <= alpha1 and z2 > alpha2: interference-free waterfilling-like branch
  const auto a = two_user_policy(0.5, 4.0, {1.0, 1.0}, {1.0, 1.0});
  CHECK(a.first == 0.0);
  CHECK(a.second == doctest::Approx(0.25).epsilon(1e-14));
  // z1 > alpha1 and z2/alpha2 <= (z1/alpha1)^{1/(beta1+1)}: silent branch
  const auto b = two_user_policy(4.0, 1.2, {1.0, 1.0}, {1.0, 1.0});
  CHECK(b.first == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(b.second == 0.0);
  // the worked z1 = 4, z2 = 9 point: mu2 = sqrt(2)/3 - 2/9
  const auto c = two_user_policy(4.0, 9.0, {1.0, 1.0}, {1.0, 1.0});
  CHECK(c.first == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(c.second == doctest::Approx(std::sqrt(2.0) / 3.0 - 2.0 / 9.0).epsilon(1e-13));
}

TEST_CASE("on/off pattern partitions the gain plane into 2^M cells") {
  PowerPolicy policy;
  policy.order = DecodingOrder{{1, 0}};
  policy.alpha = {0.9, 1.1};
  policy.beta = {1.0, 2.0};
  std::array<int, 4> seen{};
  for (int i = 0; i <= 60; ++i) {
    for (int j = 0; j <= 60; ++j) {
      const auto mu = policy_mu({5.0 * i / 60.0, 5.0 * j / 60.0}, policy);
      seen[static_cast<std::size_t>((mu[0] > 0.0) * 2 + (mu[1] > 0.0))] = 1;
    }
  }
  CHECK(seen[0] + seen[1] + seen[2] + seen[3] == 4);
}

TEST_CASE("closed form matches pointwise numeric minimization") {
  std::mt19937_64 eng(314159);
  auto draw = [&]() {
    return -std::log1p(-static_cast<double>(eng() >> 11) * 0x1.0p-53);
  };
  const std::array<double, 2> alpha = {0.8, 1.3};
  for (double beta : {0.5, 1.0, 3.0}) {
    PowerPolicy policy;
    policy.order = DecodingOrder{{1, 0}};
    policy.alpha = {alpha[0], alpha[1]};
    policy.beta = {beta, beta};
    for (int trial = 0; trial < 250; ++trial) {
      const double z1 = draw(), z2 = draw();
      const auto mu = policy_mu({z1, z2}, policy);
      const double mu1_star =
          z1 > 0.0 ? oracles::pointwise_power_min(z1, alpha[0], beta) : 0.0;
      CHECK(std::abs(mu[0] - mu1_star) < 1e-6);
      // The user-2 objective is (1 + mu2 * nu2)^{-beta} + beta alpha2 mu2
      // with nu2 = z2/(1 + mu1 z1), so the oracle minimizes in nu2 directly.
      const double nu2 = z2 / (1.0 + mu1_star * z1);
      const double mu2_star =
          nu2 > 0.0 ? oracles::pointwise_power_min(nu2, alpha[1], beta) : 0.0;
      CHECK(std::abs(mu[1] - mu2_star) < 1e-6);
    }
  }
}

TEST_CASE("calibration reproduces the waterfilling cutoff as beta -> 0") {
  SystemParams p;
  p.snr = {1.0};
  // theta chosen so beta = 1e-6 exactly
  p.theta = {1e-6 * oracles::kLn2 / (p.frame_duration_s * p.bandwidth_hz)};
  const PowerPolicy policy = calibrate(DecodingOrder::identity(1), p, {kRay}, 1e-8);
  CHECK(std::abs(policy.alpha[0] - oracles::frozen::kWaterfillAlphaSnr1) < 1e-4);
  CHECK(std::abs(policy.alpha[0] - oracles::waterfill_alpha(1.0)) < 1e-4);
  CHECK(average_power(policy, 0, {kRay}) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("doubling the power budget lowers the threshold") {
  SystemParams p1;
  p1.snr = {1.0};
  p1.theta = {0.01};
  SystemParams p2 = p1;
  p2.snr = {2.0};
  const auto a1 = calibrate(DecodingOrder::identity(1), p1, {kRay}, 1e-8).alpha[0];
  const auto a2 = calibrate(DecodingOrder::identity(1), p2, {kRay}, 1e-8).alpha[0];
  CHECK(a2 < a1);
}

TEST_CASE("calibration brackets fail loudly for unreachable budgets") {
  SystemParams p;
  p.snr = {1e30};
  p.theta = {0.01};
  CHECK_THROWS_AS(calibrate(DecodingOrder::identity(1), p, {kRay}, 1e-8), BracketError);
}

TEST_CASE("two-user calibrated policy meets both power constraints") {
  const SystemParams p = two_user_defaults();
  const std::vector<FadingModel> models = {kRay, kRay};
  const DecodingOrder order{{1, 0}};
  const PowerPolicy policy = calibrate(order, p, models, 1e-8);
  for (int j = 0; j < 2; ++j)
    CHECK(std::abs(average_power(policy, j, models) - 1.0) <= 1e-3);

  // Independent Monte Carlo re-estimation of both average powers.
  for (int j = 0; j < 2; ++j) {
    const auto mc = oracles::mc_exp_mean(
        [&](const std::vector<double>& z) {
          return policy_mu({z[0], z[1]}, policy)[static_cast<std::size_t>(j)];
        },
        2, 1'000'000, 31337 + static_cast<std::uint64_t>(j));
    CHECK(std::abs(mc.mean - 1.0) < std::max(3.0 * mc.std_error, 1e-3));
  }
}

TEST_CASE("constant-mu capacities reduce to the fixed-power vertex") {
  const SystemParams p = two_user_defaults();
  const DecodingOrder order{{1, 0}};
  const auto fixed = fixed_order_capacities(order, p, {kRay, kRay});
  // Route the same rates through the generic effective-capacity path.
  for (int j = 0; j < 2; ++j) {
    const QosSpec qos{p.theta[static_cast<std::size_t>(j)], p.frame_duration_s,
                      p.bandwidth_hz};
    const auto r = effective_capacity(
        [&](std::span<const double> z) {
          const GainVector zv(z.begin(), z.end());
          return powered_rates(zv, p.snr, order, p.bandwidth_hz)[static_cast<std::size_t>(j)];
        },
        {kRay, kRay}, qos);
    CHECK(r.c_normalized == doctest::Approx(fixed[static_cast<std::size_t>(j)]).epsilon(1e-8));
  }
}

TEST_CASE("optimal power control dominates fixed power") {
  SystemParams p1;
  p1.snr = {1.0};
  p1.theta = {0.01};
  const PowerPolicy policy = calibrate(DecodingOrder::identity(1), p1, {kRay}, 1e-8);
  const double powered = powered_vertex_capacities(policy, p1, {kRay})[0];
  const double fixed =
      single_user_capacity(1.0, kRay, QosSpec{0.01, p1.frame_duration_s, p1.bandwidth_hz})
          .c_normalized;
  CHECK(powered > fixed + 1e-4);

  const SystemParams p2 = two_user_defaults();
  const DecodingOrder order{{1, 0}};
  const auto policy2 = calibrate(order, p2, {kRay, kRay}, 1e-8);
  const auto powered2 = powered_vertex_capacities(policy2, p2, {kRay, kRay});
  const auto fixed2 = fixed_order_capacities(order, p2, {kRay, kRay});
  CHECK(powered2[0] >= fixed2[0] - 1e-9);
  CHECK(powered2[1] >= fixed2[1] - 1e-9);
}

TEST_CASE("theta -> 0 powered capacity approaches waterfilling ergodic capacity") {
  SystemParams p;
  p.snr = {1.0};
  p.theta = {1e-6 * oracles::kLn2 / (p.frame_duration_s * p.bandwidth_hz)};
  const PowerPolicy policy = calibrate(DecodingOrder::identity(1), p, {kRay}, 1e-8);
  const double c = powered_vertex_capacities(policy, p, {kRay})[0];
  CHECK(std::abs(c - oracles::frozen::kWaterfillErgodicSnr1) <
        1e-3 * oracles::frozen::kWaterfillErgodicSnr1);
}
