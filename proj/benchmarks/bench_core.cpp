#include <benchmark/benchmark.h>

#include <cmath>

#include "effcap/effective_capacity.hpp"
#include "effcap/power_control.hpp"
#include "effcap/queue_sim.hpp"
#include "effcap/region.hpp"

using namespace effcap;

namespace {
const FadingModel kRay = FadingModel::rayleigh();
const std::vector<FadingModel> kTwoRay = {kRay, kRay};
const QosSpec kQos{0.01, 2e-3, 1e5};

SystemParams two_user_params() {
  SystemParams p;
  p.snr = {1.0, 1.0};
  p.theta = {0.01, 0.01};
  return p;
}
}  // namespace

static void BM_GaussLaguerreRule(benchmark::State& state) {
  for (auto _ : state) {
    auto rule = quad::gauss_laguerre(static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(rule.weights.data());
  }
}
BENCHMARK(BM_GaussLaguerreRule)->Arg(64)->Arg(128);

static void BM_Expect1dQuadrature(benchmark::State& state) {
  for (auto _ : state) {
    auto e = expect_1d([](double z) { return std::log2(1.0 + z); }, kRay);
    benchmark::DoNotOptimize(e.value);
  }
}
BENCHMARK(BM_Expect1dQuadrature);

static void BM_Expect1dMonteCarlo(benchmark::State& state) {
  ExpectOptions opt;
  opt.method = Method::MonteCarlo;
  opt.budget = state.range(0);
  for (auto _ : state) {
    auto e = expect_1d([](double z) { return std::log2(1.0 + z); }, kRay, opt);
    benchmark::DoNotOptimize(e.value);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Expect1dMonteCarlo)->Arg(100000)->Arg(1000000);

static void BM_SingleUserCapacity(benchmark::State& state) {
  for (auto _ : state) {
    auto r = single_user_capacity(1.0, kRay, kQos);
    benchmark::DoNotOptimize(r.c_normalized);
  }
}
BENCHMARK(BM_SingleUserCapacity);

static void BM_ScheduledCapacities(benchmark::State& state) {
  const SystemParams p = two_user_params();
  for (auto _ : state) {
    auto c = scheduled_capacities(1.0, p, kTwoRay);
    benchmark::DoNotOptimize(c.first);
  }
}
BENCHMARK(BM_ScheduledCapacities);

static void BM_TimeshareCapacities(benchmark::State& state) {
  const SystemParams p = two_user_params();
  for (auto _ : state) {
    auto c = timeshare_capacities({0.5, 0.5}, p, kTwoRay);
    benchmark::DoNotOptimize(c[0]);
  }
}
BENCHMARK(BM_TimeshareCapacities);

static void BM_PolicyMu(benchmark::State& state) {
  PowerPolicy policy;
  policy.order = DecodingOrder{{1, 0}};
  policy.alpha = {0.8, 1.3};
  policy.beta = {1.0, 1.0};
  double z = 0.0;
  for (auto _ : state) {
    z = z < 5.0 ? z + 1e-3 : 0.0;
    auto mu = policy_mu({z, 5.0 - z}, policy);
    benchmark::DoNotOptimize(mu[0]);
  }
}
BENCHMARK(BM_PolicyMu);

static void BM_CalibrateSingleUser(benchmark::State& state) {
  SystemParams p;
  p.snr = {1.0};
  p.theta = {0.01};
  for (auto _ : state) {
    auto policy = calibrate(DecodingOrder::identity(1), p, {kRay}, 1e-8);
    benchmark::DoNotOptimize(policy.alpha[0]);
  }
}
BENCHMARK(BM_CalibrateSingleUser);

static void BM_QueueSimulate(benchmark::State& state) {
  auto rate_law = [](std::span<const double> z) { return 1e5 * std::log2(1.0 + z[0]); };
  const double arrival = 0.6 * 1e5 * 0.86;
  for (auto _ : state) {
    auto t = simulate(rate_law, {kRay}, arrival, 2e-3,
                      static_cast<std::size_t>(state.range(0)), 42);
    benchmark::DoNotOptimize(t.queue_bits.back());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_QueueSimulate)->Arg(100000)->Arg(1000000);

static void BM_EstimateDecay(benchmark::State& state) {
  auto rate_law = [](std::span<const double> z) { return 1e5 * std::log2(1.0 + z[0]); };
  const double arrival = single_user_capacity(1.0, kRay, kQos).c_bits_per_sec;
  const QueueTrace trace = simulate(rate_law, {kRay}, arrival, 2e-3, 1'000'000, 42);
  for (auto _ : state) {
    auto est = estimate_decay(trace);
    benchmark::DoNotOptimize(est.theta_hat);
  }
}
BENCHMARK(BM_EstimateDecay);

BENCHMARK_MAIN();
