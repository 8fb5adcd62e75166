#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "effcap/fading.hpp"
#include "support/oracles.hpp"

using namespace effcap;

namespace {
const FadingModel kRay = FadingModel::rayleigh();

FadingModel uniform02() {
  // Uniform gain on [0, 2]: mean 1, closed-form log expectations.
  return FadingModel::tabulated([](double) { return 0.5; }, 2.0);
}
}  // namespace

TEST_CASE("expect_1d hits the rayleigh normalization, mean and log moments") {
  CHECK(expect_1d([](double) { return 1.0; }, kRay).value ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(expect_1d([](double z) { return z; }, kRay).value ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(expect_1d([](double z) { return std::log2(1.0 + z); }, kRay).value ==
        doctest::Approx(oracles::frozen::kErgodicSnr1).epsilon(1e-9));
}

TEST_CASE("expect_1d is linear") {
  auto f = [](double z) { return std::log2(1.0 + 3.0 * z); };
  auto g = [](double z) { return z / (1.0 + z * z); };
  const double ef = expect_1d(f, kRay).value;
  const double eg = expect_1d(g, kRay).value;
  const double efg = expect_1d([&](double z) { return f(z) + g(z); }, kRay).value;
  CHECK(std::abs(ef + eg - efg) < 1e-12);
}

TEST_CASE("expect_2d basics") {
  CHECK(expect_2d([](double, double) { return 1.0; }, kRay, kRay).value ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(expect_2d([](double a, double b) { return a * b; }, kRay, kRay).value ==
        doctest::Approx(1.0).epsilon(1e-8));
  // P(z2 < z1) = 1/2 by symmetry of an i.i.d. pair.
  const double p_below = expect_2d_split([](double, double) { return 1.0; },
                                         [](double, double) { return 0.0; },
                                         [](double z1) { return z1; }, kRay, kRay)
                             .value;
  CHECK(p_below == doctest::Approx(0.5).epsilon(1e-9));

  ExpectOptions mc;
  mc.method = Method::MonteCarlo;
  mc.budget = 200'000;
  mc.seed = 99;
  const Estimate ind = expect_2d(
      [](double z1, double z2) { return z2 < z1 ? 1.0 : 0.0; }, kRay, kRay, mc);
  CHECK(std::abs(ind.value - 0.5) < 3.0 * ind.std_error);
}

TEST_CASE("expect_2d_split splits the inner integral exactly at the curve") {
  // E{z2 <= g(z1)} + E{z2 > g(z1)} must reassemble any smooth expectation.
  auto f = [](double z1, double z2) { return std::log2(1.0 + z1 + 0.5 * z2); };
  const double whole = expect_2d(f, kRay, kRay).value;
  const double split =
      expect_2d_split(f, f, [](double z1) { return 0.3 + 2.0 * z1; }, kRay, kRay).value;
  CHECK(whole == doctest::Approx(split).epsilon(1e-9));
}

TEST_CASE("sampling is seed-reproducible with the contracted moments") {
  const auto s1 = sample(kRay, 7, 1'000'000);
  const auto s2 = sample(kRay, 7, 1'000'000);
  CHECK(s1 == s2);  // bit-for-bit
  double mean = 0.0;
  for (double z : s1) mean += z;
  mean /= static_cast<double>(s1.size());
  CHECK(mean > 0.997);
  CHECK(mean < 1.003);
  CHECK(sample(kRay, 7, 0).empty());
  CHECK(sample(kRay, 8, 10) != sample(kRay, 7, 10));
}

TEST_CASE("monte carlo standard error halves when samples quadruple") {
  auto f = [](double z) { return std::log2(1.0 + z); };
  ExpectOptions a;
  a.method = Method::MonteCarlo;
  a.budget = 100'000;
  a.seed = 3;
  ExpectOptions b = a;
  b.budget = 400'000;
  const Estimate ea = expect_1d(f, kRay, a);
  const Estimate eb = expect_1d(f, kRay, b);
  CHECK(eb.std_error / ea.std_error > 0.4);
  CHECK(eb.std_error / ea.std_error < 0.6);
  // and both agree with quadrature within 3 standard errors
  const double q = expect_1d(f, kRay).value;
  CHECK(std::abs(ea.value - q) < 3.0 * ea.std_error);
  CHECK(std::abs(eb.value - q) < 3.0 * eb.std_error);
}

TEST_CASE("tabulated model validates, integrates and samples") {
  const FadingModel u = uniform02();
  CHECK(u.mean_gain() == doctest::Approx(1.0).epsilon(1e-10));
  // E{log2(1+z)} over U[0,2] = (3 ln 3 - 2) / (2 ln 2)
  const double want = (3.0 * std::log(3.0) - 2.0) / (2.0 * oracles::kLn2);
  CHECK(expect_1d([](double z) { return std::log2(1.0 + z); }, u).value ==
        doctest::Approx(want).epsilon(1e-9));
  const auto s = sample(u, 11, 200'000);
  double mean = 0.0;
  for (double z : s) {
    CHECK(z >= 0.0);
    CHECK(z <= 2.0);
    mean += z;
  }
  mean /= static_cast<double>(s.size());
  CHECK(mean == doctest::Approx(1.0).epsilon(5e-3));

  CHECK_THROWS_AS(FadingModel::tabulated([](double) { return 0.45; }, 2.0),
                  std::invalid_argument);
}

TEST_CASE("expect_nd tensor rule in three dimensions") {
  std::vector<FadingModel> models = {kRay, kRay, kRay};
  CHECK(expect_nd([](std::span<const double>) { return 1.0; }, models).value ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(expect_nd([](std::span<const double> z) { return z[0] * z[1] * z[2]; }, models)
            .value == doctest::Approx(1.0).epsilon(1e-9));
  ExpectOptions mc;
  mc.method = Method::MonteCarlo;
  mc.budget = 200'000;
  const Estimate e = expect_nd(
      [](std::span<const double> z) { return std::log2(1.0 + z[0] + z[1] + z[2]); },
      models, mc);
  const double q = expect_nd(
      [](std::span<const double> z) { return std::log2(1.0 + z[0] + z[1] + z[2]); },
      models).value;
  CHECK(std::abs(e.value - q) < 3.0 * e.std_error);
}

TEST_CASE("non-finite integrand inside an expectation names the node") {
  CHECK_THROWS_AS(expect_1d([](double z) { return 1.0 / (z - z); }, kRay).value,
                  NonFiniteIntegrand);
}

TEST_CASE("derive_seed separates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}
