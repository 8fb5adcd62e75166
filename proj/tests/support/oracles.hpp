// Test-side numerical oracles, independent of the library's own
// integration and optimization paths.
#ifndef EFFCAP_TESTS_ORACLES_HPP
#define EFFCAP_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracles {

inline constexpr double kLn2 = 0.6931471805599453;

// Reference values computed to 20 digits with an independent
// arbitrary-precision tool and frozen here.
namespace frozen {
// e^{1/SNR} E1(1/SNR) / ln 2 at SNR = 1: the ergodic Rayleigh capacity.
inline constexpr double kErgodicSnr1 = 0.86034738227088595;
// -ln((1 + e^{-1})/2): two-point service law at thetaT = 1.
inline constexpr double kTwoPoint = 0.37988549304172248;
// Single-user effective capacity, SNR = 1, thetaTB = 2 (theta = 0.01 at
// the default T = 2 ms, B = 100 kHz).
inline constexpr double kSingleUserTheta001 = 0.58941977515119882;
// TDMA at delta = 0.5, SNR = 1, thetaTB = 2.
inline constexpr double kTdmaHalf = 0.51760478053973235;
// Equal time share tau = 0.5, symmetric SNR = 1, thetaTB = 2.
inline constexpr double kTimeshareHalf = 0.51133086415206199;
// Optimal switching at K = 1, symmetric SNR = 1, thetaTB = 2.
inline constexpr double kScheduledK1 = 0.54207126344740018;
// Waterfilling cutoff solving (1/a) e^{-a} - E1(a) = 1 (SNR = 1).
inline constexpr double kWaterfillAlphaSnr1 = 0.39377384504511836;
// Waterfilling ergodic capacity E1(a*) / ln 2 at SNR = 1.
inline constexpr double kWaterfillErgodicSnr1 = 1.0285389253594779;
}  // namespace frozen

// Exponential integral E1(x), x > 0: series for small x, continued
// fraction (Lentz) for large.
inline double expint_e1(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("expint_e1: x must be > 0");
  constexpr double kEuler = 0.5772156649015329;
  if (x <= 1.0) {
    double sum = -kEuler - std::log(x);
    double term = 1.0;
    for (int k = 1; k <= 60; ++k) {
      term *= -x / k;
      sum -= term / k;
    }
    return sum;
  }
  double b = x + 1.0, c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i <= 200; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

// E{log2(1 + sum_j c_j z_j)} for independent unit-mean exponential gains and
// pairwise distinct c_j > 0, via the hypoexponential partial fractions:
// sum_j A_j e^{1/c_j} E1(1/c_j) / ln2 with A_j = prod_{k != j} c_j/(c_j-c_k).
inline double hypoexp_log2_mean(const std::vector<double>& c) {
  double acc = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    double a = 1.0;
    for (std::size_t k = 0; k < c.size(); ++k)
      if (k != j) a *= c[j] / (c[j] - c[k]);
    acc += a * std::exp(1.0 / c[j]) * expint_e1(1.0 / c[j]);
  }
  return acc / kLn2;
}

// Golden-section minimizer of a convex scalar function on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-12, int max_iter = 300) {
  const double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (f1 > f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

// Raw exponential sampler (inverse CDF, unit mean). Deliberately written
// out here rather than calling the library.
struct ExpSampler {
  std::mt19937_64 eng;
  explicit ExpSampler(std::uint64_t seed) : eng(seed) {}
  double operator()() {
    const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    return -std::log1p(-u);
  }
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte Carlo mean +- SE of f over n i.i.d. unit-mean exponential vectors.
inline McEstimate mc_exp_mean(const std::function<double(const std::vector<double>&)>& f,
                              std::size_t dim, std::size_t n, std::uint64_t seed) {
  ExpSampler draw(seed);
  std::vector<double> z(dim);
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) z[j] = draw();
    const double v = f(z);
    const double d = v - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (v - mean);
  }
  McEstimate e;
  e.mean = mean;
  e.std_error = std::sqrt(m2 / (static_cast<double>(n) * static_cast<double>(n - 1)));
  return e;
}

// Oracle for the pointwise power objective of one user: minimizes
//   (1 + mu * nu)^{-beta} + beta * alpha * mu   over mu >= 0,
// where nu = z/(1+I). The multiplier beta*alpha is the one that reproduces
// the threshold-form closed form.
inline double pointwise_power_min(double nu, double alpha, double beta) {
  auto objective = [&](double mu) {
    return std::pow(1.0 + mu * nu, -beta) + beta * alpha * mu;
  };
  const double hi = nu > 0.0 ? 10.0 + 10.0 / nu : 10.0;
  const double mu = golden_min(objective, 0.0, hi);
  // The boundary mu = 0 competes with the interior stationary point.
  return objective(0.0) <= objective(mu) ? 0.0 : mu;
}

// Waterfilling calibration oracle: solves E{(1/a - 1/z)^+} = snr over
// unit-mean exponential z by bisection, with the expectation evaluated as
// (1/a) e^{-a} - E1(a).
inline double waterfill_alpha(double snr) {
  auto mean_power = [](double a) { return std::exp(-a) / a - expint_e1(a); };
  double lo = 1e-9, hi = 50.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mean_power(mid) > snr)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracles

#endif
