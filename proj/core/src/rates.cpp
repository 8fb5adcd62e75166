#include "effcap/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace effcap {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double SystemParams::beta(int j) const {
  return theta.at(static_cast<std::size_t>(j)) * frame_duration_s * bandwidth_hz / kLn2;
}

void SystemParams::validate() const {
  if (!(frame_duration_s > 0.0)) throw std::invalid_argument("SystemParams: T must be > 0");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("SystemParams: B must be > 0");
  if (snr.empty()) throw std::invalid_argument("SystemParams: need at least one user");
  if (snr.size() != theta.size())
    throw std::invalid_argument("SystemParams: snr and theta sizes differ");
  for (double s : snr)
    if (!(s > 0.0)) throw std::invalid_argument("SystemParams: snr must be > 0");
  for (double t : theta)
    if (!(t > 0.0)) throw std::invalid_argument("SystemParams: theta must be > 0");
}

bool SystemParams::common_theta() const {
  for (double t : theta)
    if (std::abs(t - theta.front()) > 1e-12 * std::abs(theta.front())) return false;
  return true;
}

DecodingOrder DecodingOrder::identity(int m) {
  DecodingOrder o;
  o.pi.resize(static_cast<std::size_t>(m));
  std::iota(o.pi.begin(), o.pi.end(), 0);
  return o;
}

std::vector<DecodingOrder> DecodingOrder::all(int m) {
  std::vector<DecodingOrder> out;
  DecodingOrder o = identity(m);
  do {
    out.push_back(o);
  } while (std::next_permutation(o.pi.begin(), o.pi.end()));
  return out;
}

int DecodingOrder::position_of(int user) const {
  for (std::size_t k = 0; k < pi.size(); ++k)
    if (pi[k] == user) return static_cast<int>(k);
  throw std::invalid_argument("DecodingOrder: user not present");
}

void DecodingOrder::validate() const {
  std::vector<bool> seen(pi.size(), false);
  for (int u : pi) {
    if (u < 0 || u >= static_cast<int>(pi.size()) || seen[static_cast<std::size_t>(u)])
      throw std::invalid_argument("DecodingOrder: pi is not a permutation");
    seen[static_cast<std::size_t>(u)] = true;
  }
}

std::vector<double> vertex_rates(const GainVector& z, const std::vector<double>& snr,
                                 const DecodingOrder& order, double bandwidth_hz) {
  const std::size_t m = snr.size();
  if (z.size() != m || order.pi.size() != m)
    throw std::invalid_argument("vertex_rates: size mismatch");
  std::vector<double> rates(m, 0.0);
  // Walk the order backwards accumulating the interference each earlier
  // decoded user still sees.
  double interference = 0.0;
  for (std::size_t k = m; k-- > 0;) {
    const int j = order.pi[k];
    const double num = snr[static_cast<std::size_t>(j)] * z[static_cast<std::size_t>(j)];
    // log1p keeps full relative precision for gains far below 1/SNR.
    rates[static_cast<std::size_t>(j)] =
        bandwidth_hz * std::log1p(num / (1.0 + interference)) / kLn2;
    interference += num;
  }
  return rates;
}

double tdma_rate(double z, double snr, double delta, double bandwidth_hz) {
  if (!(delta > 0.0))
    throw std::invalid_argument("tdma_rate: delta must be > 0 (user unserved)");
  if (delta > 1.0) throw std::invalid_argument("tdma_rate: delta must be <= 1");
  return bandwidth_hz * std::log1p(snr / delta * z) / kLn2;
}

std::vector<double> powered_rates(const GainVector& z, const std::vector<double>& mu,
                                  const DecodingOrder& order, double bandwidth_hz) {
  return vertex_rates(z, mu, order, bandwidth_hz);
}

bool in_ergodic_region(const std::vector<double>& rates_bits_per_sec,
                       const std::vector<double>& snr,
                       const std::vector<FadingModel>& models, double bandwidth_hz,
                       const ExpectOptions& opt) {
  const std::size_t m = snr.size();
  if (rates_bits_per_sec.size() != m || models.size() != m)
    throw std::invalid_argument("in_ergodic_region: size mismatch");
  if (m > 10)
    throw std::invalid_argument("in_ergodic_region: subset enumeration capped at M = 10");

  constexpr double kSlack = 1e-9;
  ExpectOptions eopt = opt;
  eopt.where = "rate_models.in_ergodic_region";

  // Each bound is integrated over the full joint gain space (the integrand
  // is constant in the excluded users). Expected-rate vectors produced by
  // the same expectation machinery then sit on tight constraints with the
  // discretization error cancelling instead of tripping the slack.
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    double rate_sum = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (mask & (1u << j)) rate_sum += rates_bits_per_sec[j];

    const double bound =
        bandwidth_hz *
        expect_nd(
            [&](std::span<const double> zs) {
              double acc = 1.0;
              for (std::size_t j = 0; j < m; ++j)
                if (mask & (1u << j)) acc += snr[j] * zs[j];
              return std::log2(acc);
            },
            models, eopt)
            .value;
    if (rate_sum > bound + kSlack * std::max(1.0, std::abs(bound))) return false;
  }
  return true;
}

}  // namespace effcap
