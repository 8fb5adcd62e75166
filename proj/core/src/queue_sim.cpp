#include "effcap/queue_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace effcap {
namespace {

// Least-squares slope of y over x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// ln of the empirical tail P(Q >= q) from a sorted sample, or NaN if empty.
double ln_tail(const std::vector<double>& sorted, double q) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), q);
  const std::size_t count = static_cast<std::size_t>(sorted.end() - it);
  if (count == 0) return std::nan("");
  return std::log(static_cast<double>(count) / static_cast<double>(sorted.size()));
}

}  // namespace

QueueTrace simulate(const std::function<double(std::span<const double>)>& rate_law_bits_per_sec,
                    const std::vector<FadingModel>& models, double arrival_bits_per_sec,
                    double frame_duration_s, std::size_t frames, std::uint64_t seed,
                    const SimulateOptions& opt) {
  if (frames < 100'000)
    throw std::invalid_argument("queue_validator.simulate: need at least 1e5 frames");
  if (arrival_bits_per_sec < 0.0)
    throw std::invalid_argument("queue_validator.simulate: arrival must be >= 0");
  if (!(frame_duration_s > 0.0))
    throw std::invalid_argument("queue_validator.simulate: frame duration must be > 0");
  if (models.empty())
    throw std::invalid_argument("queue_validator.simulate: need at least one fading model");

  QueueTrace trace;
  trace.arrival_bits_per_sec = arrival_bits_per_sec;
  trace.frame_duration_s = frame_duration_s;
  trace.frames = frames;
  trace.seed = seed;
  trace.warmup_frames = static_cast<std::size_t>(
      static_cast<double>(frames) * std::clamp(opt.warmup_fraction, 0.0, 0.5));
  trace.queue_bits.resize(frames);
  if (opt.keep_services) trace.service_bits.resize(frames);

  std::mt19937_64 eng(seed);
  std::vector<double> z(models.size());
  const double T = trace.frame_duration_s;
  const double arrivals = arrival_bits_per_sec * T;
  double q = 0.0;
  double service_sum = 0.0;
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t j = 0; j < models.size(); ++j) z[j] = models[j].quantile(uniform01(eng));
    const double service = T * rate_law_bits_per_sec(z);
    q = std::max(q + arrivals - service, 0.0);
    trace.queue_bits[i] = q;
    if (opt.keep_services) trace.service_bits[i] = service;
    service_sum += service;
  }
  trace.mean_service_bits = service_sum / static_cast<double>(frames);
  trace.unstable_warning = arrivals >= trace.mean_service_bits;
  return trace;
}

DecayEstimate estimate_decay(const QueueTrace& trace, const TailWindow& window) {
  if (trace.queue_bits.size() <= trace.warmup_frames)
    throw std::invalid_argument("queue_validator.estimate_decay: empty stationary window");
  if (window.levels < 3 || window.batches < 2)
    throw std::invalid_argument("queue_validator.estimate_decay: bad window spec");

  const std::size_t n = trace.queue_bits.size() - trace.warmup_frames;
  std::vector<double> sorted(trace.queue_bits.begin() +
                                 static_cast<std::ptrdiff_t>(trace.warmup_frames),
                             trace.queue_bits.end());
  std::sort(sorted.begin(), sorted.end());

  auto quantile = [&](double p) {
    const double idx = p * static_cast<double>(n - 1);
    const std::size_t i0 = static_cast<std::size_t>(idx);
    const std::size_t i1 = std::min(i0 + 1, n - 1);
    const double frac = idx - static_cast<double>(i0);
    return sorted[i0] * (1.0 - frac) + sorted[i1] * frac;
  };

  const double q_lo = quantile(window.lo_quantile);
  const double q_hi = quantile(window.hi_quantile);

  const std::size_t exceed_lo = static_cast<std::size_t>(
      sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), q_lo));
  if (q_lo <= 0.0 || q_hi <= q_lo || exceed_lo < window.min_exceedances) {
    // Estimate how many frames would give min_exceedances at the window.
    const double p_tail = std::max(
        static_cast<double>(exceed_lo) / static_cast<double>(n),
        1.0 / static_cast<double>(n));
    const std::size_t required = static_cast<std::size_t>(
        std::ceil(static_cast<double>(window.min_exceedances) / p_tail /
                  (1.0 - static_cast<double>(trace.warmup_frames) /
                             static_cast<double>(trace.frames))));
    throw InsufficientTailData(
        "queue_validator.estimate_decay",
        "tail window [" + std::to_string(q_lo) + ", " + std::to_string(q_hi) +
            "] has " + std::to_string(exceed_lo) + " exceedances (need " +
            std::to_string(window.min_exceedances) + "); simulate at least " +
            std::to_string(required) + " frames",
        required);
  }

  std::vector<double> qs, lts;
  for (int l = 0; l < window.levels; ++l) {
    const double q =
        q_lo + (q_hi - q_lo) * static_cast<double>(l) / (window.levels - 1);
    const double lt = ln_tail(sorted, q);
    if (std::isnan(lt)) continue;
    qs.push_back(q);
    lts.push_back(lt);
  }

  DecayEstimate est;
  est.q_lo = q_lo;
  est.q_hi = q_hi;
  est.levels_used = static_cast<int>(qs.size());
  est.exceedances_at_q_lo = exceed_lo;
  est.theta_hat = -ls_slope(qs, lts);

  // Batch means over contiguous chunks of the stationary window.
  const std::size_t batch_len = n / static_cast<std::size_t>(window.batches);
  std::vector<double> batch_thetas;
  for (int b = 0; b < window.batches; ++b) {
    const std::size_t begin = trace.warmup_frames + static_cast<std::size_t>(b) * batch_len;
    std::vector<double> chunk(trace.queue_bits.begin() + static_cast<std::ptrdiff_t>(begin),
                              trace.queue_bits.begin() +
                                  static_cast<std::ptrdiff_t>(begin + batch_len));
    std::sort(chunk.begin(), chunk.end());
    std::vector<double> bx, by;
    for (std::size_t l = 0; l < qs.size(); ++l) {
      const double lt = ln_tail(chunk, qs[l]);
      if (std::isnan(lt)) continue;
      bx.push_back(qs[l]);
      by.push_back(lt);
    }
    if (bx.size() >= 3) batch_thetas.push_back(-ls_slope(bx, by));
  }
  if (batch_thetas.size() >= 2) {
    double mean = 0.0;
    for (double t : batch_thetas) mean += t;
    mean /= static_cast<double>(batch_thetas.size());
    double var = 0.0;
    for (double t : batch_thetas) var += (t - mean) * (t - mean);
    var /= static_cast<double>(batch_thetas.size() - 1);
    const double half =
        1.96 * std::sqrt(var / static_cast<double>(batch_thetas.size()));
    est.ci_low = est.theta_hat - half;
    est.ci_high = est.theta_hat + half;
  } else {
    est.ci_low = est.ci_high = est.theta_hat;
  }
  return est;
}

}  // namespace effcap
