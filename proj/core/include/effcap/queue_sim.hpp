#ifndef EFFCAP_QUEUE_SIM_HPP
#define EFFCAP_QUEUE_SIM_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "effcap/fading.hpp"

namespace effcap {

/// Discrete-time queue trace from the Lindley recursion
///   Q[i+1] = max(Q[i] + a*T - T*R[i], 0)
/// under i.i.d. block fading (gains redrawn each frame).
struct QueueTrace {
  double arrival_bits_per_sec = 0.0;
  double frame_duration_s = 0.0;
  std::size_t frames = 0;
  std::uint64_t seed = 0;
  std::size_t warmup_frames = 0;   // stationary statistics exclude this prefix
  bool unstable_warning = false;   // arrival >= mean service observed
  double mean_service_bits = 0.0;  // per frame, over the whole trace
  std::vector<double> queue_bits;    // Q[i] after frame i's update
  std::vector<double> service_bits;  // s[i] = T*R[i]; kept only on request
};

struct SimulateOptions {
  double warmup_fraction = 0.01;
  bool keep_services = false;
};

/// Runs the queue for `frames` frames of duration T. Reproducible bit for
/// bit given (seed, frames). Throws std::invalid_argument for frames < 1e5
/// (the tail statistics below are meaningless with fewer).
QueueTrace simulate(const std::function<double(std::span<const double>)>& rate_law_bits_per_sec,
                    const std::vector<FadingModel>& models, double arrival_bits_per_sec,
                    double frame_duration_s, std::size_t frames, std::uint64_t seed,
                    const SimulateOptions& opt = {});

/// Tail-fit window: q levels between the lo and hi empirical quantiles of
/// the stationary queue distribution.
struct TailWindow {
  double lo_quantile = 0.95;
  double hi_quantile = 0.999;
  int levels = 25;
  std::size_t min_exceedances = 1000;  // required at the smallest fitted q
  int batches = 20;
};

struct DecayEstimate {
  double theta_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double q_lo = 0.0, q_hi = 0.0;  // fitted window
  int levels_used = 0;
  std::size_t exceedances_at_q_lo = 0;
};

/// Least-squares slope of ln P(Q >= q) over the tail window; the decay
/// exponent estimate is minus that slope. Confidence interval by batch
/// means. Throws InsufficientTailData (naming the required frame count)
/// when the window has too little mass.
DecayEstimate estimate_decay(const QueueTrace& trace, const TailWindow& window = {});

}  // namespace effcap

#endif
