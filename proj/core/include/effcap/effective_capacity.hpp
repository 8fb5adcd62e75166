#ifndef EFFCAP_EFFECTIVE_CAPACITY_HPP
#define EFFCAP_EFFECTIVE_CAPACITY_HPP

#include <functional>
#include <span>
#include <vector>

#include "effcap/fading.hpp"
#include "effcap/rates.hpp"

namespace effcap {

/// Statistical QoS constraint: the queue tail must decay at exponent theta.
struct QosSpec {
  double theta = 0.01;             // 1/bit
  double frame_duration_s = 2e-3;  // T
  double bandwidth_hz = 1e5;       // B

  double beta() const;  // theta * T * B / ln 2
  void validate() const;
};

struct EffCapResult {
  double c_bits_per_sec = 0.0;
  double c_normalized = 0.0;  // c_bits_per_sec / B, bits/s/Hz
  Method method = Method::Quadrature;
  long budget = 0;
  double std_error = 0.0;  // of c_normalized; 0 for quadrature
};

/// How the expectation of exp(-theta*T*R) is evaluated. Linear is the
/// default; LogSumExp is the rescaled path for rate laws whose integrand
/// underflows everywhere (the linear path then throws UnderflowError).
enum class ExpPath { Linear, LogSumExp };

/// Effective capacity of an arbitrary service-rate law under i.i.d.
/// block fading:  C(theta) = -(1/(theta T)) ln E{ exp(-theta T R(z)) }.
EffCapResult effective_capacity(
    const std::function<double(std::span<const double>)>& rate_law_bits_per_sec,
    const std::vector<FadingModel>& models, const QosSpec& qos,
    const ExpectOptions& opt = {}, ExpPath path = ExpPath::Linear);

/// Single user at fixed power: service rate B log2(1 + snr z). Evaluated in
/// the algebraic form (1 + snr z)^{-beta}, which cannot overflow.
EffCapResult single_user_capacity(double snr, const FadingModel& model, const QosSpec& qos,
                                  const ExpectOptions& opt = {});

/// TDMA user with time fraction delta: the slot weighting sits inside the
/// exponent, giving the integrand (1 + (snr/delta) z)^{-delta beta}.
/// At delta = 1 this reduces to single_user_capacity.
EffCapResult effective_capacity_tdma(double delta, double snr, const FadingModel& model,
                                     const QosSpec& qos, const ExpectOptions& opt = {});

}  // namespace effcap

#endif
