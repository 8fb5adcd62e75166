#ifndef EFFCAP_RATES_HPP
#define EFFCAP_RATES_HPP

#include <vector>

#include "effcap/fading.hpp"

namespace effcap {

/// System-level constants shared by every scheme.
struct SystemParams {
  double frame_duration_s = 2e-3;  // T
  double bandwidth_hz = 1e5;       // B
  std::vector<double> snr;         // linear average SNR per user
  std::vector<double> theta;       // QoS exponent per user, 1/bit

  int num_users() const { return static_cast<int>(snr.size()); }

  /// Normalized QoS exponent beta_j = theta_j * T * B / ln 2.
  double beta(int j) const;

  /// Throws std::invalid_argument on any non-positive field or size mismatch.
  void validate() const;

  /// True if every user has the same theta (within 1 ulp-ish tolerance).
  bool common_theta() const;
};

/// Successive decoding order: pi[k] is the (0-based) user decoded k-th.
/// User pi[M-1] is decoded last and sees no interference.
struct DecodingOrder {
  std::vector<int> pi;

  static DecodingOrder identity(int m);
  /// All M! orders in lexicographic order of pi.
  static std::vector<DecodingOrder> all(int m);

  int num_users() const { return static_cast<int>(pi.size()); }
  /// Position of a user in the decode sequence (inverse permutation).
  int position_of(int user) const;
  void validate() const;
};

/// Per-state vertex rates of the MAC polymatroid under a decoding order:
/// user pi[k] sees interference only from users decoded after it.
/// Returned in user index order, bits/s.
std::vector<double> vertex_rates(const GainVector& z, const std::vector<double>& snr,
                                 const DecodingOrder& order, double bandwidth_hz);

/// TDMA burst rate of one user transmitting alone in a fraction delta of the
/// frame with power boosted by 1/delta. Throws on delta <= 0.
double tdma_rate(double z, double snr, double delta, double bandwidth_hz);

/// Vertex rates with the fixed SNR levels replaced by allocated levels mu(z).
std::vector<double> powered_rates(const GainVector& z, const std::vector<double>& mu,
                                  const DecodingOrder& order, double bandwidth_hz);

/// Membership test for the ergodic MAC capacity region: checks all 2^M - 1
/// subset constraints R(S) <= B E{log2(1 + sum_{j in S} SNR_j z_j)} with
/// 1e-9 slack. M is capped at 10 by the constraint enumeration.
bool in_ergodic_region(const std::vector<double>& rates_bits_per_sec,
                       const std::vector<double>& snr,
                       const std::vector<FadingModel>& models, double bandwidth_hz,
                       const ExpectOptions& opt = {});

}  // namespace effcap

#endif
