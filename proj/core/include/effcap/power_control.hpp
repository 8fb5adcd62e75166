#ifndef EFFCAP_POWER_CONTROL_HPP
#define EFFCAP_POWER_CONTROL_HPP

#include <array>
#include <utility>
#include <vector>

#include "effcap/fading.hpp"
#include "effcap/rates.hpp"

namespace effcap {

/// QoS-aware power allocation under a fixed decoding order. Each user
/// transmits only when its gain, normalized by the interference-plus-noise
/// it sees, exceeds its threshold alpha_j:
///
///   mu_j = (1/nu) * ((nu/alpha_j)^{1/(beta_j+1)} - 1)   if nu > alpha_j
///        = 0                                            otherwise,
///
/// with nu = z_j / (1 + I_j) and I_j the interference from users decoded
/// after j. As beta -> 0 this degenerates to waterfilling (1/alpha - 1/nu)+.
struct PowerPolicy {
  DecodingOrder order;
  std::vector<double> alpha;  // per-user thresholds (user index order)
  std::vector<double> beta;   // per-user normalized QoS exponents

  void validate() const;
};

/// Allocated SNR levels mu(z), evaluated in reverse decoding order so each
/// user's interference is already known. z_j = 0 yields mu_j = 0.
std::vector<double> policy_mu(const GainVector& z, const PowerPolicy& policy);

/// Closed-form two-user policy for decoding order (2,1): user 2 decoded
/// first, user 1 interference-free. Specialization of policy_mu.
std::pair<double, double> two_user_policy(double z1, double z2,
                                          const std::array<double, 2>& alpha,
                                          const std::array<double, 2>& beta);

/// E{mu_j(z)} for one user under the policy.
double average_power(const PowerPolicy& policy, int user,
                     const std::vector<FadingModel>& models, const ExpectOptions& opt = {});

/// Calibrates the thresholds so each average power constraint binds:
/// |E{mu_j} - SNR_j| / SNR_j <= tol. Bisection on ln(alpha_j), proceeding in
/// reverse decoding order (later users' policies are fixed first). Throws
/// BracketError if no alpha in [1e-12, 1e12] meets a constraint.
PowerPolicy calibrate(const DecodingOrder& order, const SystemParams& params,
                      const std::vector<FadingModel>& models, double tol = 1e-8,
                      const ExpectOptions& opt = {});

/// Effective capacities (bits/s/Hz) of the decoding-order vertex under the
/// power policy: C_j from the power-adapted interference-limited rate.
std::vector<double> powered_vertex_capacities(const PowerPolicy& policy,
                                              const SystemParams& params,
                                              const std::vector<FadingModel>& models,
                                              const ExpectOptions& opt = {},
                                              std::vector<double>* std_errors = nullptr);

}  // namespace effcap

#endif
