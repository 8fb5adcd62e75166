#include "effcap/power_control.hpp"

#include <cmath>
#include <stdexcept>

namespace effcap {
namespace {

// One user's allocation given its normalized gain nu = z/(1+I).
double mu_from_normalized_gain(double nu, double alpha, double beta) {
  if (!(nu > alpha)) return 0.0;
  return (std::pow(nu / alpha, 1.0 / (beta + 1.0)) - 1.0) / nu;
}

// Subspace of users decoded at or after `user` (the only gains mu_user
// depends on), in decode order starting with `user` itself.
std::vector<int> dependency_set(const PowerPolicy& policy, int user) {
  std::vector<int> dep;
  const int pos = policy.order.position_of(user);
  for (int k = pos; k < policy.order.num_users(); ++k)
    dep.push_back(policy.order.pi[static_cast<std::size_t>(k)]);
  return dep;
}

// mu of the first user in `dep` given the gains of the dependency set,
// evaluating later-decoded users bottom-up.
double mu_on_subspace(std::span<const double> z_dep, const std::vector<int>& dep,
                      const PowerPolicy& policy) {
  double interference = 0.0;
  double mu_front = 0.0;
  for (std::size_t i = z_dep.size(); i-- > 0;) {
    const int j = dep[i];
    const double zj = z_dep[i];
    double mu = 0.0;
    if (zj > 0.0)
      mu = mu_from_normalized_gain(zj / (1.0 + interference),
                                   policy.alpha[static_cast<std::size_t>(j)],
                                   policy.beta[static_cast<std::size_t>(j)]);
    if (i == 0) mu_front = mu;
    interference += mu * zj;
  }
  return mu_front;
}

}  // namespace

void PowerPolicy::validate() const {
  order.validate();
  const std::size_t m = order.pi.size();
  if (alpha.size() != m || beta.size() != m)
    throw std::invalid_argument("PowerPolicy: alpha/beta size mismatch");
  for (double a : alpha)
    if (!(a > 0.0)) throw std::invalid_argument("PowerPolicy: alpha must be > 0");
  for (double b : beta)
    if (!(b > 0.0)) throw std::invalid_argument("PowerPolicy: beta must be > 0");
}

std::vector<double> policy_mu(const GainVector& z, const PowerPolicy& policy) {
  policy.validate();
  const std::size_t m = policy.order.pi.size();
  if (z.size() != m) throw std::invalid_argument("policy_mu: gain vector size mismatch");

  std::vector<double> mu(m, 0.0);
  double interference = 0.0;
  for (std::size_t k = m; k-- > 0;) {
    const int j = policy.order.pi[k];
    const double zj = z[static_cast<std::size_t>(j)];
    if (zj > 0.0)
      mu[static_cast<std::size_t>(j)] =
          mu_from_normalized_gain(zj / (1.0 + interference),
                                  policy.alpha[static_cast<std::size_t>(j)],
                                  policy.beta[static_cast<std::size_t>(j)]);
    interference += mu[static_cast<std::size_t>(j)] * zj;
  }
  return mu;
}

std::pair<double, double> two_user_policy(double z1, double z2,
                                          const std::array<double, 2>& alpha,
                                          const std::array<double, 2>& beta) {
  // Order (2,1): user 1 is decoded last and waterfills on its own gain.
  double mu1 = 0.0;
  if (z1 > alpha[0])
    mu1 = 1.0 / (std::pow(alpha[0], 1.0 / (beta[0] + 1.0)) *
                 std::pow(z1, beta[0] / (beta[0] + 1.0))) -
          1.0 / z1;

  double mu2 = 0.0;
  if (z1 <= alpha[0] && z2 > alpha[1]) {
    mu2 = 1.0 / (std::pow(alpha[1], 1.0 / (beta[1] + 1.0)) *
                 std::pow(z2, beta[1] / (beta[1] + 1.0))) -
          1.0 / z2;
  } else if (z1 > alpha[0] &&
             z2 / alpha[1] > std::pow(z1 / alpha[0], 1.0 / (beta[0] + 1.0))) {
    const double boost = z1 / alpha[0];
    mu2 = std::pow(boost, beta[1] / ((beta[0] + 1.0) * (beta[1] + 1.0))) /
              (std::pow(alpha[1], 1.0 / (beta[1] + 1.0)) *
               std::pow(z2, beta[1] / (beta[1] + 1.0))) -
          std::pow(boost, 1.0 / (beta[0] + 1.0)) / z2;
  }
  return {mu1, mu2};
}

double average_power(const PowerPolicy& policy, int user,
                     const std::vector<FadingModel>& models, const ExpectOptions& opt) {
  policy.validate();
  if (models.size() != policy.order.pi.size())
    throw std::invalid_argument("average_power: one model per user required");

  const auto dep = dependency_set(policy, user);
  std::vector<FadingModel> sub;
  sub.reserve(dep.size());
  for (int j : dep) sub.push_back(models[static_cast<std::size_t>(j)]);

  ExpectOptions eopt = opt;
  eopt.where = "power_control.average_power";
  return expect_nd(
             [&](std::span<const double> z_dep) {
               return mu_on_subspace(z_dep, dep, policy);
             },
             sub, eopt)
      .value;
}

PowerPolicy calibrate(const DecodingOrder& order, const SystemParams& params,
                      const std::vector<FadingModel>& models, double tol,
                      const ExpectOptions& opt) {
  params.validate();
  order.validate();
  const int m = params.num_users();
  if (order.num_users() != m || models.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("calibrate: order/models size mismatch");

  PowerPolicy policy;
  policy.order = order;
  policy.alpha.assign(static_cast<std::size_t>(m), 1.0);
  policy.beta.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j)
    policy.beta[static_cast<std::size_t>(j)] = params.beta(j);

  constexpr double kLnLo = -27.631021115928547;  // ln 1e-12
  constexpr double kLnHi = 27.631021115928547;   // ln 1e12

  // Reverse decoding order: the last-decoded user's constraint depends only
  // on itself; earlier users see the already-calibrated later policies.
  for (int k = m - 1; k >= 0; --k) {
    const int j = order.pi[static_cast<std::size_t>(k)];
    const double target = params.snr[static_cast<std::size_t>(j)];
    auto power_at = [&](double ln_alpha) {
      policy.alpha[static_cast<std::size_t>(j)] = std::exp(ln_alpha);
      return average_power(policy, j, models, opt);
    };
    double lo = kLnLo, hi = kLnHi;
    const double p_lo = power_at(lo);
    const double p_hi = power_at(hi);
    if (p_lo < target || p_hi > target)
      throw BracketError("power_control.calibrate",
                         "no alpha in [1e-12, 1e12] meets E{mu} = SNR for user " +
                             std::to_string(j + 1) + " (E at ends: " +
                             std::to_string(p_lo) + ", " + std::to_string(p_hi) + ")");
    // E{mu_j} decreases in alpha_j; bisect until the power error is inside tol.
    double achieved = p_lo;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      achieved = power_at(mid);
      if (std::abs(achieved - target) / target <= tol) break;
      if (achieved > target)
        lo = mid;
      else
        hi = mid;
      if (hi - lo < 1e-15) break;
    }
    if (std::abs(achieved - target) / target > 10.0 * tol)
      throw NumericError("power_control.calibrate",
                         "bisection stalled for user " + std::to_string(j + 1) +
                             ": E{mu} = " + std::to_string(achieved) +
                             ", target " + std::to_string(target));
  }
  return policy;
}

std::vector<double> powered_vertex_capacities(const PowerPolicy& policy,
                                              const SystemParams& params,
                                              const std::vector<FadingModel>& models,
                                              const ExpectOptions& opt,
                                              std::vector<double>* std_errors) {
  params.validate();
  policy.validate();
  const int m = params.num_users();
  if (policy.order.num_users() != m || models.size() != static_cast<std::size_t>(m))
    throw std::invalid_argument("powered_vertex_capacities: size mismatch");

  ExpectOptions eopt = opt;
  eopt.where = "power_control.powered_vertex_capacities";
  std::vector<double> caps(static_cast<std::size_t>(m));
  if (std_errors) std_errors->assign(static_cast<std::size_t>(m), 0.0);
  for (int user = 0; user < m; ++user) {
    const auto dep = dependency_set(policy, user);
    std::vector<FadingModel> sub;
    sub.reserve(dep.size());
    for (int j : dep) sub.push_back(models[static_cast<std::size_t>(j)]);
    const double beta_u = params.beta(user);

    const Estimate e = expect_nd(
        [&](std::span<const double> z_dep) {
          // Evaluate the policy bottom-up over the dependency set, then form
          // the power-adapted SINR of `user`.
          double interference = 0.0;
          double sinr = 0.0;
          for (std::size_t i = z_dep.size(); i-- > 0;) {
            const int j = dep[i];
            const double zj = z_dep[i];
            double mu = 0.0;
            if (zj > 0.0)
              mu = mu_from_normalized_gain(zj / (1.0 + interference),
                                           policy.alpha[static_cast<std::size_t>(j)],
                                           policy.beta[static_cast<std::size_t>(j)]);
            if (i == 0) sinr = mu * zj / (1.0 + interference);
            interference += mu * zj;
          }
          return std::pow(1.0 + sinr, -beta_u);
        },
        sub, eopt);
    const double theta_tb = params.theta[static_cast<std::size_t>(user)] *
                            params.frame_duration_s * params.bandwidth_hz;
    if (!(e.value > 0.0)) throw UnderflowError(eopt.where);
    caps[static_cast<std::size_t>(user)] = -std::log(e.value) / theta_tb;
    if (std_errors)
      (*std_errors)[static_cast<std::size_t>(user)] = e.std_error / (e.value * theta_tb);
  }
  return caps;
}

}  // namespace effcap
