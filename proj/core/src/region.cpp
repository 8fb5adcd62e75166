#include "effcap/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "effcap/detail/parallel.hpp"

namespace effcap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_models(const SystemParams& params, const std::vector<FadingModel>& models,
                    const char* who) {
  if (models.size() != static_cast<std::size_t>(params.num_users()))
    throw std::invalid_argument(std::string(who) + ": one fading model per user required");
}

void require_two_users_common_theta(const SystemParams& params,
                                    const std::vector<FadingModel>& models,
                                    const char* who) {
  params.validate();
  require_models(params, models, who);
  if (params.num_users() != 2)
    throw std::invalid_argument(std::string(who) + ": requires exactly two users");
  if (!params.common_theta())
    throw std::invalid_argument(std::string(who) + ": requires a common theta");
}

QosSpec qos_of(const SystemParams& params, int j) {
  return QosSpec{params.theta[static_cast<std::size_t>(j)], params.frame_duration_s,
                 params.bandwidth_hz};
}

// ln(1 + SINR_j) per user for one decoding order at a channel state.
void ln1p_sinr(std::span<const double> z, const std::vector<double>& snr,
               const DecodingOrder& order, std::vector<double>& out) {
  const std::size_t m = snr.size();
  out.assign(m, 0.0);
  double interference = 0.0;
  for (std::size_t k = m; k-- > 0;) {
    const int j = order.pi[k];
    const double num = snr[static_cast<std::size_t>(j)] * z[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(j)] = std::log1p(num / (1.0 + interference));
    interference += num;
  }
}

// The two log-MGF integrals phi1, phi2 of the optimal switching scheme at K;
// also the ingredients of the stationarity identity and fixed-point check.
std::pair<Estimate, Estimate> compute_phis(const SwitchingCurve& curve,
                                           const std::vector<FadingModel>& models,
                                           double beta, const ExpectOptions& opt) {
  const double s1 = curve.snr1, s2 = curve.snr2;
  auto u1_interfered = [=](double z1, double z2) {
    return std::pow(1.0 + s1 * z1 / (1.0 + s2 * z2), -beta);
  };
  auto u1_free = [=](double z1, double /*z2*/) { return std::pow(1.0 + s1 * z1, -beta); };
  auto u2_interfered = [=](double z1, double z2) {
    return std::pow(1.0 + s2 * z2 / (1.0 + s1 * z1), -beta);
  };
  auto u2_free = [=](double /*z1*/, double z2) { return std::pow(1.0 + s2 * z2, -beta); };

  if (opt.method == Method::MonteCarlo) {
    // One sample stream, per-sample order decision (common random numbers
    // keep the (C1, C2) pair consistent).
    Estimate p1 = expect_2d(
        [&](double z1, double z2) {
          return curve.decode_user1_first(z1, z2) ? u1_interfered(z1, z2) : u1_free(z1, z2);
        },
        models[0], models[1], opt);
    Estimate p2 = expect_2d(
        [&](double z1, double z2) {
          return curve.decode_user1_first(z1, z2) ? u2_free(z1, z2) : u2_interfered(z1, z2);
        },
        models[0], models[1], opt);
    return {p1, p2};
  }

  auto g = [&](double v) { return curve.g(v); };
  if (curve.z1_parameterized) {
    // Inner variable z2; z2 <= g(z1) decodes (1,2): user 1 first.
    Estimate p1 = expect_2d_split(u1_interfered, u1_free, g, models[0], models[1], opt);
    Estimate p2 = expect_2d_split(u2_free, u2_interfered, g, models[0], models[1], opt);
    return {p1, p2};
  }
  // z1 = g(z2): inner variable z1; z1 <= g(z2) decodes (2,1): user 1 last.
  auto swap2 = [](auto f) {
    return [f](double z2, double z1) { return f(z1, z2); };
  };
  Estimate p1 =
      expect_2d_split(swap2(u1_free), swap2(u1_interfered), g, models[1], models[0], opt);
  Estimate p2 =
      expect_2d_split(swap2(u2_interfered), swap2(u2_free), g, models[1], models[0], opt);
  return {p1, p2};
}

std::pair<double, double> capacities_from_phis(const std::pair<Estimate, Estimate>& phis,
                                               const SystemParams& params,
                                               std::pair<double, double>* std_errors) {
  const double theta_tb =
      params.theta[0] * params.frame_duration_s * params.bandwidth_hz;
  if (!(phis.first.value > 0.0) || !(phis.second.value > 0.0))
    throw UnderflowError("region.capacities_from_phis");
  if (std_errors)
    *std_errors = {phis.first.std_error / (phis.first.value * theta_tb),
                   phis.second.std_error / (phis.second.value * theta_tb)};
  return {-std::log(phis.first.value) / theta_tb, -std::log(phis.second.value) / theta_tb};
}

// Suboptimal capacities for M >= 3: lambda/z sorted decoding, Monte Carlo.
std::vector<double> suboptimal_capacities_m(const std::vector<double>& lambda,
                                            const SystemParams& params,
                                            const std::vector<FadingModel>& models,
                                            const ExpectOptions& opt) {
  const std::size_t m = lambda.size();
  const long n = opt.budget > 0 ? opt.budget : 1'000'000;
  std::mt19937_64 eng(opt.seed);
  std::vector<double> z(m), lnsinr(m), mean(m, 0.0);
  std::vector<int> users(m);
  DecodingOrder order;
  order.pi.resize(m);
  for (long i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) z[j] = models[j].quantile(uniform01(eng));
    std::iota(users.begin(), users.end(), 0);
    // Decode in ascending lambda/z; z = 0 pushes a user to the end (its
    // ratio is +inf: it would be decoded last but its rate is 0 anyway).
    std::stable_sort(users.begin(), users.end(), [&](int a, int b) {
      const double ra = z[static_cast<std::size_t>(a)] > 0.0
                            ? lambda[static_cast<std::size_t>(a)] / z[static_cast<std::size_t>(a)]
                            : kInf;
      const double rb = z[static_cast<std::size_t>(b)] > 0.0
                            ? lambda[static_cast<std::size_t>(b)] / z[static_cast<std::size_t>(b)]
                            : kInf;
      return ra < rb;
    });
    order.pi.assign(users.begin(), users.end());
    ln1p_sinr(z, params.snr, order, lnsinr);
    for (std::size_t j = 0; j < m; ++j) {
      const double v = std::exp(-params.beta(static_cast<int>(j)) * lnsinr[j]);
      mean[j] += (v - mean[j]) / static_cast<double>(i + 1);
    }
  }
  std::vector<double> caps(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double theta_tb = params.theta[j] * params.frame_duration_s * params.bandwidth_hz;
    caps[j] = -std::log(mean[j]) / theta_tb;
  }
  return caps;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  const double step = (std::log(hi) - std::log(lo)) / (n - 1);
  for (int i = 0; i < n; ++i) out.push_back(std::exp(std::log(lo) + step * i));
  return out;
}

// Interior compositions of `resolution` units into `parts` positive weights.
void simplex_grid(int parts, int resolution, std::vector<double>& current,
                  std::vector<std::vector<double>>& out) {
  if (parts == 1) {
    current.push_back(static_cast<double>(resolution) / 1.0);  // filled below
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int r = 1; r <= resolution - (parts - 1); ++r) {
    current.push_back(static_cast<double>(r));
    simplex_grid(parts - 1, resolution - r, current, out);
    current.pop_back();
  }
}

std::vector<std::vector<double>> interior_simplex(int parts, int resolution) {
  std::vector<std::vector<double>> raw;
  std::vector<double> cur;
  simplex_grid(parts, resolution, cur, raw);
  for (auto& w : raw) {
    double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) x /= sum;
  }
  return raw;
}

double golden_max(const std::function<double(double)>& f, double a, double b, double tol) {
  const double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > tol; ++it) {
    if (f1 < f2) {
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
  return f1 > f2 ? f1 : f2;
}

void certify_concavity(RegionBoundary& boundary) {
  if (boundary.points.size() < 5) {
    boundary.warning = "grid too coarse to certify concavity";
    boundary.concave = false;
    boundary.max_second_difference = 0.0;
    return;
  }
  boundary.concave =
      is_concave_frontier(boundary.points, 1e-6, &boundary.max_second_difference);
}

}  // namespace

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Optimal: return "optimal";
    case Strategy::Suboptimal: return "suboptimal";
    case Strategy::FixedTimeshare: return "fixed-timeshare";
    case Strategy::Tdma: return "tdma";
  }
  return "?";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "optimal") return Strategy::Optimal;
  if (name == "suboptimal") return Strategy::Suboptimal;
  if (name == "fixed-timeshare") return Strategy::FixedTimeshare;
  if (name == "tdma") return Strategy::Tdma;
  throw std::invalid_argument("unknown strategy: " + name);
}

double SwitchingCurve::g(double v) const {
  if (z1_parameterized) {
    const double k_pow = std::exp(std::log(K) / beta);
    return ((1.0 + snr1 * v) * k_pow - 1.0) / snr2;
  }
  const double k_pow = std::exp(-std::log(K) / beta);
  return ((1.0 + snr2 * v) * k_pow - 1.0) / snr1;
}

bool SwitchingCurve::decode_user1_first(double z1, double z2) const {
  if (K == 0.0) return false;
  if (std::isinf(K)) return true;
  // Order (1,2) iff ((1+snr1 z1)/(1+snr2 z2))^{-beta} <= K, tie included.
  const double lhs_log = -beta * (std::log1p(snr1 * z1) - std::log1p(snr2 * z2));
  return lhs_log <= std::log(K);
}

SwitchingCurve optimal_boundary_g(double K, double snr1, double snr2, double beta) {
  if (!(K >= 0.0)) throw std::invalid_argument("optimal_boundary_g: K must be >= 0");
  if (!(beta > 0.0)) throw std::invalid_argument("optimal_boundary_g: beta must be > 0");
  SwitchingCurve c;
  c.K = K;
  c.snr1 = snr1;
  c.snr2 = snr2;
  c.beta = beta;
  c.z1_parameterized = K >= 1.0;
  return c;
}

std::pair<double, double> scheduled_capacities(double K, const SystemParams& params,
                                               const std::vector<FadingModel>& models,
                                               const ExpectOptions& opt,
                                               std::pair<double, double>* std_errors) {
  require_two_users_common_theta(params, models, "region.scheduled_capacities");
  if (!(K >= 0.0))
    throw std::invalid_argument("region.scheduled_capacities: K must be >= 0");

  if (K == 0.0 || std::isinf(K)) {
    const DecodingOrder order = K == 0.0 ? DecodingOrder{{1, 0}} : DecodingOrder{{0, 1}};
    std::vector<double> se;
    const auto caps = fixed_order_capacities(order, params, models, opt, &se);
    if (std_errors) *std_errors = {se[0], se[1]};
    return {caps[0], caps[1]};
  }
  const SwitchingCurve curve =
      optimal_boundary_g(K, params.snr[0], params.snr[1], params.beta(0));
  ExpectOptions eopt = opt;
  eopt.where = "region.scheduled_capacities";
  const auto phis = compute_phis(curve, models, params.beta(0), eopt);
  return capacities_from_phis(phis, params, std_errors);
}

std::pair<double, double> suboptimal_capacities(double lambda1, const SystemParams& params,
                                                const std::vector<FadingModel>& models,
                                                const ExpectOptions& opt,
                                                std::pair<double, double>* std_errors) {
  require_two_users_common_theta(params, models, "region.suboptimal_capacities");
  if (!(lambda1 > 0.0 && lambda1 < 1.0))
    throw std::invalid_argument("region.suboptimal_capacities: lambda1 must be in (0,1)");

  // Decode (1,2) iff lambda1/z1 <= lambda2/z2, i.e. z2 <= (lambda2/lambda1) z1.
  const double slope = (1.0 - lambda1) / lambda1;
  const double s1 = params.snr[0], s2 = params.snr[1];
  const double beta = params.beta(0);
  ExpectOptions eopt = opt;
  eopt.where = "region.suboptimal_capacities";

  auto u1_interfered = [=](double z1, double z2) {
    return std::pow(1.0 + s1 * z1 / (1.0 + s2 * z2), -beta);
  };
  auto u1_free = [=](double z1, double /*z2*/) { return std::pow(1.0 + s1 * z1, -beta); };
  auto u2_interfered = [=](double z1, double z2) {
    return std::pow(1.0 + s2 * z2 / (1.0 + s1 * z1), -beta);
  };
  auto u2_free = [=](double /*z1*/, double z2) { return std::pow(1.0 + s2 * z2, -beta); };
  auto g = [=](double z1) { return slope * z1; };

  Estimate p1, p2;
  if (opt.method == Method::MonteCarlo) {
    p1 = expect_2d(
        [&](double z1, double z2) {
          return z2 <= g(z1) ? u1_interfered(z1, z2) : u1_free(z1, z2);
        },
        models[0], models[1], eopt);
    p2 = expect_2d(
        [&](double z1, double z2) {
          return z2 <= g(z1) ? u2_free(z1, z2) : u2_interfered(z1, z2);
        },
        models[0], models[1], eopt);
  } else {
    p1 = expect_2d_split(u1_interfered, u1_free, g, models[0], models[1], eopt);
    p2 = expect_2d_split(u2_free, u2_interfered, g, models[0], models[1], eopt);
  }
  return capacities_from_phis({p1, p2}, params, std_errors);
}

std::vector<double> timeshare_capacities(const std::vector<double>& tau,
                                         const SystemParams& params,
                                         const std::vector<FadingModel>& models,
                                         const ExpectOptions& opt,
                                         std::vector<double>* std_errors) {
  params.validate();
  require_models(params, models, "region.timeshare_capacities");
  const int m = params.num_users();
  const auto orders = DecodingOrder::all(m);
  if (tau.size() != orders.size())
    throw std::invalid_argument("region.timeshare_capacities: tau must have M! entries");
  double sum = 0.0;
  for (double t : tau) {
    if (t < 0.0)
      throw std::invalid_argument("region.timeshare_capacities: tau must be >= 0");
    sum += t;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("region.timeshare_capacities: tau must sum to 1");

  ExpectOptions eopt = opt;
  eopt.where = "region.timeshare_capacities";
  std::vector<double> caps(static_cast<std::size_t>(m));
  if (std_errors) std_errors->assign(static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j < m; ++j) {
    const double beta_j = params.beta(j);
    const Estimate e = expect_nd(
        [&](std::span<const double> z) {
          // Rates of the active orders combine inside a single exponent.
          thread_local std::vector<double> lnsinr;
          double acc = 0.0;
          for (std::size_t mi = 0; mi < orders.size(); ++mi) {
            if (tau[mi] == 0.0) continue;
            ln1p_sinr(z, params.snr, orders[mi], lnsinr);
            acc += tau[mi] * lnsinr[static_cast<std::size_t>(j)];
          }
          return std::exp(-beta_j * acc);
        },
        models, eopt);
    const double theta_tb =
        params.theta[static_cast<std::size_t>(j)] * params.frame_duration_s *
        params.bandwidth_hz;
    if (!(e.value > 0.0)) throw UnderflowError(eopt.where);
    caps[static_cast<std::size_t>(j)] = -std::log(e.value) / theta_tb;
    if (std_errors)
      (*std_errors)[static_cast<std::size_t>(j)] = e.std_error / (e.value * theta_tb);
  }
  return caps;
}

std::vector<double> fixed_order_capacities(const DecodingOrder& order,
                                           const SystemParams& params,
                                           const std::vector<FadingModel>& models,
                                           const ExpectOptions& opt,
                                           std::vector<double>* std_errors) {
  params.validate();
  require_models(params, models, "region.fixed_order_capacities");
  order.validate();
  const int m = params.num_users();
  if (order.num_users() != m)
    throw std::invalid_argument("region.fixed_order_capacities: order size mismatch");

  ExpectOptions eopt = opt;
  eopt.where = "region.fixed_order_capacities";
  std::vector<double> caps(static_cast<std::size_t>(m));
  if (std_errors) std_errors->assign(static_cast<std::size_t>(m), 0.0);
  for (int k = 0; k < m; ++k) {
    const int j = order.pi[static_cast<std::size_t>(k)];
    // User pi[k] sees only users decoded after it; integrate over that
    // subspace only.
    std::vector<FadingModel> sub;
    std::vector<double> sub_snr;
    for (int l = k; l < m; ++l) {
      const int u = order.pi[static_cast<std::size_t>(l)];
      sub.push_back(models[static_cast<std::size_t>(u)]);
      sub_snr.push_back(params.snr[static_cast<std::size_t>(u)]);
    }
    const double beta_j = params.beta(j);
    const Estimate e = expect_nd(
        [&](std::span<const double> z) {
          double interference = 0.0;
          for (std::size_t i = 1; i < z.size(); ++i) interference += sub_snr[i] * z[i];
          return std::pow(1.0 + sub_snr[0] * z[0] / (1.0 + interference), -beta_j);
        },
        sub, eopt);
    const double theta_tb = params.theta[static_cast<std::size_t>(j)] *
                            params.frame_duration_s * params.bandwidth_hz;
    if (!(e.value > 0.0)) throw UnderflowError(eopt.where);
    caps[static_cast<std::size_t>(j)] = -std::log(e.value) / theta_tb;
    if (std_errors)
      (*std_errors)[static_cast<std::size_t>(j)] = e.std_error / (e.value * theta_tb);
  }
  return caps;
}

std::vector<double> tdma_capacities(const std::vector<double>& delta,
                                    const SystemParams& params,
                                    const std::vector<FadingModel>& models,
                                    const ExpectOptions& opt) {
  params.validate();
  require_models(params, models, "region.tdma_capacities");
  if (delta.size() != static_cast<std::size_t>(params.num_users()))
    throw std::invalid_argument("region.tdma_capacities: delta size mismatch");
  double sum = 0.0;
  for (double d : delta) sum += d;
  if (sum > 1.0 + 1e-9)
    throw std::invalid_argument("region.tdma_capacities: delta must sum to <= 1");

  std::vector<double> caps(delta.size());
  for (std::size_t j = 0; j < delta.size(); ++j)
    caps[j] = effective_capacity_tdma(delta[j], params.snr[j], models[j],
                                      qos_of(params, static_cast<int>(j)), opt)
                  .c_normalized;
  return caps;
}

StationarityCheck stationarity_residual(double K, const SystemParams& params,
                                        const std::vector<FadingModel>& models,
                                        const ExpectOptions& opt) {
  require_two_users_common_theta(params, models, "region.stationarity_residual");
  if (!(K > 0.0))
    throw std::invalid_argument("region.stationarity_residual: K must be > 0");

  const double beta = params.beta(0);
  const SwitchingCurve curve = optimal_boundary_g(K, params.snr[0], params.snr[1], beta);

  StationarityCheck check;
  const double z_hi =
      (curve.z1_parameterized ? models[0] : models[1]).upper_limit();
  constexpr int kGrid = 257;
  for (int i = 0; i < kGrid; ++i) {
    const double v = z_hi * static_cast<double>(i) / (kGrid - 1);
    const double gv = curve.g(v);
    if (!(gv >= 0.0)) continue;
    const double z1 = curve.z1_parameterized ? v : gv;
    const double z2 = curve.z1_parameterized ? gv : v;
    const double ratio_pow =
        std::exp(-beta * (std::log1p(curve.snr1 * z1) - std::log1p(curve.snr2 * z2)));
    check.max_residual = std::max(check.max_residual, std::abs(ratio_pow - K));
  }

  ExpectOptions eopt = opt;
  eopt.where = "region.stationarity_residual";
  const auto phis = compute_phis(curve, models, beta, eopt);
  check.phi1 = phis.first.value;
  check.phi2 = phis.second.value;
  check.implied_lambda1 = check.phi1 / (check.phi1 + K * check.phi2);
  return check;
}

double fixed_point_K(double lambda1, const SystemParams& params,
                     const std::vector<FadingModel>& models, double tol,
                     const ExpectOptions& opt) {
  require_two_users_common_theta(params, models, "region.fixed_point_K");
  if (!(lambda1 > 0.0 && lambda1 < 1.0))
    throw std::invalid_argument("region.fixed_point_K: lambda1 must be in (0,1)");

  const double beta = params.beta(0);
  ExpectOptions eopt = opt;
  eopt.where = "region.fixed_point_K";

  auto map = [&](double k) {
    const SwitchingCurve curve = optimal_boundary_g(k, params.snr[0], params.snr[1], beta);
    const auto phis = compute_phis(curve, models, beta, eopt);
    return (1.0 - lambda1) * phis.first.value / (lambda1 * phis.second.value);
  };

  double x = 0.0;  // ln K, start at K = 1
  double damping = 0.5;
  double prev_step = 0.0;
  for (int it = 0; it < 300; ++it) {
    const double k = std::exp(std::clamp(x, std::log(1e-8), std::log(1e8)));
    const double step = std::log(map(k)) - x;
    if (std::abs(step) <= tol) return k;
    if (it > 0 && step * prev_step < 0.0) damping = std::max(0.05, damping * 0.5);
    x += damping * step;
    prev_step = step;
  }
  throw NumericError("region.fixed_point_K",
                     "damped iteration did not converge for lambda1 = " +
                         std::to_string(lambda1));
}

RegionBoundary trace_region(Strategy strategy, const SystemParams& params,
                            const std::vector<FadingModel>& models,
                            const TraceOptions& topt) {
  params.validate();
  require_models(params, models, "region.trace_region");
  const int m = params.num_users();
  const int n = std::max(topt.grid_size, 2);
  ExpectOptions eopt = topt.expect;

  RegionBoundary boundary;
  boundary.strategy = strategy;

  switch (strategy) {
    case Strategy::Optimal: {
      if (m != 2)
        throw std::invalid_argument(
            "region.trace_region: optimal order switching is two-user only");
      boundary.param_name = "K";
      std::vector<double> ks =
          topt.sweep.empty() ? logspace(topt.k_min, topt.k_max, n) : topt.sweep;
      std::sort(ks.begin(), ks.end());
      if (ks.empty() || ks.front() > 0.0) ks.insert(ks.begin(), 0.0);
      if (!std::isinf(ks.back())) ks.push_back(kInf);
      boundary.points.resize(ks.size());
      detail::parallel_for(
          ks.size(),
          [&](std::size_t i) {
            const auto [c1, c2] = scheduled_capacities(ks[i], params, models, eopt);
            boundary.points[i] = BoundaryPoint{ks[i], {ks[i]}, {c1, c2}};
          },
          topt.threads);
      break;
    }
    case Strategy::Suboptimal: {
      boundary.param_name = "lambda1";
      if (m == 2) {
        std::vector<double> ls;
        // lambda1 = 0 decodes user 1 first everywhere; 1 decodes it last.
        if (topt.sweep.empty()) {
          ls.push_back(0.0);
          for (int i = 1; i <= n; ++i) ls.push_back(static_cast<double>(i) / (n + 1));
          ls.push_back(1.0);
        } else {
          ls = topt.sweep;
          std::sort(ls.begin(), ls.end());
          if (ls.front() > 0.0) ls.insert(ls.begin(), 0.0);
          if (ls.back() < 1.0) ls.push_back(1.0);
        }
        boundary.points.resize(ls.size());
        detail::parallel_for(
            ls.size(),
            [&](std::size_t i) {
              const double l = ls[i];
              std::pair<double, double> c;
              if (l == 0.0) {
                const auto caps =
                    fixed_order_capacities(DecodingOrder{{0, 1}}, params, models, eopt);
                c = {caps[0], caps[1]};
              } else if (l == 1.0) {
                const auto caps =
                    fixed_order_capacities(DecodingOrder{{1, 0}}, params, models, eopt);
                c = {caps[0], caps[1]};
              } else {
                c = suboptimal_capacities(l, params, models, eopt);
              }
              boundary.points[i] = BoundaryPoint{l, {l, 1.0 - l}, {c.first, c.second}};
            },
            topt.threads);
      } else {
        // M >= 3: lambda simplex grid, Monte Carlo expectations.
        boundary.warning = "M >= 3 suboptimal sweep uses Monte Carlo expectations";
        int resolution = 2;
        while (static_cast<int>(interior_simplex(m, resolution + 1).size()) <= n)
          ++resolution;
        auto lambdas = interior_simplex(m, resolution);
        boundary.points.resize(lambdas.size());
        detail::parallel_for(
            lambdas.size(),
            [&](std::size_t i) {
              ExpectOptions mopt = eopt;
              mopt.seed = derive_seed(eopt.seed, i);
              const auto caps = suboptimal_capacities_m(lambdas[i], params, models, mopt);
              boundary.points[i] = BoundaryPoint{lambdas[i][0], lambdas[i], caps};
            },
            topt.threads);
      }
      break;
    }
    case Strategy::FixedTimeshare: {
      boundary.param_name = "tau1";
      const auto orders = DecodingOrder::all(m);
      std::vector<std::vector<double>> taus;
      if (m == 2) {
        if (topt.sweep.empty()) {
          for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / (n - 1);
            taus.push_back({t, 1.0 - t});
          }
        } else {
          for (double t : topt.sweep) taus.push_back({t, 1.0 - t});
        }
      } else {
        int resolution = static_cast<int>(orders.size());
        while (static_cast<int>(interior_simplex(static_cast<int>(orders.size()),
                                                 resolution + 1)
                                    .size()) <= n)
          ++resolution;
        taus = interior_simplex(static_cast<int>(orders.size()), resolution);
        // Vertices are the fixed orders; include them.
        for (std::size_t v = 0; v < orders.size(); ++v) {
          std::vector<double> tau(orders.size(), 0.0);
          tau[v] = 1.0;
          taus.push_back(tau);
        }
      }
      boundary.points.resize(taus.size());
      detail::parallel_for(
          taus.size(),
          [&](std::size_t i) {
            const auto caps = timeshare_capacities(taus[i], params, models, eopt);
            boundary.points[i] = BoundaryPoint{taus[i][0], taus[i], caps};
          },
          topt.threads);
      break;
    }
    case Strategy::Tdma: {
      boundary.param_name = "delta1";
      std::vector<std::vector<double>> deltas;
      if (m == 2) {
        if (topt.sweep.empty()) {
          for (int i = 1; i <= n; ++i) {
            const double d = static_cast<double>(i) / (n + 1);
            deltas.push_back({d, 1.0 - d});
          }
        } else {
          for (double d : topt.sweep) deltas.push_back({d, 1.0 - d});
        }
      } else {
        int resolution = m;
        while (static_cast<int>(interior_simplex(m, resolution + 1).size()) <= n)
          ++resolution;
        deltas = interior_simplex(m, resolution);
      }
      boundary.points.resize(deltas.size());
      detail::parallel_for(
          deltas.size(),
          [&](std::size_t i) {
            const auto caps = tdma_capacities(deltas[i], params, models, eopt);
            boundary.points[i] = BoundaryPoint{deltas[i][0], deltas[i], caps};
          },
          topt.threads);
      break;
    }
  }

  if (m == 2) certify_concavity(boundary);
  return boundary;
}

SumRateTable sum_rate_sweep(const std::vector<Strategy>& strategies,
                            const std::vector<double>& theta_grid,
                            const SystemParams& params,
                            const std::vector<FadingModel>& models,
                            const TraceOptions& topt) {
  params.validate();
  require_models(params, models, "region.sum_rate_sweep");
  for (std::size_t i = 1; i < theta_grid.size(); ++i)
    if (!(theta_grid[i] > theta_grid[i - 1]))
      throw std::invalid_argument("region.sum_rate_sweep: theta grid must ascend");
  for (double t : theta_grid)
    if (!(t > 0.0))
      throw std::invalid_argument("region.sum_rate_sweep: theta must be > 0");

  SumRateTable table;
  table.theta = theta_grid;
  table.strategies = strategies;
  table.sums.assign(theta_grid.size(),
                    std::vector<double>(strategies.size(), 0.0));
  table.tdma_best_delta.assign(theta_grid.size(), 0.0);

  const int m = params.num_users();
  // The sweep applies a common theta to every user.
  detail::parallel_for(
      theta_grid.size(),
      [&](std::size_t ti) {
        SystemParams p = params;
        p.theta.assign(static_cast<std::size_t>(m), theta_grid[ti]);
        TraceOptions inner = topt;
        inner.threads = 1;  // outer loop owns the parallelism

        for (std::size_t si = 0; si < strategies.size(); ++si) {
          const Strategy s = strategies[si];
          if (s == Strategy::Tdma && m == 2) {
            auto sum_at = [&](double d1) {
              const auto caps = tdma_capacities({d1, 1.0 - d1}, p, models, inner.expect);
              return caps[0] + caps[1];
            };
            // Grid pass, then golden-section refinement around the best cell.
            const int ng = std::max(inner.grid_size, 9);
            double best = -kInf, best_d = 0.5;
            for (int i = 1; i <= ng; ++i) {
              const double d = static_cast<double>(i) / (ng + 1);
              const double v = sum_at(d);
              if (v > best) {
                best = v;
                best_d = d;
              }
            }
            const double lo = std::max(1e-4, best_d - 1.0 / (ng + 1));
            const double hi = std::min(1.0 - 1e-4, best_d + 1.0 / (ng + 1));
            table.sums[ti][si] = std::max(best, golden_max(sum_at, lo, hi, 1e-6));
            table.tdma_best_delta[ti] = best_d;
          } else {
            const RegionBoundary b = trace_region(s, p, models, inner);
            double best = -kInf;
            for (const auto& pt : b.points) {
              const double sum =
                  std::accumulate(pt.capacities.begin(), pt.capacities.end(), 0.0);
              best = std::max(best, sum);
            }
            table.sums[ti][si] = best;
          }
        }
      },
      topt.threads);
  return table;
}

bool is_concave_frontier(const std::vector<BoundaryPoint>& points, double tol,
                         double* max_violation) {
  std::vector<std::pair<double, double>> xy;
  xy.reserve(points.size());
  for (const auto& p : points) {
    if (p.capacities.size() != 2)
      throw std::invalid_argument("is_concave_frontier: two-user boundaries only");
    xy.emplace_back(p.capacities[0], p.capacities[1]);
  }
  std::sort(xy.begin(), xy.end());

  double scale = 1e-12;
  for (const auto& [x, y] : xy) scale = std::max(scale, std::abs(x));

  // Collapse near-duplicate abscissae, keeping the max ordinate.
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : xy) {
    if (!pts.empty() && std::abs(p.first - pts.back().first) < 1e-9 * scale)
      pts.back().second = std::max(pts.back().second, p.second);
    else
      pts.push_back(p);
  }

  double worst = 0.0;
  double prev_slope = kInf;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double slope =
        (pts[i].second - pts[i - 1].second) / (pts[i].first - pts[i - 1].first);
    if (prev_slope < kInf) worst = std::max(worst, slope - prev_slope);
    prev_slope = slope;
  }
  if (max_violation) *max_violation = worst;
  return worst <= tol;
}

double frontier_ray_radius(const RegionBoundary& boundary, double angle_rad) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : boundary.points) {
    if (p.capacities.size() != 2)
      throw std::invalid_argument("frontier_ray_radius: two-user boundaries only");
    if (p.capacities[0] >= 0.0 && p.capacities[1] >= 0.0)
      pts.emplace_back(p.capacities[0], p.capacities[1]);
  }
  if (pts.empty()) return 0.0;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return std::atan2(a.second, a.first) < std::atan2(b.second, b.first);
  });
  // Close the frontier with drops to both axes.
  std::vector<std::pair<double, double>> poly;
  poly.emplace_back(pts.front().first, 0.0);
  poly.insert(poly.end(), pts.begin(), pts.end());
  poly.emplace_back(0.0, pts.back().second);

  const double c = std::cos(angle_rad), s = std::sin(angle_rad);
  double best = 0.0;
  for (std::size_t i = 1; i < poly.size(); ++i) {
    const auto [x1, y1] = poly[i - 1];
    const auto [x2, y2] = poly[i];
    const double dx = x2 - x1, dy = y2 - y1;
    const double den = dx * s - dy * c;
    if (std::abs(den) < 1e-300) continue;
    const double u = (y1 * c - x1 * s) / den;
    if (u < -1e-9 || u > 1.0 + 1e-9) continue;
    const double px = x1 + u * dx, py = y1 + u * dy;
    best = std::max(best, px * c + py * s);
  }
  return best;
}

}  // namespace effcap
