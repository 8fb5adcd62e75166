#include "effcap/effective_capacity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace effcap {

namespace {
constexpr double kLn2 = 0.6931471805599453;

EffCapResult from_log_expectation(double ln_e, const QosSpec& qos, const ExpectOptions& opt,
                                  double se_of_ln = 0.0) {
  EffCapResult r;
  const double theta_t = qos.theta * qos.frame_duration_s;
  r.c_bits_per_sec = -ln_e / theta_t;
  r.c_normalized = r.c_bits_per_sec / qos.bandwidth_hz;
  r.method = opt.method;
  r.budget = opt.budget;
  r.std_error = se_of_ln / (theta_t * qos.bandwidth_hz);
  return r;
}

// Log-domain expectation over a tensor rule: LSE_i(ln w_i + ln f_i).
double log_expect_tensor(const std::function<double(std::span<const double>)>& ln_f,
                         const std::vector<FadingModel>& models, const std::string& where) {
  struct Axis {
    std::vector<double> z, ln_w;
  };
  std::vector<Axis> axes;
  for (const auto& m : models) {
    Axis a;
    if (m.kind() == FadingModel::Kind::RayleighUnitMean) {
      // 128 nodes keeps the smallest weights above the double underflow edge.
      quad::Rule gl = quad::gauss_laguerre(128);
      a.z = gl.nodes;
      for (double w : gl.weights)
        a.ln_w.push_back(w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity());
    } else {
      quad::Rule leg = quad::gauss_legendre(24);
      const int panels = 8;
      const double width = m.upper_limit() / panels;
      for (int p = 0; p < panels; ++p) {
        for (int i = 0; i < leg.size(); ++i) {
          const double z = p * width + 0.5 * width * (leg.nodes[i] + 1.0);
          const double w = 0.5 * width * leg.weights[i] * m.density(z);
          a.z.push_back(z);
          a.ln_w.push_back(w > 0.0 ? std::log(w)
                                   : -std::numeric_limits<double>::infinity());
        }
      }
    }
    axes.push_back(std::move(a));
  }

  const std::size_t dim = axes.size();
  if (dim > 3)
    throw NumericError(where, "log-sum-exp path supports at most 3 dimensions");
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> z(dim);
  std::vector<double> terms;
  while (true) {
    double lw = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      z[j] = axes[j].z[idx[j]];
      lw += axes[j].ln_w[idx[j]];
    }
    terms.push_back(lw + ln_f(z));
    std::size_t j = 0;
    while (j < dim && ++idx[j] == axes[j].z.size()) idx[j++] = 0;
    if (j == dim) break;
  }
  return quad::log_sum_exp(terms);
}

}  // namespace

double QosSpec::beta() const { return theta * frame_duration_s * bandwidth_hz / kLn2; }

void QosSpec::validate() const {
  if (!(theta > 0.0) || !(frame_duration_s > 0.0) || !(bandwidth_hz > 0.0))
    throw std::invalid_argument("QosSpec: theta, T and B must all be > 0");
  if (!std::isfinite(beta())) throw std::invalid_argument("QosSpec: beta is not finite");
}

EffCapResult effective_capacity(
    const std::function<double(std::span<const double>)>& rate_law_bits_per_sec,
    const std::vector<FadingModel>& models, const QosSpec& qos, const ExpectOptions& opt,
    ExpPath path) {
  qos.validate();
  const double theta_t = qos.theta * qos.frame_duration_s;
  ExpectOptions eopt = opt;
  eopt.where = "effective_capacity";

  if (path == ExpPath::LogSumExp) {
    if (opt.method == Method::MonteCarlo) {
      std::mt19937_64 eng(opt.seed);
      const long n = opt.budget > 0 ? opt.budget : 1'000'000;
      std::vector<double> z(models.size());
      std::vector<double> terms;
      terms.reserve(static_cast<std::size_t>(n));
      for (long i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < models.size(); ++j)
          z[j] = models[j].quantile(uniform01(eng));
        terms.push_back(-theta_t * rate_law_bits_per_sec(z));
      }
      const double ln_e = quad::log_sum_exp(terms) - std::log(static_cast<double>(n));
      return from_log_expectation(ln_e, qos, eopt);
    }
    const double ln_e = log_expect_tensor(
        [&](std::span<const double> z) { return -theta_t * rate_law_bits_per_sec(z); },
        models, eopt.where);
    return from_log_expectation(ln_e, qos, eopt);
  }

  const Estimate e = expect_nd(
      [&](std::span<const double> z) {
        const double r = rate_law_bits_per_sec(z);
        return std::exp(-theta_t * r);
      },
      models, eopt);
  if (!(e.value > 0.0)) throw UnderflowError("effective_capacity");
  return from_log_expectation(std::log(e.value), qos, eopt, e.std_error / e.value);
}

EffCapResult single_user_capacity(double snr, const FadingModel& model, const QosSpec& qos,
                                  const ExpectOptions& opt) {
  qos.validate();
  if (!(snr > 0.0)) throw std::invalid_argument("single_user_capacity: snr must be > 0");
  const double beta = qos.beta();
  ExpectOptions eopt = opt;
  eopt.where = "effective_capacity.single_user";
  const Estimate e =
      expect_1d([&](double z) { return std::pow(1.0 + snr * z, -beta); }, model, eopt);
  if (!(e.value > 0.0)) throw UnderflowError(eopt.where);
  return from_log_expectation(std::log(e.value), qos, eopt, e.std_error / e.value);
}

EffCapResult effective_capacity_tdma(double delta, double snr, const FadingModel& model,
                                     const QosSpec& qos, const ExpectOptions& opt) {
  qos.validate();
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("effective_capacity_tdma: delta must be in (0, 1]");
  if (!(snr > 0.0)) throw std::invalid_argument("effective_capacity_tdma: snr must be > 0");
  const double exponent = delta * qos.beta();
  ExpectOptions eopt = opt;
  eopt.where = "effective_capacity.tdma";
  const Estimate e = expect_1d(
      [&](double z) { return std::pow(1.0 + snr / delta * z, -exponent); }, model, eopt);
  if (!(e.value > 0.0)) throw UnderflowError(eopt.where);
  return from_log_expectation(std::log(e.value), qos, eopt, e.std_error / e.value);
}

}  // namespace effcap
