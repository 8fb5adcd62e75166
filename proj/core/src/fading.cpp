#include "effcap/fading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace effcap {
namespace {

constexpr double kRayleighZhi = 46.0;  // exp(-46) ~ 1e-20 tail mass
constexpr long kDefaultMcBudget = 1'000'000;

quad::AdaptiveOptions adaptive_opts(const ExpectOptions& opt, double rel_tol = 1e-11) {
  quad::AdaptiveOptions a;
  a.rel_tol = rel_tol;
  a.abs_tol = 1e-15;
  if (opt.budget > 0) a.max_intervals = static_cast<int>(opt.budget);
  a.where = opt.where;
  return a;
}

// Geometric ladder of breakpoints near the left endpoint, where every
// capacity integrand concentrates as the QoS exponent grows.
quad::AdaptiveOptions left_edge_opts(const ExpectOptions& opt, double a, double b,
                                     double rel_tol = 1e-11) {
  quad::AdaptiveOptions o = adaptive_opts(opt, rel_tol);
  const double width = b - a;
  for (int k = 8; k >= 1; --k) o.breakpoints.push_back(a + width * std::pow(10.0, -k));
  return o;
}

Estimate mc_mean(const std::function<double(std::mt19937_64&)>& draw, long n,
                 std::uint64_t seed, const std::string& where) {
  if (n <= 0) n = kDefaultMcBudget;
  std::mt19937_64 eng(seed);
  double mean = 0.0, m2 = 0.0;
  for (long i = 0; i < n; ++i) {
    double v = draw(eng);
    if (!std::isfinite(v)) throw NumericError(where, "non-finite Monte Carlo sample");
    double d = v - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (v - mean);
  }
  Estimate e;
  e.value = mean;
  e.std_error = n > 1 ? std::sqrt(m2 / (static_cast<double>(n) * (n - 1))) : 0.0;
  return e;
}

// Tensor rule for one axis with the density folded into the weights.
struct AxisRule {
  std::vector<double> z;
  std::vector<double> w;
};

AxisRule axis_rule(const FadingModel& m, int n) {
  AxisRule r;
  if (m.kind() == FadingModel::Kind::RayleighUnitMean) {
    quad::Rule gl = quad::gauss_laguerre(n);
    r.z = std::move(gl.nodes);
    r.w = std::move(gl.weights);  // weight e^{-z} is the density itself
  } else {
    // Composite Gauss-Legendre panels over [0, z_max], density explicit.
    const int panels = 8;
    quad::Rule leg = quad::gauss_legendre(std::max(4, n / panels));
    const double width = m.upper_limit() / panels;
    for (int p = 0; p < panels; ++p) {
      const double a = p * width;
      for (int i = 0; i < leg.size(); ++i) {
        const double z = a + 0.5 * width * (leg.nodes[i] + 1.0);
        r.z.push_back(z);
        r.w.push_back(0.5 * width * leg.weights[i] * m.density(z));
      }
    }
  }
  return r;
}

}  // namespace

FadingModel FadingModel::rayleigh() {
  FadingModel m;
  m.kind_ = Kind::RayleighUnitMean;
  m.mean_gain_ = 1.0;
  m.z_hi_ = kRayleighZhi;
  return m;
}

FadingModel FadingModel::tabulated(std::function<double(double)> density, double z_max) {
  if (!density) throw std::invalid_argument("FadingModel::tabulated: null density");
  if (!(z_max > 0.0) || !std::isfinite(z_max))
    throw std::invalid_argument("FadingModel::tabulated: z_max must be positive and finite");

  FadingModel m;
  m.kind_ = Kind::GeneralTabulated;
  m.z_hi_ = z_max;
  m.density_ = std::move(density);

  quad::AdaptiveOptions opt;
  opt.rel_tol = 1e-12;
  opt.where = "fading.tabulated";
  const double mass = quad::integrate([&](double z) { return m.density_(z); }, 0.0, z_max, opt);
  if (std::abs(mass - 1.0) > 1e-8)
    throw std::invalid_argument("FadingModel::tabulated: density integrates to " +
                                std::to_string(mass) + ", expected 1 within 1e-8");
  m.mean_gain_ =
      quad::integrate([&](double z) { return z * m.density_(z); }, 0.0, z_max, opt);

  // Cumulative grid for quantile(): fine uniform grid, Simpson per step.
  const int n_grid = 8192;
  m.cdf_step_ = z_max / n_grid;
  m.cdf_grid_.resize(n_grid + 1);
  m.cdf_grid_[0] = 0.0;
  for (int i = 1; i <= n_grid; ++i) {
    const double a = (i - 1) * m.cdf_step_;
    const double b = i * m.cdf_step_;
    const double simpson =
        (m.density_(a) + 4.0 * m.density_(0.5 * (a + b)) + m.density_(b)) * (b - a) / 6.0;
    m.cdf_grid_[i] = m.cdf_grid_[i - 1] + simpson;
  }
  const double total = m.cdf_grid_[n_grid];
  for (double& c : m.cdf_grid_) c /= total;
  return m;
}

double FadingModel::density(double z) const {
  if (z < 0.0) return 0.0;
  if (kind_ == Kind::RayleighUnitMean) return std::exp(-z);
  return z <= z_hi_ ? density_(z) : 0.0;
}

double FadingModel::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0 - 1e-16);
  if (kind_ == Kind::RayleighUnitMean) return -std::log1p(-u);
  auto it = std::lower_bound(cdf_grid_.begin(), cdf_grid_.end(), u);
  if (it == cdf_grid_.begin()) return 0.0;
  const std::size_t i = static_cast<std::size_t>(it - cdf_grid_.begin());
  const double c0 = cdf_grid_[i - 1], c1 = cdf_grid_[i];
  const double frac = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
  return (static_cast<double>(i - 1) + frac) * cdf_step_;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

double uniform01(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

std::vector<double> sample(const FadingModel& model, std::uint64_t seed, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  std::mt19937_64 eng(seed);
  for (std::size_t i = 0; i < n; ++i) out.push_back(model.quantile(uniform01(eng)));
  return out;
}

Estimate expect_1d(const std::function<double(double)>& f, const FadingModel& model,
                   const ExpectOptions& opt) {
  if (opt.method == Method::MonteCarlo)
    return mc_mean([&](std::mt19937_64& eng) { return f(model.quantile(uniform01(eng))); },
                   opt.budget, opt.seed, opt.where);
  Estimate e;
  e.value = quad::integrate([&](double z) { return f(z) * model.density(z); }, 0.0,
                            model.upper_limit(),
                            left_edge_opts(opt, 0.0, model.upper_limit()));
  return e;
}

Estimate expect_2d(const std::function<double(double, double)>& f, const FadingModel& m1,
                   const FadingModel& m2, const ExpectOptions& opt) {
  if (opt.method == Method::MonteCarlo)
    return mc_mean(
        [&](std::mt19937_64& eng) {
          const double z1 = m1.quantile(uniform01(eng));
          const double z2 = m2.quantile(uniform01(eng));
          return f(z1, z2);
        },
        opt.budget, opt.seed, opt.where);

  quad::AdaptiveOptions outer = left_edge_opts(opt, 0.0, m1.upper_limit(), 1e-10);
  quad::AdaptiveOptions inner = left_edge_opts(opt, 0.0, m2.upper_limit(), 1e-11);
  Estimate e;
  e.value = quad::integrate(
      [&](double z1) {
        const double inner_val = quad::integrate(
            [&](double z2) { return f(z1, z2) * m2.density(z2); }, 0.0, m2.upper_limit(),
            inner);
        return inner_val * m1.density(z1);
      },
      0.0, m1.upper_limit(), outer);
  return e;
}

Estimate expect_2d_split(const std::function<double(double, double)>& f_lo,
                         const std::function<double(double, double)>& f_hi,
                         const std::function<double(double)>& boundary,
                         const FadingModel& outer, const FadingModel& inner,
                         const ExpectOptions& opt) {
  if (opt.method == Method::MonteCarlo)
    return mc_mean(
        [&](std::mt19937_64& eng) {
          const double zo = outer.quantile(uniform01(eng));
          const double zi = inner.quantile(uniform01(eng));
          return zi <= boundary(zo) ? f_lo(zo, zi) : f_hi(zo, zi);
        },
        opt.budget, opt.seed, opt.where);

  quad::AdaptiveOptions outer_opt = left_edge_opts(opt, 0.0, outer.upper_limit(), 1e-10);
  const double zi_hi = inner.upper_limit();
  Estimate e;
  e.value = quad::integrate(
      [&](double zo) {
        const double split = std::clamp(boundary(zo), 0.0, zi_hi);
        double acc = 0.0;
        if (split > 0.0)
          acc += quad::integrate(
              [&](double zi) { return f_lo(zo, zi) * inner.density(zi); }, 0.0, split,
              left_edge_opts(opt, 0.0, split, 1e-11));
        if (split < zi_hi)
          acc += quad::integrate(
              [&](double zi) { return f_hi(zo, zi) * inner.density(zi); }, split, zi_hi,
              left_edge_opts(opt, split, zi_hi, 1e-11));
        return acc * outer.density(zo);
      },
      0.0, outer.upper_limit(), outer_opt);
  return e;
}

Estimate expect_nd(const std::function<double(std::span<const double>)>& f,
                   const std::vector<FadingModel>& models, const ExpectOptions& opt) {
  const std::size_t dim = models.size();
  if (dim == 0) throw NumericError(opt.where, "expect_nd needs at least one model");

  if (opt.method == Method::MonteCarlo) {
    std::vector<double> z(dim);
    return mc_mean(
        [&](std::mt19937_64& eng) {
          for (std::size_t j = 0; j < dim; ++j) z[j] = models[j].quantile(uniform01(eng));
          return f(z);
        },
        opt.budget, opt.seed, opt.where);
  }

  if (dim == 1)
    return expect_1d([&](double z) { return f(std::span<const double>(&z, 1)); }, models[0],
                     opt);
  if (dim == 2)
    return expect_2d(
        [&](double z1, double z2) {
          const double z[2] = {z1, z2};
          return f(std::span<const double>(z, 2));
        },
        models[0], models[1], opt);

  // Tensor Gauss rule. Node count per axis shrinks with dimension to keep
  // the total evaluation count bounded.
  int n_axis;
  switch (dim) {
    case 3: n_axis = 32; break;
    case 4: n_axis = 16; break;
    case 5: n_axis = 8; break;
    case 6: n_axis = 6; break;
    default:
      throw NumericError(opt.where,
                         "tensor quadrature supports at most 6 dimensions; use MonteCarlo");
  }
  std::vector<AxisRule> axes;
  axes.reserve(dim);
  for (const auto& m : models) axes.push_back(axis_rule(m, n_axis));

  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> z(dim);
  Estimate e;
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < dim; ++j) {
      z[j] = axes[j].z[idx[j]];
      w *= axes[j].w[idx[j]];
    }
    const double v = f(z);
    if (!std::isfinite(v)) throw NonFiniteIntegrand(opt.where, z[0]);
    e.value += w * v;
    std::size_t j = 0;
    while (j < dim && ++idx[j] == axes[j].z.size()) idx[j++] = 0;
    if (j == dim) break;
  }
  return e;
}

}  // namespace effcap
