#ifndef EFFCAP_FADING_HPP
#define EFFCAP_FADING_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "effcap/errors.hpp"
#include "effcap/quadrature.hpp"

namespace effcap {

/// Vector of per-user channel power gains z_j = |h_j|^2 (dimensionless).
using GainVector = std::vector<double>;

/// Estimation method used for an expectation.
enum class Method { Quadrature, MonteCarlo };

/// An expectation estimate. std_error is 0 for quadrature results.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Per-user distribution of the channel power gain z >= 0.
///
/// Rayleigh fading enters every formula only through z, which is then
/// exponential; the unit-mean variant has density e^{-z}. Arbitrary
/// distributions are supported through a tabulated density on [0, z_max].
class FadingModel {
 public:
  enum class Kind { RayleighUnitMean, GeneralTabulated };

  /// Unit-mean exponential gain (Rayleigh fading with E{z} = 1).
  static FadingModel rayleigh();

  /// Gain with the given density on [0, z_max]. The density must integrate
  /// to 1 within 1e-8, otherwise std::invalid_argument is thrown.
  static FadingModel tabulated(std::function<double(double)> density, double z_max);

  Kind kind() const { return kind_; }
  double mean_gain() const { return mean_gain_; }
  double density(double z) const;

  /// Integration truncation point: tail mass beyond it is < 1e-10
  /// (far smaller for the Rayleigh case).
  double upper_limit() const { return z_hi_; }

  /// Inverse CDF, used for reproducible sampling. u in [0, 1).
  double quantile(double u) const;

 private:
  FadingModel() = default;

  Kind kind_ = Kind::RayleighUnitMean;
  double mean_gain_ = 1.0;
  double z_hi_ = 46.0;
  std::function<double(double)> density_;
  // Tabulated-only: cumulative distribution on a uniform grid for quantile().
  std::vector<double> cdf_grid_;
  double cdf_step_ = 0.0;
};

/// SplitMix64 stream derivation: decorrelated seeds for parallel shards.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform double in [0, 1) from a 64-bit engine draw.
double uniform01(std::mt19937_64& eng);

/// n i.i.d. gains. Identical (seed, n) reproduce the identical sequence
/// bit for bit. n = 0 yields an empty sequence.
std::vector<double> sample(const FadingModel& model, std::uint64_t seed, std::size_t n);

struct ExpectOptions {
  Method method = Method::Quadrature;
  /// MonteCarlo: sample count (default 10^6). Quadrature: cap on adaptive
  /// subintervals (0 = default).
  long budget = 0;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  std::string where = "fading.expect";
};

/// E{f(z)} for z ~ model.
Estimate expect_1d(const std::function<double(double)>& f, const FadingModel& model,
                   const ExpectOptions& opt = {});

/// E{f(z1, z2)} for independent z1 ~ m1, z2 ~ m2.
Estimate expect_2d(const std::function<double(double, double)>& f, const FadingModel& m1,
                   const FadingModel& m2, const ExpectOptions& opt = {});

/// Expectation of a piecewise integrand split along a curve in the
/// (outer, inner) plane:
///
///   E{ f_lo(zo, zi) * 1[zi <= g(zo)] + f_hi(zo, zi) * 1[zi > g(zo)] }
///
/// The inner integral is split at g(zo) exactly, never by smoothing the
/// indicator, so each piece stays smooth for the quadrature. The tie
/// zi == g(zo) belongs to f_lo (measure zero; fixed for Monte Carlo
/// determinism).
Estimate expect_2d_split(const std::function<double(double, double)>& f_lo,
                         const std::function<double(double, double)>& f_hi,
                         const std::function<double(double)>& boundary,
                         const FadingModel& outer, const FadingModel& inner,
                         const ExpectOptions& opt = {});

/// E{f(z)} over an independent gain vector, one model per component.
/// Quadrature uses the adaptive rule for 1 and 2 dimensions and a tensor
/// Gauss rule beyond that; Monte Carlo works for any dimension.
Estimate expect_nd(const std::function<double(std::span<const double>)>& f,
                   const std::vector<FadingModel>& models, const ExpectOptions& opt = {});

}  // namespace effcap

#endif
