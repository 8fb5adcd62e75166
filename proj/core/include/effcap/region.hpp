#ifndef EFFCAP_REGION_HPP
#define EFFCAP_REGION_HPP

#include <string>
#include <utility>
#include <vector>

#include "effcap/effective_capacity.hpp"
#include "effcap/fading.hpp"
#include "effcap/rates.hpp"

namespace effcap {

/// Boundary-tracing strategies for the fixed-power throughput region.
enum class Strategy { Optimal, Suboptimal, FixedTimeshare, Tdma };

std::string strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

/// One traced boundary point: the generating parameter vector (K, lambda,
/// tau or delta weights) and the per-user effective capacities in bits/s/Hz.
struct BoundaryPoint {
  double param = 0.0;                // primary scalar (first component)
  std::vector<double> gen_params;    // full generator parameter vector
  std::vector<double> capacities;    // bits/s/Hz, one per user
};

struct RegionBoundary {
  Strategy strategy = Strategy::Optimal;
  std::string param_name;  // "K" | "lambda1" | "tau1" | "delta1"
  std::vector<BoundaryPoint> points;
  bool concave = false;              // discrete concavity certification
  double max_second_difference = 0.0;
  std::string warning;               // set when the grid is too coarse to certify
};

/// The two-user optimal order-switching curve for a given K (common theta).
/// For K >= 1 the curve is z2 = g(z1); for K < 1 the exact role swap
/// z1 = g(z2) is used instead of evaluating a negative branch. Both branches
/// are the level set ((1+snr1 z1)/(1+snr2 z2))^{-beta} = K, and users are
/// decoded in the order (1,2) -- user 1 first -- on the side where that
/// ratio is below K. The tie is assigned to order (1,2).
struct SwitchingCurve {
  double K = 1.0;
  double snr1 = 1.0, snr2 = 1.0;
  double beta = 1.0;
  bool z1_parameterized = true;  // true: z2 = g(z1) (K >= 1)

  double g(double v) const;
  bool decode_user1_first(double z1, double z2) const;
};

SwitchingCurve optimal_boundary_g(double K, double snr1, double snr2, double beta);

/// Two-user capacities (bits/s/Hz) under optimal switching at parameter K.
/// K = 0 and K = inf reduce to the fixed orders (2,1) and (1,2).
/// Requires a common theta. For Monte Carlo estimates, std_errors (if given)
/// receives the delta-method standard error of each capacity.
std::pair<double, double> scheduled_capacities(double K, const SystemParams& params,
                                               const std::vector<FadingModel>& models,
                                               const ExpectOptions& opt = {},
                                               std::pair<double, double>* std_errors = nullptr);

/// Two-user capacities under the lambda/z suboptimal rule at weight lambda1.
std::pair<double, double> suboptimal_capacities(double lambda1, const SystemParams& params,
                                                const std::vector<FadingModel>& models,
                                                const ExpectOptions& opt = {},
                                                std::pair<double, double>* std_errors = nullptr);

/// Per-user capacities when the M! fixed orders are time shared with weights
/// tau (lexicographic order of DecodingOrder::all). The convex-combined rate
/// sits inside a single exponent per frame; a vertex tau reduces to the
/// fixed-order capacities.
std::vector<double> timeshare_capacities(const std::vector<double>& tau,
                                         const SystemParams& params,
                                         const std::vector<FadingModel>& models,
                                         const ExpectOptions& opt = {},
                                         std::vector<double>* std_errors = nullptr);

/// Capacities of one fixed decoding order (a vertex of the region).
std::vector<double> fixed_order_capacities(const DecodingOrder& order,
                                           const SystemParams& params,
                                           const std::vector<FadingModel>& models,
                                           const ExpectOptions& opt = {},
                                           std::vector<double>* std_errors = nullptr);

/// Per-user TDMA capacities for time fractions delta (sum <= 1).
std::vector<double> tdma_capacities(const std::vector<double>& delta,
                                    const SystemParams& params,
                                    const std::vector<FadingModel>& models,
                                    const ExpectOptions& opt = {});

/// Stationarity diagnostics of the optimal curve at K: the max residual of
/// ((1+snr1 z1)/(1+snr2 g(z1)))^{-beta} - K over a z grid, the priority
/// weight lambda1 = phi1/(phi1 + K phi2) implied by K, and the two
/// log-MGF integrals phi1, phi2.
struct StationarityCheck {
  double max_residual = 0.0;
  double implied_lambda1 = 0.0;
  double phi1 = 0.0;
  double phi2 = 0.0;
};
StationarityCheck stationarity_residual(double K, const SystemParams& params,
                                        const std::vector<FadingModel>& models,
                                        const ExpectOptions& opt = {});

/// Damped fixed-point iteration on K = (1-lambda1) phi1(K) / (lambda1 phi2(K)).
/// Cross-checks the K sweep; tol applies to the relative step in K.
double fixed_point_K(double lambda1, const SystemParams& params,
                     const std::vector<FadingModel>& models, double tol = 1e-8,
                     const ExpectOptions& opt = {});

struct TraceOptions {
  int grid_size = 81;       // points per sweep (endpoints added where exact)
  double k_min = 1e-4;
  double k_max = 1e4;
  /// Explicit sweep values (K, lambda1, tau1 or delta1 for two users);
  /// overrides grid_size/k_min/k_max when non-empty. Ignored for M >= 3.
  std::vector<double> sweep;
  ExpectOptions expect;
  int threads = 0;          // 0 = hardware concurrency
};

/// Traces one strategy's Pareto frontier. Points are ordered by the sweep
/// parameter; the discrete concavity certificate is filled in.
RegionBoundary trace_region(Strategy strategy, const SystemParams& params,
                            const std::vector<FadingModel>& models,
                            const TraceOptions& topt = {});

/// Sum-rate table: per theta and per strategy, the maximum of sum_j C_j over
/// the strategy's parameter grid. TDMA is maximized over delta by a grid
/// pass plus golden-section refinement.
struct SumRateTable {
  std::vector<double> theta;
  std::vector<Strategy> strategies;
  std::vector<std::vector<double>> sums;  // [theta index][strategy index]
  std::vector<double> tdma_best_delta;    // per theta; 0 when TDMA not requested
};
SumRateTable sum_rate_sweep(const std::vector<Strategy>& strategies,
                            const std::vector<double>& theta_grid,
                            const SystemParams& params,
                            const std::vector<FadingModel>& models,
                            const TraceOptions& topt = {});

/// Discrete concavity test: with points sorted by C1, consecutive chord
/// slopes of C2 vs C1 must be nonincreasing within tol.
bool is_concave_frontier(const std::vector<BoundaryPoint>& points, double tol,
                         double* max_violation = nullptr);

/// Radius at which a ray from the origin at the given angle (radians, in
/// (0, pi/2)) leaves the region traced by a two-user boundary. The frontier
/// is closed with vertical/horizontal drops to the axes.
double frontier_ray_radius(const RegionBoundary& boundary, double angle_rad);

}  // namespace effcap

#endif
