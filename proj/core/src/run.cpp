#include "effcap/run.hpp"

#include <algorithm>
#include <cmath>

#include "effcap/csv.hpp"
#include "effcap/power_control.hpp"
#include "effcap/queue_sim.hpp"
#include "effcap/region.hpp"
#include "effcap/version.hpp"

namespace effcap {
namespace {

std::vector<std::string> base_metadata(const RunConfig& config) {
  std::vector<std::string> lines;
  lines.push_back(std::string("effcap-mac ") + kVersion);
  lines.push_back(std::string("rng = ") + kRngDescription);
  const auto echo = config.echo_lines();
  lines.insert(lines.end(), echo.begin(), echo.end());
  return lines;
}

ExpectOptions expect_options(const RunConfig& config) {
  ExpectOptions opt;
  opt.method = config.expect_method();
  opt.budget = config.budget;
  opt.seed = config.seed;
  return opt;
}

TraceOptions trace_options(const RunConfig& config) {
  TraceOptions topt;
  topt.expect = expect_options(config);
  topt.threads = config.threads;
  return topt;
}

void check_unit_interval(const std::vector<double>& values, const char* field) {
  for (double v : values)
    if (!(v > 0.0 && v < 1.0))
      throw ConfigError(field, "sweep values must lie strictly inside (0, 1)");
}

void run_region(const RunConfig& config, const std::filesystem::path& out_dir,
                std::ostream& log) {
  const SystemParams params = config.system_params();
  const auto models = config.fading_models();

  std::vector<std::string> meta = base_metadata(config);
  std::vector<RegionBoundary> boundaries;
  for (const auto& name : config.strategies) {
    const Strategy s = strategy_from_name(name);
    TraceOptions topt = trace_options(config);
    if (params.num_users() == 2) {
      switch (s) {
        case Strategy::Optimal: topt.sweep = config.k_grid.expand(); break;
        case Strategy::Suboptimal:
          topt.sweep = config.lambda_grid.expand();
          check_unit_interval(topt.sweep, "lambda_grid");
          break;
        case Strategy::FixedTimeshare: topt.sweep = config.tau_grid.expand(); break;
        case Strategy::Tdma:
          topt.sweep = config.delta_grid.expand();
          check_unit_interval(topt.sweep, "delta_grid");
          break;
      }
    }
    RegionBoundary b = trace_region(s, params, models, topt);
    meta.push_back("concavity." + name + " = " +
                   (b.concave ? "certified" : "violation") +
                   " (max second difference " +
                   CsvWriter::format(b.max_second_difference) + ")");
    if (!b.warning.empty()) meta.push_back("warning." + name + " = " + b.warning);
    boundaries.push_back(std::move(b));
  }

  std::vector<std::string> columns = {"strategy", "param_name", "param"};
  for (int j = 1; j <= params.num_users(); ++j) columns.push_back("C" + std::to_string(j));

  CsvWriter csv(out_dir / "region.csv", meta, columns);
  for (const auto& b : boundaries) {
    for (const auto& p : b.points) {
      std::vector<std::string> cells = {strategy_name(b.strategy), b.param_name,
                                        CsvWriter::format(p.param)};
      for (double c : p.capacities) cells.push_back(CsvWriter::format(c));
      csv.raw_row(cells);
    }
  }
  log << "region: wrote " << (out_dir / "region.csv").string() << "\n";
}

void run_sumrate(const RunConfig& config, const std::filesystem::path& out_dir,
                 std::ostream& log) {
  const SystemParams params = config.system_params();
  const auto models = config.fading_models();

  std::vector<Strategy> strategies;
  for (const auto& name : config.strategies) strategies.push_back(strategy_from_name(name));
  const std::vector<double> theta_grid = config.theta_grid.expand();

  TraceOptions topt = trace_options(config);
  topt.grid_size = std::max({config.k_grid.count, config.lambda_grid.count,
                             config.tau_grid.count, config.delta_grid.count, 33});
  const SumRateTable table = sum_rate_sweep(strategies, theta_grid, params, models, topt);

  std::vector<std::string> columns = {"theta"};
  for (Strategy s : strategies) columns.push_back("sum_" + strategy_name(s));
  const bool has_tdma =
      std::find(strategies.begin(), strategies.end(), Strategy::Tdma) != strategies.end();
  if (has_tdma) columns.push_back("tdma_best_delta");

  CsvWriter csv(out_dir / "sumrate.csv", base_metadata(config), columns);
  for (std::size_t ti = 0; ti < table.theta.size(); ++ti) {
    std::vector<double> row = {table.theta[ti]};
    row.insert(row.end(), table.sums[ti].begin(), table.sums[ti].end());
    if (has_tdma) row.push_back(table.tdma_best_delta[ti]);
    csv.row(row);
  }
  log << "sumrate: wrote " << (out_dir / "sumrate.csv").string() << "\n";
}

void run_power(const RunConfig& config, const std::filesystem::path& out_dir,
               std::ostream& log) {
  const SystemParams params = config.system_params();
  const auto models = config.fading_models();
  const DecodingOrder order = config.decoding_order();
  const ExpectOptions opt = expect_options(config);
  const int m = params.num_users();

  const PowerPolicy policy = calibrate(order, params, models, config.calib_tol, opt);
  const auto caps = powered_vertex_capacities(policy, params, models, opt);
  const auto fixed_caps = fixed_order_capacities(order, params, models, opt);

  std::vector<std::string> meta = base_metadata(config);
  for (int j = 0; j < m; ++j) {
    meta.push_back("alpha_" + std::to_string(j + 1) + " = " +
                   CsvWriter::format(policy.alpha[static_cast<std::size_t>(j)]));
    meta.push_back("mean_power_" + std::to_string(j + 1) + " = " +
                   CsvWriter::format(average_power(policy, j, models, opt)));
    meta.push_back("capacity_" + std::to_string(j + 1) + " = " +
                   CsvWriter::format(caps[static_cast<std::size_t>(j)]) + " bits/s/Hz");
    meta.push_back("fixed_power_capacity_" + std::to_string(j + 1) + " = " +
                   CsvWriter::format(fixed_caps[static_cast<std::size_t>(j)]) +
                   " bits/s/Hz");
  }

  std::vector<std::string> columns;
  for (int j = 1; j <= m; ++j) columns.push_back("z" + std::to_string(j));
  for (int j = 1; j <= m; ++j) columns.push_back("mu" + std::to_string(j));
  CsvWriter csv(out_dir / "power_policy.csv", meta, columns);

  if (m == 1) {
    for (int i = 0; i <= 200; ++i) {
      const double z = 8.0 * models[0].mean_gain() * i / 200.0;
      const auto mu = policy_mu({z}, policy);
      csv.row({z, mu[0]});
    }
  } else if (m == 2) {
    for (int i1 = 0; i1 <= 40; ++i1) {
      for (int i2 = 0; i2 <= 40; ++i2) {
        const double z1 = 6.0 * models[0].mean_gain() * i1 / 40.0;
        const double z2 = 6.0 * models[1].mean_gain() * i2 / 40.0;
        const auto mu = policy_mu({z1, z2}, policy);
        csv.row({z1, z2, mu[0], mu[1]});
      }
    }
  } else {
    // High-dimensional grids get unwieldy; tabulate seeded random states.
    std::mt19937_64 eng(config.seed);
    for (int i = 0; i < 1000; ++i) {
      std::vector<double> row;
      GainVector z;
      for (int j = 0; j < m; ++j) z.push_back(models[static_cast<std::size_t>(j)].quantile(uniform01(eng)));
      const auto mu = policy_mu(z, policy);
      row.insert(row.end(), z.begin(), z.end());
      row.insert(row.end(), mu.begin(), mu.end());
      csv.row(row);
    }
  }
  log << "power: wrote " << (out_dir / "power_policy.csv").string() << "\n";
}

void run_validate(const RunConfig& config, const std::filesystem::path& out_dir,
                  std::ostream& log) {
  const SystemParams params = config.system_params();
  const auto models = config.fading_models();
  const ExpectOptions opt = expect_options(config);
  const int m = params.num_users();

  // Per-user capacity under the fixed decoding order (single user: its own
  // effective capacity); arrival defaults to arrival_scale times that.
  std::vector<double> caps;
  DecodingOrder order;
  if (m == 1) {
    order = DecodingOrder::identity(1);
    caps = {single_user_capacity(params.snr[0], models[0],
                                 QosSpec{params.theta[0], params.frame_duration_s,
                                         params.bandwidth_hz},
                                 opt)
                .c_normalized};
  } else {
    order = config.order.size() == static_cast<std::size_t>(m)
                ? config.decoding_order()
                : DecodingOrder::identity(m);
    caps = fixed_order_capacities(order, params, models, opt);
  }

  std::vector<std::string> meta = base_metadata(config);
  std::vector<std::string> columns = {"user",     "arrival_bits_per_sec",
                                      "theta",    "theta_hat",
                                      "ci_low",   "ci_high",
                                      "q_lo",     "q_hi",
                                      "levels",   "exceedances",
                                      "unstable", "mean_service_bits"};
  CsvWriter csv(out_dir / "tailfit.csv", meta, columns);

  for (int j = 0; j < m; ++j) {
    const double arrival = config.arrival_bits_per_sec > 0.0
                               ? config.arrival_bits_per_sec
                               : config.arrival_scale *
                                     caps[static_cast<std::size_t>(j)] *
                                     params.bandwidth_hz;
    auto rate_law = [&, j](std::span<const double> z) {
      const GainVector zv(z.begin(), z.end());
      return vertex_rates(zv, params.snr, order, params.bandwidth_hz)[static_cast<std::size_t>(j)];
    };
    const QueueTrace trace =
        simulate(rate_law, models, arrival, params.frame_duration_s, config.frames,
                 derive_seed(config.seed, static_cast<std::uint64_t>(j)));
    const DecayEstimate est = estimate_decay(trace);
    csv.row({static_cast<double>(j + 1), arrival, params.theta[static_cast<std::size_t>(j)],
             est.theta_hat, est.ci_low, est.ci_high, est.q_lo, est.q_hi,
             static_cast<double>(est.levels_used),
             static_cast<double>(est.exceedances_at_q_lo),
             trace.unstable_warning ? 1.0 : 0.0, trace.mean_service_bits});

    if (config.trace_stride > 0) {
      CsvWriter tcsv(out_dir / ("queue_trace_user" + std::to_string(j + 1) + ".csv"),
                     base_metadata(config), {"frame", "queue_bits"});
      for (std::size_t i = 0; i < trace.queue_bits.size(); i += config.trace_stride)
        tcsv.row({static_cast<double>(i), trace.queue_bits[i]});
    }
  }
  log << "validate: wrote " << (out_dir / "tailfit.csv").string() << "\n";
}

void run_effcap(const RunConfig& config, const std::filesystem::path& out_dir,
                std::ostream& log) {
  const SystemParams params = config.system_params();
  const auto models = config.fading_models();
  const ExpectOptions opt = expect_options(config);
  const int m = params.num_users();
  const DecodingOrder order = m == 1 ? DecodingOrder::identity(1) : config.decoding_order();

  std::vector<std::string> columns = {"theta"};
  for (int j = 1; j <= m; ++j) columns.push_back("C" + std::to_string(j));
  CsvWriter csv(out_dir / "effcap.csv", base_metadata(config), columns);

  for (double theta : config.theta_grid.expand()) {
    SystemParams p = params;
    p.theta.assign(static_cast<std::size_t>(m), theta);
    const auto caps = fixed_order_capacities(order, p, models, opt);
    std::vector<double> row = {theta};
    row.insert(row.end(), caps.begin(), caps.end());
    csv.row(row);
  }
  log << "effcap: wrote " << (out_dir / "effcap.csv").string() << "\n";
}

}  // namespace

void run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log) {
  config.validate();
  std::filesystem::create_directories(out_dir);

  if (config.command == "region") run_region(config, out_dir, log);
  else if (config.command == "sumrate") run_sumrate(config, out_dir, log);
  else if (config.command == "power") run_power(config, out_dir, log);
  else if (config.command == "validate") run_validate(config, out_dir, log);
  else if (config.command == "effcap") run_effcap(config, out_dir, log);
  else throw ConfigError("command", "unknown command " + config.command);
}

}  // namespace effcap
