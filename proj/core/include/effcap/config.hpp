#ifndef EFFCAP_CONFIG_HPP
#define EFFCAP_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "effcap/fading.hpp"
#include "effcap/rates.hpp"

namespace effcap {

/// Grid specification: "linspace:a,b,n", "logspace:a,b,n" or an explicit
/// comma list of values.
struct GridSpec {
  enum class Kind { Linear, Log, Explicit };
  Kind kind = Kind::Linear;
  double lo = 0.0, hi = 1.0;
  int count = 0;
  std::vector<double> values;  // Explicit only

  std::vector<double> expand() const;
  std::string to_string() const;
  static GridSpec parse(const std::string& text, const std::string& field);
};

/// Parsed, validated run configuration. SNR is stored linear; dB input is
/// converted once at parse time (snr_linear = 10^(dB/10)).
struct RunConfig {
  std::string command;  // region | sumrate | power | validate | effcap

  double T = 2e-3;   // frame duration, s
  double B = 1e5;    // bandwidth, Hz
  std::vector<double> snr = {1.0, 1.0};      // linear
  std::vector<double> theta = {0.01, 0.01};  // 1/bit
  std::string fading = "rayleigh";           // rayleigh | tabulated:<csv path>

  std::vector<std::string> strategies = {"optimal", "suboptimal", "fixed-timeshare",
                                         "tdma"};
  std::string method = "quadrature";  // quadrature | monte-carlo
  long budget = 0;
  std::uint64_t seed = 12345;
  int threads = 0;

  GridSpec k_grid{GridSpec::Kind::Log, 1e-4, 1e4, 81, {}};
  GridSpec lambda_grid{GridSpec::Kind::Linear, 0.02, 0.98, 49, {}};
  GridSpec tau_grid{GridSpec::Kind::Linear, 0.0, 1.0, 41, {}};
  GridSpec delta_grid{GridSpec::Kind::Linear, 0.02, 0.98, 49, {}};
  GridSpec theta_grid{GridSpec::Kind::Log, 1e-4, 3.0, 21, {}};

  std::vector<int> order = {2, 1};  // decoding order, 1-based user ids
  double calib_tol = 1e-8;

  std::size_t frames = 10'000'000;
  double arrival_scale = 1.0;        // arrival = scale * C(theta)
  double arrival_bits_per_sec = 0.0; // explicit arrival; overrides scale if > 0
  std::size_t trace_stride = 0;      // validate: write every k-th frame (0 = off)

  /// Throws ConfigError naming the offending field.
  void validate() const;

  SystemParams system_params() const;
  std::vector<FadingModel> fading_models() const;
  Method expect_method() const;
  DecodingOrder decoding_order() const;  // converted to 0-based

  /// Canonical "cfg.key = value" echo lines; parsing them back yields an
  /// equivalent config.
  std::vector<std::string> echo_lines() const;
};

/// Parses a flat key = value config file ('#' comments allowed).
RunConfig parse_config_file(const std::filesystem::path& path);

/// Applies one "key=value" override (the CLI --set flag).
void apply_override(RunConfig& config, const std::string& key_value);

/// Rebuilds a config from the "# cfg.key = value" metadata lines of an
/// output file (the round-trip contract).
RunConfig parse_metadata_echo(const std::filesystem::path& csv_path);

}  // namespace effcap

#endif
