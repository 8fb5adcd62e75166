#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "effcap/config.hpp"
#include "effcap/run.hpp"

using namespace effcap;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("effcap_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& dir, const std::string& name,
                    const std::string& contents) {
  const fs::path p = dir / name;
  std::ofstream out(p);
  out << contents;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("grid specs parse, expand and round trip") {
  const GridSpec lin = GridSpec::parse("linspace:0,1,5", "g");
  const auto vals = lin.expand();
  REQUIRE(vals.size() == 5);
  CHECK(vals.front() == 0.0);
  CHECK(vals.back() == 1.0);
  CHECK(GridSpec::parse(lin.to_string(), "g").expand() == vals);

  const GridSpec log = GridSpec::parse("logspace:0.01,100,5", "g");
  const auto lv = log.expand();
  CHECK(lv[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(GridSpec::parse(log.to_string(), "g").expand()[2] == doctest::Approx(1.0));

  const GridSpec exp = GridSpec::parse("0.1,0.5,0.9", "g");
  CHECK(exp.expand() == std::vector<double>{0.1, 0.5, 0.9});

  CHECK_THROWS_AS(GridSpec::parse("cubic:0,1,5", "g"), ConfigError);
  CHECK_THROWS_AS(GridSpec::parse("linspace:0,1", "g"), ConfigError);
}

TEST_CASE("config files parse with dB conversion applied once") {
  const fs::path dir = temp_dir("cfg");
  const fs::path cfg = write_file(dir, "a.cfg",
                                  "# comment\n"
                                  "T = 0.002\n"
                                  "B = 1e5\n"
                                  "snr_db = 10, 0\n"
                                  "theta = 0.01, 0.01\n"
                                  "seed = 777\n"
                                  "method = monte-carlo\n");
  const RunConfig c = parse_config_file(cfg);
  CHECK(c.snr[0] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(c.snr[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.seed == 777);
  CHECK(c.expect_method() == Method::MonteCarlo);

  CHECK_THROWS_AS(parse_config_file(dir / "missing.cfg"), ConfigError);
  const fs::path bad = write_file(dir, "bad.cfg", "snr == oops\n");
  CHECK_THROWS_AS(parse_config_file(bad), ConfigError);
  const fs::path unk = write_file(dir, "unk.cfg", "warp_factor = 9\n");
  CHECK_THROWS_AS(parse_config_file(unk), ConfigError);
}

TEST_CASE("overrides and validation produce field-level errors") {
  RunConfig c;
  c.command = "region";
  apply_override(c, "snr=2,3");
  CHECK(c.snr == std::vector<double>{2.0, 3.0});
  CHECK_THROWS_AS(apply_override(c, "nonsense"), ConfigError);

  c.T = -1.0;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "T");
  }
  c.T = 2e-3;
  c.command = "warp";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.command = "region";
  c.strategies = {"optimal", "bogus"};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.strategies = {"optimal"};
  c.command = "power";
  c.order = {1, 1};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.order = {2, 1};
  c.validate();

  // optimal order switching is a two-user construction
  c.command = "region";
  c.snr = {1.0};
  c.theta = {0.01};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.strategies = {"tdma"};
  c.order = {1};
  c.validate();
}

TEST_CASE("metadata echo re-parses to an equivalent config") {
  RunConfig c;
  c.command = "region";
  c.snr = {10.0, 1.0};
  c.theta = {0.02, 0.02};
  c.seed = 31415;
  c.method = "monte-carlo";
  c.budget = 50'000;
  c.k_grid = GridSpec::parse("logspace:0.001,1000,7", "k_grid");
  c.strategies = {"tdma", "fixed-timeshare"};

  const fs::path dir = temp_dir("echo");
  {
    std::ofstream out(dir / "echo.csv");
    for (const auto& line : c.echo_lines()) out << "# " << line << "\n";
    out << "col\n0\n";
  }
  const RunConfig back = parse_metadata_echo(dir / "echo.csv");
  CHECK(back.command == c.command);
  CHECK(back.snr == c.snr);
  CHECK(back.theta == c.theta);
  CHECK(back.seed == c.seed);
  CHECK(back.method == c.method);
  CHECK(back.budget == c.budget);
  CHECK(back.strategies == c.strategies);
  CHECK(back.k_grid.to_string() == c.k_grid.to_string());
  CHECK(back.frames == c.frames);
}

TEST_CASE("region command writes labeled frontiers deterministically") {
  RunConfig c;
  c.command = "region";
  c.method = "monte-carlo";
  c.budget = 20'000;
  c.seed = 2;
  c.strategies = {"fixed-timeshare", "tdma"};
  c.tau_grid = GridSpec::parse("linspace:0,1,5", "tau_grid");
  c.delta_grid = GridSpec::parse("linspace:0.2,0.8,4", "delta_grid");

  const fs::path out1 = temp_dir("region1");
  const fs::path out2 = temp_dir("region2");
  std::ostringstream sink;
  run(c, out1, sink);
  run(c, out2, sink);
  const std::string f1 = slurp(out1 / "region.csv");
  CHECK(f1 == slurp(out2 / "region.csv"));  // byte-identical
  CHECK(f1.find("fixed-timeshare,tau1") != std::string::npos);
  CHECK(f1.find("tdma,delta1") != std::string::npos);
  CHECK(f1.find("# cfg.command = region") != std::string::npos);

  // the emitted metadata re-parses to the same run configuration
  const RunConfig back = parse_metadata_echo(out1 / "region.csv");
  CHECK(back.command == "region");
  CHECK(back.budget == c.budget);
  CHECK(back.tau_grid.to_string() == c.tau_grid.to_string());
}

TEST_CASE("effcap command sweeps theta for the configured order") {
  RunConfig c;
  c.command = "effcap";
  c.snr = {1.0};
  c.theta = {0.01};
  c.order = {1};
  c.theta_grid = GridSpec::parse("logspace:0.001,0.1,3", "theta_grid");
  const fs::path out = temp_dir("effcap");
  std::ostringstream sink;
  run(c, out, sink);
  const std::string text = slurp(out / "effcap.csv");
  CHECK(text.find("theta,C1") != std::string::npos);
  // capacity column decreases down the sweep
  std::istringstream in(text);
  std::string line;
  std::vector<double> caps;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    const auto comma = line.find(',');
    caps.push_back(std::stod(line.substr(comma + 1)));
  }
  REQUIRE(caps.size() == 3);
  CHECK(caps[0] > caps[1]);
  CHECK(caps[1] > caps[2]);
}

TEST_CASE("power command reports thresholds and a policy table") {
  RunConfig c;
  c.command = "power";
  c.snr = {1.0};
  c.theta = {0.01};
  c.order = {1};
  const fs::path out = temp_dir("power");
  std::ostringstream sink;
  run(c, out, sink);
  const std::string text = slurp(out / "power_policy.csv");
  CHECK(text.find("# alpha_1 = ") != std::string::npos);
  CHECK(text.find("# mean_power_1 = ") != std::string::npos);
  CHECK(text.find("z1,mu1") != std::string::npos);
}

TEST_CASE("validate command runs the queue and reports a tail fit") {
  RunConfig c;
  c.command = "validate";
  c.snr = {1.0};
  c.theta = {0.01};
  c.order = {1};
  c.frames = 400'000;
  c.trace_stride = 50'000;
  const fs::path out = temp_dir("validate");
  std::ostringstream sink;
  run(c, out, sink);
  const std::string text = slurp(out / "tailfit.csv");
  CHECK(text.find("theta_hat") != std::string::npos);
  CHECK(fs::exists(out / "queue_trace_user1.csv"));

  c.frames = 1000;  // under the simulator's floor
  CHECK_THROWS_AS(run(c, out, sink), ConfigError);
}

TEST_CASE("numeric failures surface as NumericError for exit code 2") {
  RunConfig c;
  c.command = "power";
  c.snr = {1e30};
  c.theta = {0.01};
  c.order = {1};
  const fs::path out = temp_dir("numeric");
  std::ostringstream sink;
  CHECK_THROWS_AS(run(c, out, sink), NumericError);
}
