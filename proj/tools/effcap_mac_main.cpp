// effcap-mac: throughput regions, power policies and queue validation for
// multiaccess block-fading channels under statistical QoS constraints.
//
// Usage: effcap-mac <command> --config <file> [--set key=value ...] --out <dir>
// Commands: region | sumrate | power | validate | effcap
// Exit codes: 0 ok, 1 config error, 2 numeric error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "effcap/run.hpp"
#include "effcap/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Effective-capacity regions of multiaccess fading channels"};
  app.set_version_flag("--version", std::string("effcap-mac ") + effcap::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;

  const std::vector<std::string> commands = {"region", "sumrate", "power", "validate",
                                             "effcap"};
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "flat key = value configuration file");
    sub->add_option("--set", overrides, "override a config key (key=value)");
    sub->add_option("--out", out_dir, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help/usage
    return code == 0 ? 0 : 1;     // command-line misuse is a config error
  }

  try {
    effcap::RunConfig config;
    if (!config_path.empty()) config = effcap::parse_config_file(config_path);
    for (const auto& kv : overrides) effcap::apply_override(config, kv);
    config.command = app.get_subcommands().front()->get_name();
    config.validate();
    effcap::run(config, out_dir, std::cout);
    return 0;
  } catch (const effcap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const effcap::NumericError& e) {
    std::cerr << "numeric error in " << e.where() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
