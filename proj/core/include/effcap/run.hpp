#ifndef EFFCAP_RUN_HPP
#define EFFCAP_RUN_HPP

#include <filesystem>
#include <ostream>

#include "effcap/config.hpp"

namespace effcap {

/// Executes the configured command, writing CSV outputs under out_dir.
/// Throws ConfigError for invalid configuration, NumericError (or
/// derived) for numeric failures. Outputs are byte-identical for identical
/// (config, seed) on the same build.
void run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

}  // namespace effcap

#endif
