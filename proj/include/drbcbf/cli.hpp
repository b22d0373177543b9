#pragma once

#include "drbcbf/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace drbcbf {

/// Environment variable that overrides the configured output directory (flags still win).
inline constexpr const char* kOutputDirEnv = "DRBCBF_OUTPUT_DIR";

/// Executes one run and returns the paths of the files written. Throws ConfigError for
/// invalid configurations.
std::vector<std::string> run(const RunConfig& cfg, std::ostream& log);

/// `drbcbf run [options]`. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace drbcbf
