#pragma once

#include "drbcbf/scenario.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace drbcbf {

enum class RunMode { simulate, certify_grid, sweep_T, compare };

std::string_view to_string(RunMode mode);
RunMode parse_run_mode(std::string_view text);

struct RunConfig {
    std::string scenario = "double_integrator";
    ScenarioOverrides overrides;
    RunMode mode = RunMode::simulate;
    std::string output_dir = "out";
    bool write_csv = true;
    bool write_json = true;
    /// Filter xi follows the scenario; false runs the standard (xi = 0) filter.
    bool robust = true;
    bool record_timing = true;
    /// Backup horizons for sweep-T; empty selects the scenario's sweep plus its shrink horizon.
    std::vector<double> sweep_T;
};

/// Applies one `key = value` setting. Throws ConfigError on unknown keys or malformed values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses a key-value file body: `key = value` lines with dotted keys, `#` comments and
/// blank lines. Errors name `source:line`.
void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view source = "<config>");

void apply_config_file(RunConfig& cfg, const std::string& path);

/// Applies the config's overrides and checks grid divisibility for every horizon it will use.
Scenario build_scenario(const RunConfig& cfg);

std::vector<double> parse_number_list(std::string_view text);

/// Names of every accepted configuration key.
const std::vector<std::string>& config_keys();

}  // namespace drbcbf
