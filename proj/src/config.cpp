#include "drbcbf/config.hpp"

#include "drbcbf/errors.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace drbcbf {

std::string_view to_string(RunMode mode) {
    switch (mode) {
        case RunMode::simulate: return "simulate";
        case RunMode::certify_grid: return "certify-grid";
        case RunMode::sweep_T: return "sweep-T";
        case RunMode::compare: return "compare";
    }
    return "unknown";
}

RunMode parse_run_mode(std::string_view text) {
    if (text == "simulate") return RunMode::simulate;
    if (text == "certify-grid") return RunMode::certify_grid;
    if (text == "sweep-T") return RunMode::sweep_T;
    if (text == "compare") return RunMode::compare;
    throw ConfigError("unknown mode '" + std::string(text) + "' (expected simulate, certify-grid, sweep-T or compare)");
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view key, std::string_view text) {
    const std::string buf(trim(text));
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size() || errno == ERANGE) {
        throw ConfigError("value for '" + std::string(key) + "' is not a number: '" + buf + "'");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    const auto t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError("value for '" + std::string(key) + "' is not a boolean: '" + std::string(t) + "'");
}

Vector parse_vector(std::string_view key, std::string_view text) {
    std::vector<double> values;
    try {
        values = parse_number_list(text);
    } catch (const ConfigError&) {
        throw ConfigError("value for '" + std::string(key) + "' is not a comma-separated list of numbers");
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        out.push_back(parse_number("list", item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "scenario",      "mode",           "output.dir",      "output.formats", "output.timing",
        "filter.xi",     "filter.T",       "filter.dt",       "filter.alpha",   "filter.alpha_b",
        "filter.robust", "backup.kb",      "sim.x0",          "sim.horizon",    "sim.step",
        "sim.seed",      "disturbance.kind", "disturbance.hold", "sweep.T",
    };
    return keys;
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
    value = trim(value);
    auto& o = cfg.overrides;
    if (key == "scenario") {
        cfg.scenario = std::string(value);
    } else if (key == "mode") {
        cfg.mode = parse_run_mode(value);
    } else if (key == "output.dir") {
        cfg.output_dir = std::string(value);
    } else if (key == "output.formats") {
        cfg.write_csv = false;
        cfg.write_json = false;
        std::size_t pos = 0;
        while (pos <= value.size()) {
            const auto comma = value.find(',', pos);
            const auto item = trim(value.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            if (item == "csv") {
                cfg.write_csv = true;
            } else if (item == "json" || item == "json-summary") {
                cfg.write_json = true;
            } else {
                throw ConfigError("unknown output format '" + std::string(item) + "' (expected csv or json)");
            }
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    } else if (key == "output.timing") {
        cfg.record_timing = parse_bool(key, value);
    } else if (key == "filter.xi") {
        o.xi = parse_number(key, value);
    } else if (key == "filter.T") {
        o.horizon_T = parse_number(key, value);
    } else if (key == "filter.dt") {
        o.dt = parse_number(key, value);
    } else if (key == "filter.alpha") {
        o.alpha = parse_number(key, value);
    } else if (key == "filter.alpha_b") {
        o.alpha_b = parse_number(key, value);
    } else if (key == "filter.robust") {
        cfg.robust = parse_bool(key, value);
    } else if (key == "backup.kb") {
        o.kb = parse_number(key, value);
    } else if (key == "sim.x0") {
        o.x0 = parse_vector(key, value);
    } else if (key == "sim.horizon") {
        o.sim_horizon = parse_number(key, value);
    } else if (key == "sim.step") {
        o.sim_step = parse_number(key, value);
    } else if (key == "sim.seed") {
        const double v = parse_number(key, value);
        if (v < 0.0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
            throw ConfigError("value for 'sim.seed' must be a nonnegative integer");
        }
        o.seed = static_cast<std::uint64_t>(v);
    } else if (key == "disturbance.kind") {
        try {
            o.disturbance = parse_disturbance_kind(value);
        } catch (const ParameterError& e) {
            throw ConfigError(e.what());
        }
    } else if (key == "disturbance.hold") {
        o.disturbance_hold = parse_number(key, value);
    } else if (key == "sweep.T") {
        const Vector horizons = parse_vector(key, value);
        cfg.sweep_T.assign(horizons.data(), horizons.data() + horizons.size());
    } else {
        throw ConfigError("unknown key '" + std::string(key) + "'");
    }
}

void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view source) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        try {
            apply_setting(cfg, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream body;
    body << in.rdbuf();
    apply_config_text(cfg, body.str(), path);
}

Scenario build_scenario(const RunConfig& cfg) {
    try {
        Scenario s = make_scenario(cfg.scenario, cfg.overrides);
        if (cfg.mode == RunMode::sweep_T) {
            for (double T : cfg.sweep_T) FlowGrid(T, s.grid.dt());
        }
        return s;
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace drbcbf
