#include "drbcbf/cli.hpp"

#include "drbcbf/errors.hpp"
#include "drbcbf/io.hpp"
#include "json_report.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <utility>

namespace drbcbf {

namespace fs = std::filesystem;

namespace {

class OutputDir {
public:
    explicit OutputDir(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

    std::string write(const std::string& name, const std::string& body) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write output file '" + path.string() + "'");
        out << body;
        files_.push_back(path.string());
        return path.string();
    }

    std::vector<std::string> files() const { return files_; }

private:
    fs::path dir_;
    std::vector<std::string> files_;
};

std::string horizon_label(double T) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", T);
    return buf;
}

std::string trajectory_text(const SimResult& r) {
    std::ostringstream out;
    write_trajectory_csv(out, r);
    return out.str();
}

std::string region_text(const RegionResult& region) {
    std::ostringstream out;
    write_region_csv(out, region);
    return out.str();
}

SimOptions sim_options(const RunConfig& cfg) { return SimOptions{cfg.record_timing}; }

void emit_run(OutputDir& out, const RunConfig& cfg, const Scenario& s, const SimResult& r, const std::string& stem) {
    if (cfg.write_csv) out.write(stem + "_trajectory.csv", trajectory_text(r));
    if (cfg.write_json) out.write(stem + "_summary.json", summary_json(s, r));
}

}  // namespace

std::vector<std::string> run(const RunConfig& cfg, std::ostream& log) {
    const Scenario s = build_scenario(cfg);
    OutputDir out(cfg.output_dir);

    switch (cfg.mode) {
        case RunMode::simulate: {
            const SimResult r = simulate_closed_loop(s, cfg.robust, sim_options(cfg));
            emit_run(out, cfg, s, r, s.name + (cfg.robust ? "_robust" : "_standard"));
            const SimSummary sum = summarize(r);
            log << s.name << (cfg.robust ? " robust" : " standard") << ": min_h=" << format_double(sum.min_h)
                << " violations=" << sum.violations << " fallbacks=" << sum.fallbacks << '\n';
            if (r.aborted) throw ConfigError("simulation aborted: " + r.error);
            break;
        }
        case RunMode::compare: {
            auto robust = std::async(std::launch::async, [&] { return simulate_closed_loop(s, true, sim_options(cfg)); });
            auto standard = std::async(std::launch::async, [&] { return simulate_closed_loop(s, false, sim_options(cfg)); });
            const SimResult rr = robust.get();
            const SimResult rs = standard.get();
            if (cfg.write_csv) {
                out.write(s.name + "_robust_trajectory.csv", trajectory_text(rr));
                out.write(s.name + "_standard_trajectory.csv", trajectory_text(rs));
            }
            if (cfg.write_json) {
                nlohmann::json j;
                j["scenario"] = detail::scenario_json(s);
                j["robust"] = detail::run_json(rr);
                j["standard"] = detail::run_json(rs);
                out.write(s.name + "_compare_summary.json", j.dump(2) + "\n");
            }
            const SimSummary a = summarize(rr);
            const SimSummary b = summarize(rs);
            log << s.name << " robust: min_h=" << format_double(a.min_h) << " violations=" << a.violations << '\n'
                << s.name << " standard: min_h=" << format_double(b.min_h) << " violations=" << b.violations << '\n';
            if (rr.aborted || rs.aborted) throw ConfigError("simulation aborted: " + rr.error + rs.error);
            break;
        }
        case RunMode::certify_grid: {
            const RegionResult region = certify_region(s, s.filter_config(cfg.robust));
            if (cfg.write_csv) out.write(s.name + "_region.csv", region_text(region));
            if (cfg.write_json) {
                nlohmann::json j;
                j["scenario"] = detail::scenario_json(s);
                j["T"] = region.horizon;
                j["cells"] = region.cells.size();
                j["inside"] = region.inside_count();
                out.write(s.name + "_region_summary.json", j.dump(2) + "\n");
            }
            log << s.name << " certify-grid: " << region.inside_count() << " of " << region.cells.size()
                << " cells inside\n";
            break;
        }
        case RunMode::sweep_T: {
            std::vector<double> horizons = cfg.sweep_T;
            if (horizons.empty()) {
                horizons = s.sweep_horizons;
                if (s.shrink_horizon > 0.0) horizons.push_back(s.shrink_horizon);
            }
            std::vector<std::future<RegionResult>> jobs;
            for (double T : horizons) {
                const FlowGrid grid = [&] {
                    try {
                        return FlowGrid(T, s.grid.dt());
                    } catch (const ParameterError& e) {
                        throw ConfigError(e.what());
                    }
                }();
                jobs.push_back(std::async(std::launch::async, [&s, &cfg, grid] {
                    return certify_region(s, s.filter_config_for(grid, cfg.robust));
                }));
            }
            nlohmann::json counts = nlohmann::json::array();
            for (std::size_t i = 0; i < jobs.size(); ++i) {
                const RegionResult region = jobs[i].get();
                if (cfg.write_csv) out.write(s.name + "_region_T" + horizon_label(horizons[i]) + ".csv", region_text(region));
                counts.push_back({{"T", horizons[i]}, {"inside", region.inside_count()}, {"cells", region.cells.size()}});
                log << s.name << " T=" << horizon_label(horizons[i]) << ": " << region.inside_count() << " cells inside\n";
            }
            if (cfg.write_json) {
                nlohmann::json j;
                j["scenario"] = detail::scenario_json(s);
                j["sweep"] = counts;
                out.write(s.name + "_sweep_summary.json", j.dump(2) + "\n");
            }
            break;
        }
    }
    return out.files();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Disturbance-robust backup CBF safety filter simulations"};
    app.require_subcommand(1);
    CLI::App* cmd = app.add_subcommand("run", "Run a scenario");

    std::string scenario;
    std::string config_file;
    std::vector<std::pair<std::string, std::string>> flags;
    std::string horizon_flag;
    std::vector<std::string> settings;
    bool standard = false;

    cmd->add_option("--scenario", scenario, "Built-in scenario name or path to a config file");
    cmd->add_option("--config", config_file, "Config file (key = value lines)");
    auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
        cmd->add_option_function<std::string>(name, [&flags, key](const std::string& v) { flags.emplace_back(key, v); }, help);
    };
    flag("--mode", "mode", "simulate | certify-grid | sweep-T | compare");
    flag("--xi", "filter.xi", "Disturbance bound");
    cmd->add_option("--T", horizon_flag, "Backup horizon (comma list for sweep-T)");
    flag("--dt", "filter.dt", "Backup flow step");
    flag("--alpha", "filter.alpha", "Trajectory-row class-K gain");
    flag("--alpha-b", "filter.alpha_b", "Terminal-row class-K gain");
    flag("--kb", "backup.kb", "Spacecraft backup gain");
    flag("--x0", "sim.x0", "Initial state, comma separated");
    flag("--horizon", "sim.horizon", "Simulation horizon (s)");
    flag("--sim-step", "sim.step", "Simulation step (s)");
    flag("--seed", "sim.seed", "Random seed");
    flag("--disturbance", "disturbance.kind", "constant | sinusoidal | random");
    flag("--hold", "disturbance.hold", "Hold time of random disturbances (s)");
    flag("--out", "output.dir", "Output directory");
    flag("--formats", "output.formats", "csv,json");
    flag("--timing", "output.timing", "Record per-step solve time (true/false)");
    cmd->add_flag("--standard", standard, "Run the standard filter (xi = 0 inside the filter)");
    cmd->add_option("--set", settings, "Additional key=value setting");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        RunConfig cfg;
        std::error_code ec;
        if (!scenario.empty() && fs::is_regular_file(scenario, ec)) {
            apply_config_file(cfg, scenario);
        } else if (!scenario.empty()) {
            cfg.scenario = scenario;
        }
        if (!config_file.empty()) apply_config_file(cfg, config_file);
        if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') cfg.output_dir = env;
        for (const auto& [key, value] : flags) {
            try {
                apply_setting(cfg, key, value);
            } catch (const ConfigError& e) {
                throw ConfigError(std::string("command line: ") + e.what());
            }
        }
        for (const auto& s : settings) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("command line: --set expects key=value, got '" + s + "'");
            try {
                apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
            } catch (const ConfigError& e) {
                throw ConfigError(std::string("command line: ") + e.what());
            }
        }
        if (!horizon_flag.empty()) {
            apply_setting(cfg, cfg.mode == RunMode::sweep_T ? "sweep.T" : "filter.T", horizon_flag);
        }
        if (standard) cfg.robust = false;

        for (const auto& file : run(cfg, out)) out << "wrote " << file << '\n';
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace drbcbf
