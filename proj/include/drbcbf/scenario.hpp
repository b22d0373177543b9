#pragma once

#include "drbcbf/bounds.hpp"
#include "drbcbf/disturbance.hpp"
#include "drbcbf/filter.hpp"
#include "drbcbf/flow.hpp"
#include "drbcbf/model.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace drbcbf {

/// Axis-aligned state grid used by region certification.
struct StateGrid {
    Vector lower;
    Vector upper;
    std::vector<int> cells;

    int count() const;
    Vector point(int flat_index) const;
};

struct Scenario {
    std::string name;
    BackupProblem problem;
    FlowGrid grid{1.0, 1.0};
    RowGains gains;
    BoundKind bound = BoundKind::gronwall;
    DisturbanceBound xi;
    std::function<Vector(double, const Vector&)> primary;
    DisturbanceSignal disturbance;
    double sim_step = 0.01;
    double sim_horizon = 1.0;
    Vector x0;
    std::uint64_t seed = 0;

    StateGrid region;
    std::vector<double> sweep_horizons;
    /// Backup horizon long enough for the Gronwall bound to shrink the certified set.
    double shrink_horizon = 0.0;

    /// Named numeric parameters the scenario was built from, for summaries.
    std::map<std::string, double> parameters;

    /// Filter configuration; `robust == false` sets xi = 0 inside the filter only.
    FilterConfig filter_config(bool robust = true) const;
    FilterConfig filter_config_for(const FlowGrid& g, bool robust = true) const;
};

/// Optional overrides applied when building a built-in scenario.
struct ScenarioOverrides {
    std::optional<double> xi;
    std::optional<double> horizon_T;
    std::optional<double> dt;
    std::optional<double> alpha;
    std::optional<double> alpha_b;
    std::optional<double> kb;
    std::optional<double> sim_horizon;
    std::optional<double> sim_step;
    std::optional<Vector> x0;
    std::optional<std::uint64_t> seed;
    std::optional<DisturbanceKind> disturbance;
    std::optional<double> disturbance_hold;
};

Scenario make_double_integrator(const ScenarioOverrides& o = {});
Scenario make_spacecraft(const ScenarioOverrides& o = {});
/// Throws ParameterError for an unknown name.
Scenario make_scenario(const std::string& name, const ScenarioOverrides& o = {});

/// Both built-in scenarios with default parameters, keyed by name.
std::map<std::string, Scenario> builtin_scenarios();

/// Spacecraft backup gain threshold lambda_max xi / sqrt(2 gamma lambda_min).
double spacecraft_min_backup_gain(double lambda_max, double lambda_min, double gamma, double xi);

}  // namespace drbcbf
