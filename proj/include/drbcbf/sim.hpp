#pragma once

#include "drbcbf/filter.hpp"
#include "drbcbf/scenario.hpp"

#include <string>
#include <vector>

namespace drbcbf {

struct SimStep {
    double t = 0.0;
    Vector x;
    Vector u_p;
    Vector u_safe;
    FilterMode mode = FilterMode::qp_optimal;
    double h = 0.0;
    double min_margin = 0.0;
    bool certified = false;
    int qp_iterations = 0;
    double step_us = 0.0;
};

struct SimResult {
    std::string scenario;
    bool robust = true;
    std::vector<SimStep> steps;
    /// x0 was not certified inside the implicit robust invariant set.
    bool outside_guarantee = false;
    bool aborted = false;
    std::string error;
};

struct SimOptions {
    /// Record wall time per filter call; off gives byte-stable output (step_us = 0).
    bool record_timing = false;
};

/// One RK4 step of xdot = f(x) + g(x) u + d(t) with u held over [t, t + h]. Piecewise
/// disturbances are sampled from the segment starting at t.
Vector plant_step(const SystemModel& model, const DisturbanceSignal& d, const Vector& x, const Vector& u, double t,
                  double h);

/// Closed-loop run under the safety filter. The plant always receives the scenario
/// disturbance; `robust == false` only zeroes xi inside the filter.
SimResult simulate_closed_loop(const Scenario& s, bool robust, const SimOptions& opts = {});

struct SimSummary {
    double min_h = 0.0;
    int violations = 0;
    int fallbacks = 0;
    int outside_certificate = 0;
    double mean_step_us = 0.0;
    double p99_step_us = 0.0;
    int steps = 0;
};

SimSummary summarize(const SimResult& r);

struct RegionCell {
    Vector x;
    Certificate cert;
};

struct RegionResult {
    double horizon = 0.0;
    std::vector<RegionCell> cells;

    int inside_count() const;
};

/// Certifies every point of the scenario's state grid with the given filter configuration.
RegionResult certify_region(const Scenario& s, const FilterConfig& cfg);

}  // namespace drbcbf
