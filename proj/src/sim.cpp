#include "drbcbf/sim.hpp"

#include "drbcbf/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>

namespace drbcbf {

Vector plant_step(const SystemModel& model, const DisturbanceSignal& d, const Vector& x, const Vector& u, double t,
                  double h) {
    // right-continuous at t, left limit at t + h
    auto rhs = [&](const Vector& s, double time, bool left) -> Vector {
        return eval_dynamics(model, s, u) + disturbance_signal(d, time, left);
    };
    const Vector k1 = rhs(x, t, false);
    const Vector k2 = rhs(x + 0.5 * h * k1, t + 0.5 * h, false);
    const Vector k3 = rhs(x + 0.5 * h * k2, t + 0.5 * h, false);
    const Vector k4 = rhs(x + h * k3, t + h, true);
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SimResult simulate_closed_loop(const Scenario& s, bool robust, const SimOptions& opts) {
    if (!(s.sim_step > 0.0) || !(s.sim_horizon > 0.0)) throw ParameterError("simulation step and horizon must be positive");
    FilterConfig cfg = s.filter_config(robust);
    cfg.retain_flow = true;

    SimResult result;
    result.scenario = s.name;
    result.robust = robust;
    const int n_steps = static_cast<int>(std::llround(s.sim_horizon / s.sim_step));
    result.steps.reserve(static_cast<std::size_t>(n_steps) + 1);

    Vector x = s.x0;
    for (int i = 0; i <= n_steps; ++i) {
        const double t = i * s.sim_step;
        SimStep step;
        step.t = t;
        step.x = x;
        step.u_p = s.primary(t, x);
        try {
            const auto start = std::chrono::steady_clock::now();
            FilterOutput out = filter_control(x, step.u_p, s.problem, cfg);
            const auto stop = std::chrono::steady_clock::now();
            if (opts.record_timing) {
                step.step_us = std::chrono::duration<double, std::micro>(stop - start).count();
            }
            step.u_safe = out.u_safe;
            step.mode = out.mode;
            step.min_margin = out.min_margin();
            step.qp_iterations = out.qp.iterations;
            step.certified = certify_flow(*out.flow, s.problem, cfg).inside;
        } catch (const std::exception& e) {
            result.aborted = true;
            result.error = e.what();
            return result;
        }
        step.h = s.problem.safe.value(x);
        if (i == 0) result.outside_guarantee = !step.certified;
        result.steps.push_back(step);
        if (i < n_steps) x = plant_step(s.problem.model, s.disturbance, x, step.u_safe, t, s.sim_step);
    }
    return result;
}

SimSummary summarize(const SimResult& r) {
    SimSummary sum;
    sum.steps = static_cast<int>(r.steps.size());
    if (r.steps.empty()) return sum;
    sum.min_h = r.steps.front().h;
    std::vector<double> times;
    times.reserve(r.steps.size());
    double total = 0.0;
    for (const auto& st : r.steps) {
        sum.min_h = std::min(sum.min_h, st.h);
        if (st.h < 0.0) ++sum.violations;
        if (st.mode == FilterMode::backup_fallback) ++sum.fallbacks;
        if (!st.certified) ++sum.outside_certificate;
        times.push_back(st.step_us);
        total += st.step_us;
    }
    sum.mean_step_us = total / static_cast<double>(times.size());
    std::sort(times.begin(), times.end());
    const auto idx = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(times.size()))) - 1;
    sum.p99_step_us = times[std::min(idx, times.size() - 1)];
    return sum;
}

int RegionResult::inside_count() const {
    return static_cast<int>(std::count_if(cells.begin(), cells.end(), [](const RegionCell& c) { return c.cert.inside; }));
}

RegionResult certify_region(const Scenario& s, const FilterConfig& cfg) {
    RegionResult out;
    out.horizon = cfg.grid.horizon();
    const int total = s.region.count();
    out.cells.reserve(static_cast<std::size_t>(total));
    for (int i = 0; i < total; ++i) {
        Vector x = s.region.point(i);
        Certificate cert = certify_membership(x, s.problem, cfg);
        out.cells.push_back({std::move(x), cert});
    }
    return out;
}

}  // namespace drbcbf
