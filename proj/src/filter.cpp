#include "drbcbf/filter.hpp"

#include "drbcbf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace drbcbf {

std::string_view to_string(FilterMode mode) {
    return mode == FilterMode::qp_optimal ? "qp" : "backup";
}

FilterConfig make_filter_config(const BackupProblem& problem, const FlowGrid& grid, const RowGains& gains,
                                BoundKind bound, const DisturbanceBound& xi) {
    return FilterConfig{grid, gains, bound, xi, compute_tightening(problem, bound, xi, grid), {}, false};
}

void validate_filter_config(const BackupProblem& problem, const FilterConfig& cfg) {
    const TighteningTerms expected = compute_tightening(problem, cfg.bound, cfg.xi, cfg.grid);
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
    bool ok = expected.eps_tau.size() == cfg.terms.eps_tau.size() &&
              expected.eps_b.size() == cfg.terms.eps_b.size() && close(cfg.terms.eps_delta, expected.eps_delta);
    for (std::size_t k = 0; ok && k < expected.eps_tau.size(); ++k) ok = close(cfg.terms.eps_tau[k], expected.eps_tau[k]);
    for (std::size_t j = 0; ok && j < expected.eps_b.size(); ++j) ok = close(cfg.terms.eps_b[j], expected.eps_b[j]);
    if (!ok) {
        throw ParameterError("filter tightening terms are inconsistent with xi, bound kind and grid");
    }
}

double FilterOutput::min_margin() const {
    if (margins.empty()) return std::numeric_limits<double>::infinity();
    return *std::min_element(margins.begin(), margins.end());
}

FilterOutput filter_control(const Vector& x, const Vector& u_p, const BackupProblem& problem,
                            const FilterConfig& cfg) {
    if (!x.allFinite()) throw ContractViolation("filter state is not finite");
    FlowTrajectory flow = propagate_backup_flow(problem.model, problem.policy, x, cfg.grid);
    const ConstraintSet set = assemble_constraint_set(x, flow, cfg.terms, problem, cfg.gains, cfg.xi);

    FilterOutput out;
    out.qp = solve_qp(make_qp(u_p, set, problem.box), cfg.solver);
    if (out.qp.status == QpStatus::optimal) {
        out.mode = FilterMode::qp_optimal;
        out.u_safe = out.qp.u;
    } else {
        out.mode = FilterMode::backup_fallback;
        out.u_safe = problem.policy.control(x);
    }
    out.margins.reserve(set.rows.size());
    for (const auto& row : set.rows) out.margins.push_back(row.residual(out.u_safe));
    if (cfg.retain_flow) out.flow = std::move(flow);
    return out;
}

Certificate certify_flow(const FlowTrajectory& flow, const BackupProblem& problem, const FilterConfig& cfg) {
    Certificate cert;
    cert.trajectory_slack = std::numeric_limits<double>::infinity();
    for (int k = 0; k < flow.size(); ++k) {
        const double slack = problem.safe.value(flow.states[k]) - cfg.terms.eps_tau[k] - cfg.terms.eps_delta;
        cert.trajectory_slack = std::min(cert.trajectory_slack, slack);
    }
    cert.terminal_slack = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < problem.backup.size(); ++j) {
        const double slack = problem.backup[j].value(flow.states.back()) - cfg.terms.eps_b[j];
        cert.terminal_slack = std::min(cert.terminal_slack, slack);
    }
    cert.inside = cert.trajectory_slack >= 0.0 && cert.terminal_slack >= 0.0;
    return cert;
}

Certificate certify_membership(const Vector& x, const BackupProblem& problem, const FilterConfig& cfg) {
    return certify_flow(propagate_backup_flow(problem.model, problem.policy, x, cfg.grid), problem, cfg);
}

}  // namespace drbcbf
