#pragma once

#include "drbcbf/bounds.hpp"
#include "drbcbf/constraints.hpp"
#include "drbcbf/flow.hpp"
#include "drbcbf/qp.hpp"

#include <optional>
#include <vector>

namespace drbcbf {

struct FilterConfig {
    FlowGrid grid;
    RowGains gains;
    BoundKind bound = BoundKind::gronwall;
    DisturbanceBound xi;
    TighteningTerms terms;
    SolverConfig solver;
    bool retain_flow = false;
};

/// Builds a config with tightening terms computed for (problem, grid, kind, xi).
FilterConfig make_filter_config(const BackupProblem& problem, const FlowGrid& grid, const RowGains& gains,
                                BoundKind bound, const DisturbanceBound& xi);

/// Recomputes the tightening terms and throws ParameterError if `cfg.terms` disagrees.
void validate_filter_config(const BackupProblem& problem, const FilterConfig& cfg);

enum class FilterMode { qp_optimal, backup_fallback };

std::string_view to_string(FilterMode mode);

struct FilterOutput {
    Vector u_safe;
    FilterMode mode = FilterMode::qp_optimal;
    QpSolution qp;
    /// Per-row residual a^T u_safe - b, in assembly order.
    std::vector<double> margins;
    std::optional<FlowTrajectory> flow;

    double min_margin() const;
};

/// Safe control closest to u_p satisfying every robust backup constraint; falls back to
/// u_b(x) when the QP is infeasible or the solver fails.
FilterOutput filter_control(const Vector& x, const Vector& u_p, const BackupProblem& problem,
                            const FilterConfig& cfg);

struct Certificate {
    bool inside = false;
    /// min_k h(phi(tau_k)) - eps_tau_k - eps_delta.
    double trajectory_slack = 0.0;
    /// min_j h_b,j(phi(T)) - eps_b,j.
    double terminal_slack = 0.0;
};

/// Membership test for the implicit robust invariant set, including the inter-sample margin.
Certificate certify_membership(const Vector& x, const BackupProblem& problem, const FilterConfig& cfg);

/// Same test on an already propagated flow.
Certificate certify_flow(const FlowTrajectory& flow, const BackupProblem& problem, const FilterConfig& cfg);

}  // namespace drbcbf
