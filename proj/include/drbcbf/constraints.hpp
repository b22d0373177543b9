#pragma once

#include "drbcbf/bounds.hpp"
#include "drbcbf/flow.hpp"
#include "drbcbf/model.hpp"

#include <vector>

namespace drbcbf {

enum class RowFamily { trajectory, terminal };

/// One affine control constraint a^T u >= b.
struct ConstraintRow {
    Vector a;
    double b = 0.0;
    RowFamily family = RowFamily::trajectory;
    /// Grid index for trajectory rows, backup-function index for terminal rows.
    int index = 0;
    /// a^T u_b(x) - b.
    double slack = 0.0;

    double residual(const Vector& u) const { return a.dot(u) - b; }
};

struct ConstraintSet {
    std::vector<ConstraintRow> rows;
    Vector x;
};

struct RowGains {
    ClassKappa alpha{1.0};
    ClassKappa alpha_b{1.0};
};

/// xi * || grad^T Phi ||_2.
double robustness_term(const Vector& grad_at_flow, const Matrix& stm, const DisturbanceBound& xi);

/// Row encoding  w (f + g u) - eta >= -alpha(h(phi) - eps_tau - eps_delta),  w = grad h(phi) Phi.
ConstraintRow trajectory_constraint_row(const Vector& x, const Vector& flow_point, const Matrix& stm,
                                        const ConstraintFunction& h, const ClassKappa& alpha, double eps_tau,
                                        double eps_delta, const DisturbanceBound& xi, const SystemModel& model);

/// Row encoding  w (f + g u) - eta_b >= -alpha_b(h_b(phi(T)) - eps_b).
ConstraintRow terminal_constraint_row(const Vector& x, const Vector& flow_end, const Matrix& stm_end,
                                      const ConstraintFunction& hb, const ClassKappa& alpha_b, double eps_b,
                                      const DisturbanceBound& xi, const SystemModel& model);

/// Trajectory rows for k = 0..N followed by one terminal row per backup function, with
/// slacks evaluated at u_b(x).
ConstraintSet assemble_constraint_set(const Vector& x, const FlowTrajectory& trajectory,
                                      const TighteningTerms& terms, const BackupProblem& problem,
                                      const RowGains& gains, const DisturbanceBound& xi);

}  // namespace drbcbf
