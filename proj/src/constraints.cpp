#include "drbcbf/constraints.hpp"

#include "drbcbf/errors.hpp"

namespace drbcbf {

double robustness_term(const Vector& grad_at_flow, const Matrix& stm, const DisturbanceBound& xi) {
    if (xi.nominal()) return 0.0;
    return xi.xi() * (stm.transpose() * grad_at_flow).norm();
}

namespace {

ConstraintRow make_row(const Vector& x, const Vector& flow_point, const Matrix& stm, const ConstraintFunction& fn,
                       double rhs, const DisturbanceBound& xi, const SystemModel& model) {
    const Vector grad = fn.gradient(flow_point);
    if (grad.size() != model.state_dim) throw ContractViolation("constraint gradient has wrong dimension");
    const Vector w = stm.transpose() * grad;
    ConstraintRow row;
    row.a = model.input_matrix(x).transpose() * w;
    row.b = rhs - w.dot(model.drift(x)) + robustness_term(grad, stm, xi);
    return row;
}

}  // namespace

ConstraintRow trajectory_constraint_row(const Vector& x, const Vector& flow_point, const Matrix& stm,
                                        const ConstraintFunction& h, const ClassKappa& alpha, double eps_tau,
                                        double eps_delta, const DisturbanceBound& xi, const SystemModel& model) {
    const double rhs = -alpha(h.value(flow_point) - eps_tau - eps_delta);
    ConstraintRow row = make_row(x, flow_point, stm, h, rhs, xi, model);
    row.family = RowFamily::trajectory;
    return row;
}

ConstraintRow terminal_constraint_row(const Vector& x, const Vector& flow_end, const Matrix& stm_end,
                                      const ConstraintFunction& hb, const ClassKappa& alpha_b, double eps_b,
                                      const DisturbanceBound& xi, const SystemModel& model) {
    const double rhs = -alpha_b(hb.value(flow_end) - eps_b);
    ConstraintRow row = make_row(x, flow_end, stm_end, hb, rhs, xi, model);
    row.family = RowFamily::terminal;
    return row;
}

ConstraintSet assemble_constraint_set(const Vector& x, const FlowTrajectory& trajectory,
                                      const TighteningTerms& terms, const BackupProblem& problem,
                                      const RowGains& gains, const DisturbanceBound& xi) {
    if (static_cast<int>(terms.eps_tau.size()) != trajectory.size()) {
        throw ContractViolation("tightening terms and trajectory are on different grids");
    }
    if (terms.eps_b.size() != problem.backup.size()) {
        throw ContractViolation("one terminal tightening term is required per backup constraint");
    }
    ConstraintSet set;
    set.x = x;
    set.rows.reserve(trajectory.size() + problem.backup.size());
    for (int k = 0; k < trajectory.size(); ++k) {
        ConstraintRow row = trajectory_constraint_row(x, trajectory.states[k], trajectory.stms[k], problem.safe,
                                                      gains.alpha, terms.eps_tau[k], terms.eps_delta, xi,
                                                      problem.model);
        row.index = k;
        set.rows.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < problem.backup.size(); ++j) {
        ConstraintRow row = terminal_constraint_row(x, trajectory.states.back(), trajectory.stms.back(),
                                                    problem.backup[j], gains.alpha_b, terms.eps_b[j], xi,
                                                    problem.model);
        row.index = static_cast<int>(j);
        set.rows.push_back(std::move(row));
    }
    const Vector ub = problem.policy.control(x);
    for (auto& row : set.rows) row.slack = row.residual(ub);
    return set;
}

}  // namespace drbcbf
