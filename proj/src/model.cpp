#include "drbcbf/model.hpp"

#include "drbcbf/errors.hpp"

#include <cmath>

namespace drbcbf {

ControlBox::ControlBox(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size() || lower.size() == 0) {
        throw ContractViolation("control box bounds must be nonempty and of equal dimension");
    }
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (!(lower[i] <= upper[i])) {
            throw ContractViolation("control box lower bound exceeds upper bound in component " +
                                    std::to_string(i));
        }
    }
}

bool ControlBox::contains(const Vector& u, double tol) const {
    if (u.size() != lower.size()) return false;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (u[i] < lower[i] - tol || u[i] > upper[i] + tol) return false;
    }
    return true;
}

Vector ControlBox::clamp(const Vector& u) const { return u.cwiseMax(lower).cwiseMin(upper); }

ClassKappa::ClassKappa(double gain) : gain_(gain) {
    if (!(gain > 0.0) || !std::isfinite(gain)) {
        throw ParameterError("class-K gain must be positive and finite");
    }
}

DisturbanceBound::DisturbanceBound(double xi) : xi_(xi) {
    if (!(xi >= 0.0) || !std::isfinite(xi)) {
        throw ParameterError("disturbance bound xi must be nonnegative and finite");
    }
}

void check_state(const SystemModel& model, const Vector& x) {
    if (x.size() != model.state_dim) {
        throw ContractViolation("state has dimension " + std::to_string(x.size()) + ", model expects " +
                                std::to_string(model.state_dim));
    }
}

Vector eval_dynamics(const SystemModel& model, const Vector& x, const Vector& u) {
    check_state(model, x);
    if (u.size() != model.control_dim) {
        throw ContractViolation("control has dimension " + std::to_string(u.size()) + ", model expects " +
                                std::to_string(model.control_dim));
    }
    Vector f = model.drift(x);
    Matrix g = model.input_matrix(x);
    if (f.size() != model.state_dim || g.rows() != model.state_dim || g.cols() != model.control_dim) {
        throw ContractViolation("model evaluators returned inconsistent dimensions");
    }
    return f + g * u;
}

Vector eval_backup_closed_loop(const SystemModel& model, const BackupPolicy& policy, const Vector& x) {
    return eval_dynamics(model, x, policy.control(x));
}

double eval_class_kappa(const ClassKappa& alpha, double s) { return alpha(s); }

Matrix finite_difference_closed_loop_jacobian(const SystemModel& model, const BackupPolicy& policy,
                                              const Vector& x, double step) {
    const int n = model.state_dim;
    Matrix jac(n, n);
    for (int j = 0; j < n; ++j) {
        Vector xp = x;
        Vector xm = x;
        xp[j] += step;
        xm[j] -= step;
        jac.col(j) = (eval_backup_closed_loop(model, policy, xp) - eval_backup_closed_loop(model, policy, xm)) /
                     (2.0 * step);
    }
    return jac;
}

}  // namespace drbcbf
