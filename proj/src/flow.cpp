#include "drbcbf/flow.hpp"

#include "drbcbf/errors.hpp"

#include <cmath>
#include <sstream>

namespace drbcbf {

FlowGrid::FlowGrid(double horizon, double dt) : horizon_(horizon), dt_(dt), steps_(0) {
    if (!(horizon > 0.0) || !(dt > 0.0) || !std::isfinite(horizon) || !std::isfinite(dt)) {
        throw ParameterError("flow grid needs positive finite horizon and step");
    }
    const double ratio = horizon / dt;
    const double n = std::round(ratio);
    if (n < 1.0 || std::abs(n * dt - horizon) > 1e-12) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "backup horizon T=" << horizon << " is not an integer multiple of the step dt=" << dt
            << " (T/dt=" << ratio << ")";
        throw ParameterError(msg.str());
    }
    steps_ = static_cast<int>(n);
}

namespace {

bool all_finite(const Vector& x, const Matrix& m) { return x.allFinite() && m.allFinite(); }

}  // namespace

AugmentedState rk4_step_augmented(const SystemModel& model, const BackupPolicy& policy, const Vector& x,
                                  const Matrix& stm, double dt) {
    if (!(dt > 0.0)) throw ContractViolation("rk4 step requires dt > 0");
    auto fcl = [&](const Vector& s) { return eval_backup_closed_loop(model, policy, s); };

    const Vector k1 = fcl(x);
    const Matrix m1 = policy.closed_loop_jacobian(x) * stm;

    const Vector x2 = x + 0.5 * dt * k1;
    const Vector k2 = fcl(x2);
    const Matrix m2 = policy.closed_loop_jacobian(x2) * (stm + 0.5 * dt * m1);

    const Vector x3 = x + 0.5 * dt * k2;
    const Vector k3 = fcl(x3);
    const Matrix m3 = policy.closed_loop_jacobian(x3) * (stm + 0.5 * dt * m2);

    const Vector x4 = x + dt * k3;
    const Vector k4 = fcl(x4);
    const Matrix m4 = policy.closed_loop_jacobian(x4) * (stm + dt * m3);

    return {x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), stm + dt / 6.0 * (m1 + 2.0 * m2 + 2.0 * m3 + m4)};
}

FlowTrajectory propagate_backup_flow(const SystemModel& model, const BackupPolicy& policy, const Vector& x0,
                                     const FlowGrid& grid) {
    check_state(model, x0);
    if (!x0.allFinite()) throw PropagationError("initial state is not finite", 0);

    const int n = model.state_dim;
    FlowTrajectory traj;
    traj.times.reserve(grid.points());
    traj.states.reserve(grid.points());
    traj.stms.reserve(grid.points());
    traj.times.push_back(0.0);
    traj.states.push_back(x0);
    traj.stms.push_back(Matrix::Identity(n, n));

    for (int k = 1; k <= grid.steps(); ++k) {
        AugmentedState next = rk4_step_augmented(model, policy, traj.states.back(), traj.stms.back(), grid.dt());
        if (!all_finite(next.state, next.stm)) {
            throw PropagationError("backup flow became non-finite", k);
        }
        traj.times.push_back(grid.time(k));
        traj.states.push_back(std::move(next.state));
        traj.stms.push_back(std::move(next.stm));
    }
    return traj;
}

}  // namespace drbcbf
