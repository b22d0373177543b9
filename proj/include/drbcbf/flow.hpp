#pragma once

#include "drbcbf/model.hpp"

#include <vector>

namespace drbcbf {

/// Uniform time grid {0, dt, ..., horizon} with horizon / dt integral.
class FlowGrid {
public:
    /// Throws ParameterError naming T and dt unless |N dt - T| <= 1e-12 for an integer N >= 1.
    FlowGrid(double horizon, double dt);

    double horizon() const noexcept { return horizon_; }
    double dt() const noexcept { return dt_; }
    int steps() const noexcept { return steps_; }
    int points() const noexcept { return steps_ + 1; }
    double time(int k) const noexcept { return k == steps_ ? horizon_ : k * dt_; }

    bool operator==(const FlowGrid& o) const noexcept {
        return horizon_ == o.horizon_ && dt_ == o.dt_ && steps_ == o.steps_;
    }

private:
    double horizon_;
    double dt_;
    int steps_;
};

/// Nominal backup flow sampled on a grid with the paired sensitivity matrices.
struct FlowTrajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<Matrix> stms;

    int size() const { return static_cast<int>(states.size()); }
};

struct AugmentedState {
    Vector state;
    Matrix stm;
};

/// One classical RK4 step of xdot = f_cl(x), Phidot = F_cl(x) Phi.
AugmentedState rk4_step_augmented(const SystemModel& model, const BackupPolicy& policy, const Vector& x,
                                  const Matrix& stm, double dt);

/// Throws PropagationError carrying the index of the first step producing a non-finite value.
FlowTrajectory propagate_backup_flow(const SystemModel& model, const BackupPolicy& policy, const Vector& x0,
                                     const FlowGrid& grid);

}  // namespace drbcbf
