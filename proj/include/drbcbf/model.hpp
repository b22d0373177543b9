#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace drbcbf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Control-affine dynamics xdot = f(x) + g(x) u.
///
/// `domain_speed_bound` is a scenario-supplied upper bound on the speed of the
/// closed-loop backup vector field over the declared operating domain. It feeds
/// the inter-sample margin and is not estimated here.
struct SystemModel {
    int state_dim = 0;
    int control_dim = 0;
    std::function<Vector(const Vector&)> drift;
    std::function<Matrix(const Vector&)> input_matrix;
    double domain_speed_bound = 0.0;
};

/// Axis-aligned control box lower <= u <= upper.
struct ControlBox {
    Vector lower;
    Vector upper;

    ControlBox() = default;
    ControlBox(Vector lo, Vector hi);

    int dim() const { return static_cast<int>(lower.size()); }
    bool contains(const Vector& u, double tol = 0.0) const;
    Vector clamp(const Vector& u) const;
};

struct BackupPolicy {
    std::function<Vector(const Vector&)> control;
    /// Jacobian of f + g u_b at a state.
    std::function<Matrix(const Vector&)> closed_loop_jacobian;
    double lipschitz_cl = 0.0;
    std::optional<double> contraction_rate;
};

/// Scalar constraint function h with its gradient and Euclidean Lipschitz constant.
/// The gradient is returned as a column vector holding the entries of the row dh/dx.
struct ConstraintFunction {
    std::string name;
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    double lipschitz = 0.0;
};

/// Linear extended class-K function alpha(s) = gain * s.
class ClassKappa {
public:
    explicit ClassKappa(double gain);

    double gain() const noexcept { return gain_; }
    double operator()(double s) const noexcept { return gain_ * s; }

private:
    double gain_;
};

/// Bound xi on the Euclidean norm of the additive process disturbance.
class DisturbanceBound {
public:
    DisturbanceBound() = default;
    explicit DisturbanceBound(double xi);

    double xi() const noexcept { return xi_; }
    bool nominal() const noexcept { return xi_ == 0.0; }

private:
    double xi_ = 0.0;
};

/// The ingredients of a backup-CBF safety problem.
struct BackupProblem {
    SystemModel model;
    ControlBox box;
    BackupPolicy policy;
    ConstraintFunction safe;
    /// The backup set is the intersection of the 0-superlevel sets of these functions.
    std::vector<ConstraintFunction> backup;
};

/// f(x) + g(x) u. Throws ContractViolation on dimension mismatch.
Vector eval_dynamics(const SystemModel& model, const Vector& x, const Vector& u);

/// f(x) + g(x) u_b(x).
Vector eval_backup_closed_loop(const SystemModel& model, const BackupPolicy& policy, const Vector& x);

double eval_class_kappa(const ClassKappa& alpha, double s);

/// Central finite-difference Jacobian of the closed-loop backup dynamics. Used by tests and
/// by scenario self-checks.
Matrix finite_difference_closed_loop_jacobian(const SystemModel& model, const BackupPolicy& policy,
                                              const Vector& x, double step = 1e-6);

void check_state(const SystemModel& model, const Vector& x);

}  // namespace drbcbf
