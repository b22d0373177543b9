#pragma once

#include "drbcbf/constraints.hpp"
#include "drbcbf/model.hpp"

#include <string_view>
#include <vector>

namespace drbcbf {

/// minimize 1/2 ||u_p - u||^2  s.t.  A u >= b,  box.lower <= u <= box.upper.
struct QpProblem {
    Vector u_p;
    Matrix A;  // rows x m
    Vector b;
    ControlBox box;

    int rows() const { return static_cast<int>(A.rows()); }
    int dim() const { return static_cast<int>(u_p.size()); }
};

QpProblem make_qp(const Vector& u_p, const ConstraintSet& set, const ControlBox& box);

struct SolverConfig {
    double feasibility_tol = 1e-9;
    double kkt_tol = 1e-10;
    /// 0 selects 100 * (rows + 2m).
    int max_iterations = 0;
};

enum class QpStatus { optimal, infeasible, solver_failure };

std::string_view to_string(QpStatus status);

struct QpSolution {
    QpStatus status = QpStatus::infeasible;
    Vector u;
    /// Working set at termination. Indices below rows() refer to A; rows() + j is the
    /// lower bound on u_j and rows() + m + j the upper bound.
    std::vector<int> active_set;
    int iterations = 0;
    /// Minimized max violation from the feasibility pass.
    double max_violation = 0.0;
};

struct FeasibilityReport {
    bool feasible = false;
    double max_violation = 0.0;
    /// Minimizer of the max violation over the box.
    Vector point;
};

/// Minimizes max_i (b_i - a_i^T u)^+ over the box with a Bland-rule simplex.
FeasibilityReport check_feasible(const QpProblem& p, const SolverConfig& cfg = {});

QpSolution solve_qp(const QpProblem& p, const SolverConfig& cfg = {});

}  // namespace drbcbf
