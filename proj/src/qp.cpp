#include "drbcbf/qp.hpp"

#include "drbcbf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace drbcbf {

std::string_view to_string(QpStatus status) {
    switch (status) {
        case QpStatus::optimal: return "optimal";
        case QpStatus::infeasible: return "infeasible";
        case QpStatus::solver_failure: return "solver_failure";
    }
    return "unknown";
}

QpProblem make_qp(const Vector& u_p, const ConstraintSet& set, const ControlBox& box) {
    const auto m = u_p.size();
    QpProblem p{u_p, Matrix(static_cast<Eigen::Index>(set.rows.size()), m),
                Vector(static_cast<Eigen::Index>(set.rows.size())), box};
    for (std::size_t i = 0; i < set.rows.size(); ++i) {
        if (set.rows[i].a.size() != m) throw ContractViolation("constraint row has wrong control dimension");
        p.A.row(static_cast<Eigen::Index>(i)) = set.rows[i].a.transpose();
        p.b[static_cast<Eigen::Index>(i)] = set.rows[i].b;
    }
    return p;
}

namespace {

void validate(const QpProblem& p) {
    if (p.box.dim() != p.dim()) throw ContractViolation("QP box and primary control dimensions differ");
    if (p.A.cols() != p.dim() || p.A.rows() != p.b.size()) {
        throw ContractViolation("QP constraint matrix has inconsistent dimensions");
    }
}

// Dense simplex tableau for  min t  s.t.  A v + t - s = c,  v + r = w,  v, t, s, r >= 0,
// with u = lower + v. Column layout: v (m), t, s (R), r (m), rhs.
class FeasibilityLp {
public:
    explicit FeasibilityLp(const QpProblem& p)
        : m_(p.dim()), rows_(p.rows()), cols_(2 * m_ + 1 + rows_), tab_(rows_ + m_ + 1, cols_ + 1),
          basis_(rows_ + m_) {
        const Vector width = p.box.upper - p.box.lower;
        const Vector c = p.b - p.A * p.box.lower;
        tab_.setZero();
        for (int i = 0; i < rows_; ++i) {
            tab_.row(i).segment(0, m_) = p.A.row(i);
            tab_(i, t_col()) = 1.0;
            tab_(i, s_col(i)) = -1.0;
            tab_(i, cols_) = c[i];
        }
        for (int j = 0; j < m_; ++j) {
            tab_(rows_ + j, j) = 1.0;
            tab_(rows_ + j, r_col(j)) = 1.0;
            tab_(rows_ + j, cols_) = width[j];
            basis_[rows_ + j] = r_col(j);
        }
        tab_(obj_row(), t_col()) = 1.0;

        start_ = 0;
        double worst = 0.0;
        for (int i = 0; i < rows_; ++i) {
            if (c[i] > worst) {
                worst = c[i];
                start_ = i;
            }
        }
        trivially_feasible_ = rows_ == 0 || worst <= 0.0;
        if (trivially_feasible_) return;
        for (int i = 0; i < rows_; ++i) {
            if (i == start_) continue;
            tab_.row(i) -= tab_.row(start_);
            tab_.row(i) *= -1.0;
            basis_[i] = s_col(i);
        }
        basis_[start_] = t_col();
        pivot(start_, t_col());
    }

    void solve() {
        if (trivially_feasible_) return;
        constexpr double tol = 1e-12;
        const int max_pivots = 50 * (cols_ + rows_ + m_);
        for (int it = 0; it < max_pivots; ++it) {
            int enter = -1;
            for (int j = 0; j < cols_; ++j) {
                if (tab_(obj_row(), j) < -tol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < rows_ + m_; ++i) {
                const double coef = tab_(i, enter);
                if (coef <= tol) continue;
                const double ratio = std::max(0.0, tab_(i, cols_)) / coef;
                if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && basis_[i] < basis_[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return;  // unbounded direction; cannot happen since t >= 0
            basis_[leave] = enter;
            pivot(leave, enter);
        }
    }

    Vector offset() const {
        Vector v = Vector::Zero(m_);
        if (trivially_feasible_) return v;
        for (int i = 0; i < rows_ + m_; ++i) {
            if (basis_[i] < m_) v[basis_[i]] = std::max(0.0, tab_(i, cols_));
        }
        return v;
    }

private:
    int t_col() const { return m_; }
    int s_col(int i) const { return m_ + 1 + i; }
    int r_col(int j) const { return m_ + 1 + rows_ + j; }
    int obj_row() const { return rows_ + m_; }

    void pivot(int row, int col) {
        tab_.row(row) /= tab_(row, col);
        for (int i = 0; i < tab_.rows(); ++i) {
            if (i == row) continue;
            const double factor = tab_(i, col);
            if (factor != 0.0) tab_.row(i) -= factor * tab_.row(row);
        }
    }

    int m_;
    int rows_;
    int cols_;
    Matrix tab_;
    std::vector<int> basis_;
    int start_ = 0;
    bool trivially_feasible_ = false;
};

// Rows of the combined system [A; I; -I] u >= [b; lower; -upper].
struct StackedConstraints {
    Matrix A;
    Vector b;

    explicit StackedConstraints(const QpProblem& p) : A(p.rows() + 2 * p.dim(), p.dim()), b(A.rows()) {
        const int r = p.rows();
        const int m = p.dim();
        A.topRows(r) = p.A;
        b.head(r) = p.b;
        A.middleRows(r, m) = Matrix::Identity(m, m);
        b.segment(r, m) = p.box.lower;
        A.bottomRows(m) = -Matrix::Identity(m, m);
        b.tail(m) = -p.box.upper;
    }
};

bool independent_of(const Matrix& basis_rows, const Vector& candidate) {
    if (candidate.norm() <= 1e-12) return false;
    if (basis_rows.rows() == 0) return true;
    Eigen::ColPivHouseholderQR<Matrix> qr(basis_rows.transpose());
    const Vector coeffs = qr.solve(candidate);
    const Vector residual = candidate - basis_rows.transpose() * coeffs;
    return residual.norm() > 1e-9 * candidate.norm();
}

Matrix working_rows(const StackedConstraints& sc, const std::vector<int>& working) {
    Matrix aw(static_cast<Eigen::Index>(working.size()), sc.A.cols());
    for (std::size_t k = 0; k < working.size(); ++k) aw.row(static_cast<Eigen::Index>(k)) = sc.A.row(working[k]);
    return aw;
}

}  // namespace

FeasibilityReport check_feasible(const QpProblem& p, const SolverConfig& cfg) {
    validate(p);
    FeasibilityLp lp(p);
    lp.solve();
    FeasibilityReport report;
    report.point = p.box.clamp(p.box.lower + lp.offset());
    // Evaluated at the returned point rather than read from the tableau.
    double worst = 0.0;
    for (int i = 0; i < p.rows(); ++i) worst = std::max(worst, p.b[i] - p.A.row(i).dot(report.point));
    report.max_violation = worst;
    report.feasible = report.max_violation <= cfg.feasibility_tol;
    return report;
}

QpSolution solve_qp(const QpProblem& p, const SolverConfig& cfg) {
    validate(p);
    const int m = p.dim();
    const int cap = cfg.max_iterations > 0 ? cfg.max_iterations : 100 * (p.rows() + 2 * m);
    QpSolution sol;

    if (p.box.contains(p.u_p) &&
        (p.rows() == 0 || ((p.A * p.u_p - p.b).array() >= 0.0).all())) {
        sol.status = QpStatus::optimal;
        sol.u = p.u_p;
        return sol;
    }

    const FeasibilityReport phase1 = check_feasible(p, cfg);
    sol.max_violation = phase1.max_violation;
    if (!phase1.feasible) {
        sol.status = QpStatus::infeasible;
        return sol;
    }

    const StackedConstraints sc(p);
    const int total = static_cast<int>(sc.A.rows());
    Vector u = phase1.point;

    std::vector<int> working;
    std::vector<bool> in_working(static_cast<std::size_t>(total), false);
    for (int i = 0; i < total && static_cast<int>(working.size()) < m; ++i) {
        const double res = sc.A.row(i).dot(u) - sc.b[i];
        if (std::abs(res) <= cfg.feasibility_tol && independent_of(working_rows(sc, working), sc.A.row(i).transpose())) {
            working.push_back(i);
            in_working[static_cast<std::size_t>(i)] = true;
        }
    }

    for (int it = 1; it <= cap; ++it) {
        sol.iterations = it;
        const Vector g = u - p.u_p;
        const Matrix aw = working_rows(sc, working);
        Vector lambda;
        Vector step;
        if (working.empty()) {
            step = -g;
        } else {
            Eigen::ColPivHouseholderQR<Matrix> qr(aw.transpose());
            lambda = qr.solve(g);
            step = -(g - aw.transpose() * lambda);
        }

        if (step.norm() <= 1e-12 * (1.0 + g.norm())) {
            int drop = -1;
            double most_negative = -cfg.kkt_tol;
            for (std::size_t k = 0; k < working.size(); ++k) {
                if (lambda[static_cast<Eigen::Index>(k)] < most_negative) {
                    most_negative = lambda[static_cast<Eigen::Index>(k)];
                    drop = static_cast<int>(k);
                }
            }
            if (drop < 0) {
                sol.status = QpStatus::optimal;
                sol.u = u;
                sol.active_set = working;
                std::sort(sol.active_set.begin(), sol.active_set.end());
                return sol;
            }
            in_working[static_cast<std::size_t>(working[static_cast<std::size_t>(drop)])] = false;
            working.erase(working.begin() + drop);
            continue;
        }

        double alpha = 1.0;
        int blocking = -1;
        for (int i = 0; i < total; ++i) {
            if (in_working[static_cast<std::size_t>(i)]) continue;
            const double ap = sc.A.row(i).dot(step);
            if (ap >= -1e-14) continue;
            const double limit = std::max(0.0, (sc.b[i] - sc.A.row(i).dot(u)) / ap);
            if (limit < alpha) {
                alpha = limit;
                blocking = i;
            }
        }
        u += alpha * step;
        if (blocking >= 0) {
            working.push_back(blocking);
            in_working[static_cast<std::size_t>(blocking)] = true;
        }
    }

    sol.status = QpStatus::solver_failure;
    sol.u = u;
    sol.active_set = working;
    return sol;
}

}  // namespace drbcbf
