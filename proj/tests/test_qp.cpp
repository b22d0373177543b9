#include "doctest.h"

#include "drbcbf/disturbance.hpp"
#include "drbcbf/qp.hpp"
#include "support/oracles.hpp"

using namespace drbcbf;

namespace {

QpProblem one_dim(double u_p, std::vector<std::pair<double, double>> rows, double lo = -1.0, double hi = 1.0) {
    QpProblem p;
    p.u_p = Vector::Constant(1, u_p);
    p.A = Matrix(static_cast<Eigen::Index>(rows.size()), 1);
    p.b = Vector(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        p.A(static_cast<Eigen::Index>(i), 0) = rows[i].first;
        p.b[static_cast<Eigen::Index>(i)] = rows[i].second;
    }
    p.box = ControlBox(Vector::Constant(1, lo), Vector::Constant(1, hi));
    return p;
}

QpProblem random_problem(SampleStream& rng, int m, int rows) {
    QpProblem p;
    p.u_p = Vector(m);
    for (int j = 0; j < m; ++j) p.u_p[j] = rng.uniform(-3.0, 3.0);
    p.A = Matrix(rows, m);
    p.b = Vector(rows);
    for (int i = 0; i < rows; ++i) {
        p.A.row(i) = rng.uniform(0.5, 2.0) * rng.unit_vector(m).transpose();
        p.b[i] = rng.uniform(-1.0, 1.0);
    }
    Vector lo(m), hi(m);
    for (int j = 0; j < m; ++j) {
        lo[j] = rng.uniform(-1.0, -0.2);
        hi[j] = rng.uniform(0.2, 1.0);
    }
    p.box = ControlBox(lo, hi);
    return p;
}

}  // namespace

TEST_CASE("single active lower bound") {
    const QpSolution s = solve_qp(one_dim(0.0, {{1.0, 0.5}}));
    CHECK(s.status == QpStatus::optimal);
    CHECK(s.u[0] == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(s.active_set.size() == 1);
    CHECK(s.active_set[0] == 0);
}

TEST_CASE("conflicting rows are infeasible") {
    const QpSolution s = solve_qp(one_dim(0.0, {{1.0, 0.5}, {-1.0, 0.0}}));
    CHECK(s.status == QpStatus::infeasible);
    CHECK(s.max_violation == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("row demanding more than the box allows") {
    const FeasibilityReport r = check_feasible(one_dim(0.0, {{1.0, 1.75}}));
    CHECK_FALSE(r.feasible);
    CHECK(r.max_violation == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(r.point[0] == doctest::Approx(1.0));
}

TEST_CASE("unconstrained problems clamp to the box") {
    QpProblem p = one_dim(2.5, {});
    QpSolution s = solve_qp(p);
    CHECK(s.status == QpStatus::optimal);
    CHECK(s.u[0] == doctest::Approx(1.0));
    p = one_dim(0.3, {});
    s = solve_qp(p);
    CHECK(s.u[0] == doctest::Approx(0.3));
    CHECK(s.iterations == 0);
}

TEST_CASE("redundant and degenerate rows") {
    // the same constraint three times
    const QpSolution s = solve_qp(one_dim(-1.0, {{1.0, 0.2}, {2.0, 0.4}, {1.0, 0.2}}));
    CHECK(s.status == QpStatus::optimal);
    CHECK(s.u[0] == doctest::Approx(0.2).epsilon(1e-12));
    // zero row with satisfied right-hand side
    const QpSolution z = solve_qp(one_dim(0.4, {{0.0, -1.0}}));
    CHECK(z.status == QpStatus::optimal);
    CHECK(z.u[0] == doctest::Approx(0.4));
    // zero row with positive right-hand side
    CHECK(solve_qp(one_dim(0.4, {{0.0, 1.0}})).status == QpStatus::infeasible);
}

TEST_CASE("matches the exact active-set oracle on random problems") {
    SampleStream rng(2024);
    int feasible = 0;
    int infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 1 + trial % 3;
        const QpProblem p = random_problem(rng, m, static_cast<int>(rng.next_u64() % 7));
        const double margin = oracle::feasibility_margin(p);
        if (std::abs(margin) < 1e-3) continue;
        const QpSolution s = solve_qp(p);
        CAPTURE(trial);
        if (margin > 0.0) {
            ++feasible;
            REQUIRE(s.status == QpStatus::optimal);
            const oracle::ExactQp ex = oracle::exact_qp(p);
            REQUIRE(ex.feasible);
            CHECK((s.u - ex.u).norm() <= 1e-8);
            CHECK(p.box.contains(s.u, 1e-12));
            if (p.rows() > 0) CHECK((p.A * s.u - p.b).minCoeff() >= -1e-9);
        } else {
            ++infeasible;
            CHECK(s.status == QpStatus::infeasible);
            CHECK(s.max_violation == doctest::Approx(-margin).epsilon(1e-8));
        }
    }
    CHECK(feasible > 50);
    CHECK(infeasible > 20);
}

TEST_CASE("solution is the projection of u_p onto the feasible set") {
    SampleStream rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 1 + trial % 3;
        const QpProblem p = random_problem(rng, m, 1 + static_cast<int>(rng.next_u64() % 4));
        const QpSolution s = solve_qp(p);
        if (s.status != QpStatus::optimal) continue;
        // variational inequality (u_p - u)^T (v - u) <= 0 for feasible v
        for (int i = 0; i < 50; ++i) {
            Vector v(m);
            for (int j = 0; j < m; ++j) v[j] = rng.uniform(p.box.lower[j], p.box.upper[j]);
            if ((p.A * v - p.b).minCoeff() < 0.0) continue;
            CHECK((p.u_p - s.u).dot(v - s.u) <= 1e-9);
        }
    }
}

TEST_CASE("repeated solves are bit-identical") {
    SampleStream rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const QpProblem p = random_problem(rng, 3, 6);
        const QpSolution a = solve_qp(p);
        const QpSolution b = solve_qp(p);
        CHECK(a.status == b.status);
        CHECK(a.iterations == b.iterations);
        CHECK(a.active_set == b.active_set);
        if (a.status == QpStatus::optimal) {
            for (int j = 0; j < 3; ++j) CHECK(a.u[j] == b.u[j]);
        }
    }
}

TEST_CASE("iteration cap reports solver failure") {
    SampleStream rng(8);
    SolverConfig cfg;
    cfg.max_iterations = 1;
    int failures = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const QpProblem p = random_problem(rng, 3, 6);
        const QpSolution s = solve_qp(p, cfg);
        if (s.status == QpStatus::solver_failure) ++failures;
        CHECK((s.status != QpStatus::optimal || s.iterations <= 1));
    }
    CHECK(failures > 0);
}
