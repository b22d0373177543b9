#include "doctest.h"

#include "drbcbf/disturbance.hpp"
#include "drbcbf/errors.hpp"
#include "drbcbf/model.hpp"
#include "drbcbf/scenario.hpp"

using namespace drbcbf;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

}  // namespace

TEST_CASE("double integrator dynamics") {
    const Scenario s = make_double_integrator();
    const Vector xdot = eval_dynamics(s.problem.model, vec({-1.0, 2.0}), vec({1.0}));
    CHECK(xdot[0] == doctest::Approx(2.0));
    CHECK(xdot[1] == doctest::Approx(1.0));
    const Vector cl = eval_backup_closed_loop(s.problem.model, s.problem.policy, vec({-1.0, 2.0}));
    CHECK(cl[0] == doctest::Approx(2.0));
    CHECK(cl[1] == doctest::Approx(-1.0));
}

TEST_CASE("spacecraft dynamics at rest") {
    const Scenario s = make_spacecraft();
    const Vector xdot = eval_dynamics(s.problem.model, Vector::Zero(3), vec({1.0, 0.0, 0.0}));
    CHECK(xdot[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK(xdot[1] == 0.0);
    CHECK(xdot[2] == 0.0);
}

TEST_CASE("spacecraft backup closed loop is -kb omega") {
    const Scenario s = make_spacecraft();
    SampleStream rng(11);
    for (int i = 0; i < 100; ++i) {
        const Vector w = rng.in_ball(3, 1.0);
        const Vector cl = eval_backup_closed_loop(s.problem.model, s.problem.policy, w);
        CHECK((cl + w).norm() <= 1e-12);
    }
}

TEST_CASE("analytic closed-loop Jacobians match finite differences") {
    SampleStream rng(5);
    for (const auto& [name, s] : builtin_scenarios()) {
        CAPTURE(name);
        for (int i = 0; i < 100; ++i) {
            Vector x(s.problem.model.state_dim);
            for (int j = 0; j < x.size(); ++j) x[j] = rng.uniform(-2.0, 2.0);
            const Matrix analytic = s.problem.policy.closed_loop_jacobian(x);
            const Matrix fd = finite_difference_closed_loop_jacobian(s.problem.model, s.problem.policy, x);
            CHECK((analytic - fd).norm() <= 1e-6 * (1.0 + analytic.norm()));
        }
    }
}

TEST_CASE("constraint gradients match finite differences") {
    SampleStream rng(6);
    for (const auto& [name, s] : builtin_scenarios()) {
        std::vector<ConstraintFunction> fns = s.problem.backup;
        fns.push_back(s.problem.safe);
        for (const auto& fn : fns) {
            CAPTURE(fn.name);
            for (int i = 0; i < 20; ++i) {
                Vector x(s.problem.model.state_dim);
                for (int j = 0; j < x.size(); ++j) x[j] = rng.uniform(-1.0, 1.0);
                const Vector g = fn.gradient(x);
                for (int j = 0; j < x.size(); ++j) {
                    Vector e = Vector::Zero(x.size());
                    e[j] = 1e-6;
                    const double fd = (fn.value(x + e) - fn.value(x - e)) / 2e-6;
                    CHECK(g[j] == doctest::Approx(fd).epsilon(1e-6));
                }
            }
        }
    }
}

TEST_CASE("class-K evaluation") {
    CHECK(eval_class_kappa(ClassKappa(2.0), 0.5) == doctest::Approx(1.0));
    CHECK(eval_class_kappa(ClassKappa(2.0), -0.5) == doctest::Approx(-1.0));
    CHECK(eval_class_kappa(ClassKappa(3.0), 0.0) == 0.0);
    CHECK_THROWS_AS(ClassKappa(0.0), ParameterError);
    CHECK_THROWS_AS(ClassKappa(-1.0), ParameterError);
}

TEST_CASE("control box and disturbance bound validation") {
    ControlBox box(vec({-1.0, -2.0}), vec({1.0, 2.0}));
    CHECK(box.contains(vec({0.5, -2.0})));
    CHECK_FALSE(box.contains(vec({1.5, 0.0})));
    CHECK(box.clamp(vec({3.0, -3.0})) == vec({1.0, -2.0}));
    CHECK_THROWS_AS(ControlBox(vec({1.0}), vec({-1.0})), ContractViolation);
    CHECK_THROWS_AS(ControlBox(vec({0.0}), vec({1.0, 2.0})), ContractViolation);
    CHECK_THROWS_AS(DisturbanceBound(-0.1), ParameterError);
    CHECK(DisturbanceBound(0.0).nominal());
}

TEST_CASE("dimension mismatches are contract violations") {
    const Scenario s = make_double_integrator();
    CHECK_THROWS_AS(eval_dynamics(s.problem.model, vec({1.0}), vec({0.0})), ContractViolation);
    CHECK_THROWS_AS(eval_dynamics(s.problem.model, vec({1.0, 0.0}), vec({0.0, 1.0})), ContractViolation);
}

TEST_CASE("double integrator backup input lies in the box") {
    const Scenario s = make_double_integrator();
    SampleStream rng(3);
    for (int i = 0; i < 50; ++i) {
        const Vector x = vec({rng.uniform(-3.0, 0.0), rng.uniform(-2.0, 2.0)});
        CHECK(s.problem.box.contains(s.problem.policy.control(x)));
    }
}
