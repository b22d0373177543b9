#include "doctest.h"

#include "drbcbf/disturbance.hpp"
#include "drbcbf/errors.hpp"
#include "drbcbf/flow.hpp"
#include "drbcbf/scenario.hpp"

#include <cmath>

using namespace drbcbf;

namespace {

// xdot = c x with no input, backup u = 0.
struct Linear1d {
    SystemModel model;
    BackupPolicy policy;
};

Linear1d scalar_linear(double c) {
    Linear1d s;
    s.model.state_dim = 1;
    s.model.control_dim = 1;
    s.model.drift = [c](const Vector& x) -> Vector { return c * x; };
    s.model.input_matrix = [](const Vector&) -> Matrix { return Matrix::Zero(1, 1); };
    s.policy.control = [](const Vector&) -> Vector { return Vector::Zero(1); };
    s.policy.closed_loop_jacobian = [c](const Vector&) -> Matrix { return Matrix::Constant(1, 1, c); };
    s.policy.lipschitz_cl = std::abs(c);
    return s;
}

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

double final_error(double c, double dt) {
    const Linear1d s = scalar_linear(c);
    const FlowTrajectory tr = propagate_backup_flow(s.model, s.policy, Vector::Ones(1), FlowGrid(1.0, dt));
    return std::abs(tr.states.back()[0] - std::exp(c));
}

}  // namespace

TEST_CASE("grid divisibility") {
    const FlowGrid g(1.25, 0.01);
    CHECK(g.steps() == 125);
    CHECK(g.points() == 126);
    CHECK(g.time(125) == 1.25);
    CHECK(g.time(3) == doctest::Approx(0.03));
    CHECK_THROWS_AS(FlowGrid(1.25, 0.02), ParameterError);
    CHECK_THROWS_AS(FlowGrid(-1.0, 0.1), ParameterError);
    CHECK_THROWS_AS(FlowGrid(1.0, 0.0), ParameterError);
    try {
        FlowGrid(1.25, 0.02);
    } catch (const ParameterError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("T=1.25") != std::string::npos);
        CHECK(msg.find("dt=0.02") != std::string::npos);
    }
}

TEST_CASE("zero vector field leaves state and sensitivity unchanged") {
    Linear1d s = scalar_linear(0.0);
    const FlowTrajectory tr = propagate_backup_flow(s.model, s.policy, Vector::Constant(1, 0.7), FlowGrid(1.0, 0.1));
    REQUIRE(tr.size() == 11);
    for (int k = 0; k < tr.size(); ++k) {
        CHECK(tr.states[k][0] == 0.7);
        CHECK(tr.stms[k](0, 0) == 1.0);
    }
}

TEST_CASE("scalar decay single RK4 step") {
    const Linear1d s = scalar_linear(-1.0);
    const AugmentedState a = rk4_step_augmented(s.model, s.policy, Vector::Ones(1), Matrix::Identity(1, 1), 0.1);
    CHECK(a.state[0] == doctest::Approx(0.9048375).epsilon(1e-12));
    CHECK(a.stm(0, 0) == doctest::Approx(0.9048375).epsilon(1e-12));
}

TEST_CASE("double integrator single step and full horizon") {
    const Scenario s = make_double_integrator();
    const AugmentedState a =
        rk4_step_augmented(s.problem.model, s.problem.policy, vec2(0.0, 1.0), Matrix::Identity(2, 2), 0.5);
    CHECK(a.state[0] == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(a.state[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(a.stm(0, 0) == doctest::Approx(1.0));
    CHECK(a.stm(0, 1) == doctest::Approx(0.5));
    CHECK(a.stm(1, 0) == doctest::Approx(0.0));
    CHECK(a.stm(1, 1) == doctest::Approx(1.0));

    const FlowTrajectory tr = propagate_backup_flow(s.problem.model, s.problem.policy, vec2(-1.0, 0.0), FlowGrid(1.0, 0.01));
    CHECK(tr.states.back()[0] == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(tr.states.back()[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(tr.times.back() == 1.0);
}

TEST_CASE("spacecraft flow decays exponentially") {
    const Scenario s = make_spacecraft();
    Vector w0(3);
    w0 << 0.3, -0.2, 0.1;
    // at dt = 0.05 the flow is exactly the RK4 amplification factor applied k times
    const double h = 0.05;
    const double r = 1.0 - h + h * h / 2.0 - h * h * h / 6.0 + h * h * h * h / 24.0;
    const FlowTrajectory tr = propagate_backup_flow(s.problem.model, s.problem.policy, w0, FlowGrid(1.75, h));
    for (int k = 0; k < tr.size(); ++k) {
        const double rk = std::pow(r, k);
        CHECK((tr.states[k] - rk * w0).norm() <= 1e-13);
        CHECK((tr.stms[k] - rk * Matrix::Identity(3, 3)).norm() <= 1e-13);
        CHECK((tr.states[k] - std::exp(-tr.times[k]) * w0).norm() <= 2e-7 * std::exp(-tr.times[k]) * w0.norm());
    }
    // a tenfold finer step reaches the exact solution to 1e-9 relative
    const FlowTrajectory fine = propagate_backup_flow(s.problem.model, s.problem.policy, w0, FlowGrid(1.75, h / 10.0));
    for (int k = 0; k < fine.size(); ++k) {
        const double decay = std::exp(-fine.times[k]);
        CHECK((fine.states[k] - decay * w0).norm() <= 1e-9 * decay * w0.norm());
        CHECK((fine.stms[k] - decay * Matrix::Identity(3, 3)).norm() <= 1e-9 * decay * std::sqrt(3.0));
    }
}

TEST_CASE("sensitivity matrix matches flow perturbations") {
    SampleStream rng(21);
    for (const auto& [name, s] : builtin_scenarios()) {
        CAPTURE(name);
        const int n = s.problem.model.state_dim;
        for (int i = 0; i < 25; ++i) {
            Vector x(n);
            for (int j = 0; j < n; ++j) x[j] = rng.uniform(-1.0, 1.0);
            const Vector delta = 1e-6 * rng.unit_vector(n);
            const FlowTrajectory a = propagate_backup_flow(s.problem.model, s.problem.policy, x, s.grid);
            const FlowTrajectory b = propagate_backup_flow(s.problem.model, s.problem.policy, x + delta, s.grid);
            for (int k = 0; k < a.size(); ++k) {
                CHECK((b.states[k] - a.states[k] - a.stms[k] * delta).norm() <= 1e-9);
            }
        }
    }
}

TEST_CASE("semigroup property on the grid") {
    const Scenario s = make_spacecraft();
    Vector w0(3);
    w0 << 0.5, 0.4, -0.6;
    const FlowTrajectory whole = propagate_backup_flow(s.problem.model, s.problem.policy, w0, FlowGrid(2.0, 0.05));
    const FlowTrajectory first = propagate_backup_flow(s.problem.model, s.problem.policy, w0, FlowGrid(1.0, 0.05));
    const FlowTrajectory second =
        propagate_backup_flow(s.problem.model, s.problem.policy, first.states.back(), FlowGrid(1.0, 0.05));
    CHECK((whole.states.back() - second.states.back()).norm() <= 1e-12);
    CHECK((whole.stms.back() - second.stms.back() * first.stms.back()).norm() <= 1e-12);
}

TEST_CASE("RK4 converges at fourth order") {
    const double e1 = final_error(-2.0, 0.1);
    const double e2 = final_error(-2.0, 0.05);
    const double order = std::log2(e1 / e2);
    CHECK(order == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("non-finite flow reports the failing step") {
    const Linear1d s = scalar_linear(1e200);
    try {
        propagate_backup_flow(s.model, s.policy, Vector::Ones(1), FlowGrid(1.0, 0.1));
        FAIL("expected PropagationError");
    } catch (const PropagationError& e) {
        CHECK(e.step() >= 0);
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }
}
