#include "drbcbf/scenario.hpp"

#include "drbcbf/errors.hpp"

#include <cmath>
#include <numbers>

namespace drbcbf {

int StateGrid::count() const {
    int total = 1;
    for (int c : cells) total *= c;
    return total;
}

Vector StateGrid::point(int flat_index) const {
    Vector x(lower.size());
    for (Eigen::Index d = 0; d < lower.size(); ++d) {
        const int c = cells[static_cast<std::size_t>(d)];
        const int i = flat_index % c;
        flat_index /= c;
        x[d] = c == 1 ? 0.5 * (lower[d] + upper[d]) : lower[d] + (upper[d] - lower[d]) * i / (c - 1);
    }
    return x;
}

FilterConfig Scenario::filter_config_for(const FlowGrid& g, bool robust) const {
    return make_filter_config(problem, g, gains, bound, robust ? xi : DisturbanceBound(0.0));
}

FilterConfig Scenario::filter_config(bool robust) const { return filter_config_for(grid, robust); }

namespace {

Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

Vector cross(const Vector& a, const Vector& b) {
    return Eigen::Vector3d(a.head<3>()).cross(Eigen::Vector3d(b.head<3>()));
}

Matrix cross_matrix(const Vector& v) {
    Matrix m(3, 3);
    m << 0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0;
    return m;
}

// d/dw (w x J w) = [w]x J - [J w]x
Matrix gyroscopic_jacobian(const Matrix& inertia, const Vector& w) {
    return cross_matrix(w) * inertia - cross_matrix(inertia * w);
}

}  // namespace

// States (position, velocity), u = acceleration in [-1, 1]. Safe set -x1 >= 0, backup set
// {-x1 >= 0, -x2 >= 0} reached by full braking u_b = -1.
//
// Constants:
//   L_h = L_hb = 1          gradients [-1, 0] and [0, -1]
//   L_cl = 1                F_cl = [[0, 1], [0, 0]] has spectral norm 1
//   speed = sqrt(vmax^2+1)  sup ||(x2, -1)|| over the operating domain |x2| <= vmax = 2
Scenario make_double_integrator(const ScenarioOverrides& o) {
    const double xi = o.xi.value_or(0.08);
    const double horizon = o.horizon_T.value_or(1.25);
    const double dt = o.dt.value_or(0.01);
    const double vmax = 2.0;

    Scenario s;
    s.name = "double_integrator";
    auto& pb = s.problem;
    pb.model.state_dim = 2;
    pb.model.control_dim = 1;
    pb.model.drift = [](const Vector& x) { return vec({x[1], 0.0}); };
    pb.model.input_matrix = [](const Vector&) {
        Matrix g(2, 1);
        g << 0.0, 1.0;
        return g;
    };
    pb.model.domain_speed_bound = std::sqrt(vmax * vmax + 1.0);
    pb.box = ControlBox(vec({-1.0}), vec({1.0}));

    pb.policy.control = [](const Vector&) { return vec({-1.0}); };
    pb.policy.closed_loop_jacobian = [](const Vector&) {
        Matrix f(2, 2);
        f << 0.0, 1.0, 0.0, 0.0;
        return f;
    };
    pb.policy.lipschitz_cl = 1.0;

    pb.safe = {"position", [](const Vector& x) { return -x[0]; }, [](const Vector&) { return vec({-1.0, 0.0}); },
               1.0};
    pb.backup = {
        {"position", [](const Vector& x) { return -x[0]; }, [](const Vector&) { return vec({-1.0, 0.0}); }, 1.0},
        {"velocity", [](const Vector& x) { return -x[1]; }, [](const Vector&) { return vec({0.0, -1.0}); }, 1.0},
    };

    s.grid = FlowGrid(horizon, dt);
    s.gains = RowGains{ClassKappa(o.alpha.value_or(10.0)), ClassKappa(o.alpha_b.value_or(10.0))};
    s.bound = BoundKind::gronwall;
    s.xi = DisturbanceBound(xi);
    s.primary = [](double, const Vector&) { return vec({1.0}); };

    const DisturbanceKind kind = o.disturbance.value_or(DisturbanceKind::constant_direction);
    s.seed = o.seed.value_or(1);
    if (kind == DisturbanceKind::constant_direction) {
        s.disturbance = DisturbanceSignal::constant(xi, vec({1.0, 1.0}));
    } else if (kind == DisturbanceKind::random_piecewise) {
        s.disturbance = DisturbanceSignal::random(xi, 2, s.seed, o.disturbance_hold.value_or(0.5));
    } else {
        s.disturbance = DisturbanceSignal::sinusoidal(xi, vec({0.5, 0.5}), vec({0.0, std::numbers::pi / 2}));
    }

    s.sim_step = o.sim_step.value_or(dt);
    s.sim_horizon = o.sim_horizon.value_or(8.0);
    s.x0 = o.x0.value_or(vec({-2.0, 0.0}));
    if (s.x0.size() != 2) throw ParameterError("double integrator x0 must have 2 components");

    s.region = StateGrid{vec({-3.0, -2.0}), vec({0.0, 2.0}), {61, 81}};
    s.sweep_horizons = {0.5, 0.75, 1.0, 1.25};
    s.shrink_horizon = 4.0;
    s.parameters = {{"xi", xi}, {"T", horizon}, {"dt", dt}, {"alpha", s.gains.alpha.gain()},
                    {"alpha_b", s.gains.alpha_b.gain()}, {"vmax", vmax}};
    return s;
}

double spacecraft_min_backup_gain(double lambda_max, double lambda_min, double gamma, double xi) {
    return lambda_max * xi / std::sqrt(2.0 * gamma * lambda_min);
}

// Euler rotational dynamics wdot = J^-1 (-w x J w + u), J = diag(12, 12, 5), u in [-1, 1]^3.
// Backup law u_b = -kb J w + w x J w gives f_cl(w) = -kb w, contracting at rate kb.
//
// Constants (operating domain is the safe ball ||w|| <= wmax):
//   h   = wmax^2 - ||w||^2,   L_h  = 2 wmax
//   h_b = gamma - w^T J w / 2, L_hb = lambda_max wmax
//   speed = kb wmax
//   kb = 1 exceeds lambda_max xi / sqrt(2 gamma lambda_min) = 0.268 (picked, not derived)
Scenario make_spacecraft(const ScenarioOverrides& o) {
    const double xi = o.xi.value_or(0.1);
    const double horizon = o.horizon_T.value_or(1.75);
    const double dt = o.dt.value_or(0.05);
    const double kb = o.kb.value_or(1.0);
    const double wmax = 1.0;
    const double gamma = 2.0;
    if (!(kb > 0.0)) throw ParameterError("spacecraft backup gain kb must be positive");

    Matrix inertia = Matrix::Zero(3, 3);
    inertia.diagonal() = vec({12.0, 12.0, 5.0});
    const Matrix inertia_inv = inertia.inverse();
    const double lambda_max = inertia.diagonal().maxCoeff();
    const double lambda_min = inertia.diagonal().minCoeff();

    Scenario s;
    s.name = "spacecraft";
    auto& pb = s.problem;
    pb.model.state_dim = 3;
    pb.model.control_dim = 3;
    pb.model.drift = [inertia, inertia_inv](const Vector& w) -> Vector {
        return -inertia_inv * cross(w, inertia * w);
    };
    pb.model.input_matrix = [inertia_inv](const Vector&) { return inertia_inv; };
    pb.model.domain_speed_bound = kb * wmax;
    pb.box = ControlBox(Vector::Constant(3, -1.0), Vector::Constant(3, 1.0));

    pb.policy.control = [inertia, kb](const Vector& w) -> Vector {
        return -kb * inertia * w + cross(w, inertia * w);
    };
    pb.policy.closed_loop_jacobian = [inertia, inertia_inv, kb](const Vector& w) -> Matrix {
        const Matrix gyro = gyroscopic_jacobian(inertia, w);
        const Matrix drift_jac = -inertia_inv * gyro;
        const Matrix control_jac = -kb * inertia + gyro;
        return drift_jac + inertia_inv * control_jac;
    };
    pb.policy.lipschitz_cl = kb;
    pb.policy.contraction_rate = kb;

    pb.safe = {"rate_limit", [wmax](const Vector& w) { return wmax * wmax - w.squaredNorm(); },
               [](const Vector& w) -> Vector { return -2.0 * w; }, 2.0 * wmax};
    pb.backup = {{"energy", [inertia, gamma](const Vector& w) { return gamma - 0.5 * w.dot(inertia * w); },
                  [inertia](const Vector& w) -> Vector { return -(inertia * w); }, lambda_max * wmax}};

    s.grid = FlowGrid(horizon, dt);
    s.gains = RowGains{ClassKappa(o.alpha.value_or(1.0)), ClassKappa(o.alpha_b.value_or(1.0))};
    s.bound = BoundKind::contraction;
    s.xi = DisturbanceBound(xi);
    s.primary = [](double t, const Vector&) {
        const double pi = std::numbers::pi;
        return vec({std::sin(t / 2.0), std::sin(t / 2.0 - pi / 4.0), std::sin(t / 4.0 + pi / 4.0)});
    };

    const DisturbanceKind kind = o.disturbance.value_or(DisturbanceKind::sinusoidal_direction);
    s.seed = o.seed.value_or(1);
    const double pi = std::numbers::pi;
    if (kind == DisturbanceKind::sinusoidal_direction) {
        s.disturbance = DisturbanceSignal::sinusoidal(xi, vec({0.5, 0.5, 0.5}), vec({pi / 2.0, 0.0, -pi / 2.0}));
    } else if (kind == DisturbanceKind::random_piecewise) {
        s.disturbance = DisturbanceSignal::random(xi, 3, s.seed, o.disturbance_hold.value_or(0.5));
    } else {
        s.disturbance = DisturbanceSignal::constant(xi, vec({1.0, 1.0, 1.0}));
    }

    s.sim_step = o.sim_step.value_or(dt);
    s.sim_horizon = o.sim_horizon.value_or(60.0);
    s.x0 = o.x0.value_or(Vector::Zero(3));
    if (s.x0.size() != 3) throw ParameterError("spacecraft x0 must have 3 components");

    s.region = StateGrid{Vector::Constant(3, -1.0), Vector::Constant(3, 1.0), {21, 21, 21}};
    s.sweep_horizons = {0.5, 1.0, 1.75, 2.5};
    s.shrink_horizon = 0.0;
    s.parameters = {{"xi", xi},       {"T", horizon},     {"dt", dt},
                    {"kb", kb},       {"wmax", wmax},     {"gamma", gamma},
                    {"alpha", s.gains.alpha.gain()},      {"alpha_b", s.gains.alpha_b.gain()},
                    {"kb_min", spacecraft_min_backup_gain(lambda_max, lambda_min, gamma, xi)}};
    return s;
}

Scenario make_scenario(const std::string& name, const ScenarioOverrides& o) {
    if (name == "double_integrator") return make_double_integrator(o);
    if (name == "spacecraft") return make_spacecraft(o);
    throw ParameterError("unknown scenario '" + name + "' (expected double_integrator or spacecraft)");
}

std::map<std::string, Scenario> builtin_scenarios() {
    std::map<std::string, Scenario> out;
    out.emplace("double_integrator", make_double_integrator());
    out.emplace("spacecraft", make_spacecraft());
    return out;
}

}  // namespace drbcbf
