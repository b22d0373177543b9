#include "drbcbf/bounds.hpp"
#include "drbcbf/cli.hpp"
#include "drbcbf/disturbance.hpp"
#include "drbcbf/errors.hpp"
#include "drbcbf/filter.hpp"
#include "drbcbf/flow.hpp"
#include "drbcbf/qp.hpp"
#include "drbcbf/scenario.hpp"
#include "drbcbf/sim.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace drbcbf;

namespace {

ScenarioOverrides overrides_from(const py::dict& d) {
    ScenarioOverrides o;
    for (const auto& [key_obj, value] : d) {
        const auto key = key_obj.cast<std::string>();
        if (key == "xi") o.xi = value.cast<double>();
        else if (key == "T") o.horizon_T = value.cast<double>();
        else if (key == "dt") o.dt = value.cast<double>();
        else if (key == "alpha") o.alpha = value.cast<double>();
        else if (key == "alpha_b") o.alpha_b = value.cast<double>();
        else if (key == "kb") o.kb = value.cast<double>();
        else if (key == "sim_horizon") o.sim_horizon = value.cast<double>();
        else if (key == "sim_step") o.sim_step = value.cast<double>();
        else if (key == "x0") o.x0 = value.cast<Vector>();
        else if (key == "seed") o.seed = value.cast<std::uint64_t>();
        else if (key == "disturbance") o.disturbance = parse_disturbance_kind(value.cast<std::string>());
        else if (key == "hold") o.disturbance_hold = value.cast<double>();
        else throw py::key_error("unknown scenario override '" + key + "'");
    }
    return o;
}

py::dict solution_dict(const QpSolution& s) {
    py::dict d;
    d["status"] = std::string(to_string(s.status));
    d["u"] = s.u;
    d["active_set"] = s.active_set;
    d["iterations"] = s.iterations;
    d["max_violation"] = s.max_violation;
    return d;
}

QpProblem make_problem(const Vector& u_p, const Matrix& A, const Vector& b, const Vector& lower, const Vector& upper) {
    QpProblem p;
    p.u_p = u_p;
    p.A = A.size() == 0 ? Matrix(0, u_p.size()) : A;
    p.b = b;
    p.box = ControlBox(lower, upper);
    return p;
}

}  // namespace

PYBIND11_MODULE(_drbcbf, m) {
    m.doc() = "Disturbance-robust backup control barrier function safety filter";

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_RuntimeError);
    py::register_exception<PropagationError>(m, "PropagationError", PyExc_ArithmeticError);

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("x0", &Scenario::x0)
        .def_readonly("sim_step", &Scenario::sim_step)
        .def_readonly("sim_horizon", &Scenario::sim_horizon)
        .def_readonly("sweep_horizons", &Scenario::sweep_horizons)
        .def_readonly("shrink_horizon", &Scenario::shrink_horizon)
        .def_readonly("parameters", &Scenario::parameters)
        .def_property_readonly("xi", [](const Scenario& s) { return s.xi.xi(); })
        .def_property_readonly("horizon", [](const Scenario& s) { return s.grid.horizon(); })
        .def_property_readonly("dt", [](const Scenario& s) { return s.grid.dt(); })
        .def_property_readonly("state_dim", [](const Scenario& s) { return s.problem.model.state_dim; })
        .def_property_readonly("control_dim", [](const Scenario& s) { return s.problem.model.control_dim; })
        .def_property_readonly("bound", [](const Scenario& s) { return std::string(to_string(s.bound)); })
        .def("safe_value", [](const Scenario& s, const Vector& x) { return s.problem.safe.value(x); })
        .def("backup_control", [](const Scenario& s, const Vector& x) { return s.problem.policy.control(x); })
        .def("primary", [](const Scenario& s, double t, const Vector& x) { return s.primary(t, x); })
        .def("dynamics", [](const Scenario& s, const Vector& x, const Vector& u) {
            return eval_dynamics(s.problem.model, x, u);
        });

    m.def("make_scenario", [](const std::string& name, const py::dict& overrides) {
        return make_scenario(name, overrides_from(overrides));
    }, py::arg("name"), py::arg("overrides") = py::dict());
    m.def("scenario_names", [] {
        std::vector<std::string> names;
        for (const auto& [name, s] : builtin_scenarios()) names.push_back(name);
        return names;
    });

    m.def("propagate_backup_flow", [](const Scenario& s, const Vector& x0, std::optional<double> T) {
        const FlowGrid grid = T ? FlowGrid(*T, s.grid.dt()) : s.grid;
        const FlowTrajectory tr = propagate_backup_flow(s.problem.model, s.problem.policy, x0, grid);
        Matrix states(tr.size(), s.problem.model.state_dim);
        for (int k = 0; k < tr.size(); ++k) states.row(k) = tr.states[k].transpose();
        py::dict d;
        d["times"] = tr.times;
        d["states"] = states;
        d["stms"] = tr.stms;
        return d;
    }, py::arg("scenario"), py::arg("x0"), py::arg("T") = py::none());

    m.def("deviation_bound", [](const Scenario& s, std::optional<double> xi, std::optional<double> T) {
        const FlowGrid grid = T ? FlowGrid(*T, s.grid.dt()) : s.grid;
        return deviation_bound(s.bound, DisturbanceBound(xi.value_or(s.xi.xi())), s.problem.policy, grid).values;
    }, py::arg("scenario"), py::arg("xi") = py::none(), py::arg("T") = py::none());
    m.def("gronwall_delta_max", [](double xi, double lipschitz, double T, double dt) {
        return gronwall_delta_max(DisturbanceBound(xi), lipschitz, FlowGrid(T, dt)).values;
    }, py::arg("xi"), py::arg("lipschitz"), py::arg("T"), py::arg("dt"));
    m.def("contraction_delta_max", [](double xi, double rate, double T, double dt) {
        return contraction_delta_max(DisturbanceBound(xi), rate, FlowGrid(T, dt)).values;
    }, py::arg("xi"), py::arg("rate"), py::arg("T"), py::arg("dt"));

    m.def("filter_control", [](const Scenario& s, const Vector& x, const Vector& u_p, bool robust) {
        const FilterOutput out = filter_control(x, u_p, s.problem, s.filter_config(robust));
        py::dict d;
        d["u_safe"] = out.u_safe;
        d["mode"] = std::string(to_string(out.mode));
        d["qp"] = solution_dict(out.qp);
        d["margins"] = out.margins;
        return d;
    }, py::arg("scenario"), py::arg("x"), py::arg("u_p"), py::arg("robust") = true);

    m.def("certify_membership", [](const Scenario& s, const Vector& x, bool robust, std::optional<double> T) {
        const FilterConfig cfg = T ? s.filter_config_for(FlowGrid(*T, s.grid.dt()), robust) : s.filter_config(robust);
        const Certificate c = certify_membership(x, s.problem, cfg);
        py::dict d;
        d["inside"] = c.inside;
        d["trajectory_slack"] = c.trajectory_slack;
        d["terminal_slack"] = c.terminal_slack;
        return d;
    }, py::arg("scenario"), py::arg("x"), py::arg("robust") = true, py::arg("T") = py::none());

    m.def("solve_qp", [](const Vector& u_p, const Matrix& A, const Vector& b, const Vector& lower, const Vector& upper) {
        return solution_dict(solve_qp(make_problem(u_p, A, b, lower, upper)));
    }, py::arg("u_p"), py::arg("A"), py::arg("b"), py::arg("lower"), py::arg("upper"));
    m.def("check_feasible", [](const Vector& u_p, const Matrix& A, const Vector& b, const Vector& lower,
                               const Vector& upper) {
        const FeasibilityReport r = check_feasible(make_problem(u_p, A, b, lower, upper));
        py::dict d;
        d["feasible"] = r.feasible;
        d["max_violation"] = r.max_violation;
        d["point"] = r.point;
        return d;
    }, py::arg("u_p"), py::arg("A"), py::arg("b"), py::arg("lower"), py::arg("upper"));

    m.def("simulate", [](const Scenario& s, bool robust) {
        SimResult r;
        {
            py::gil_scoped_release release;
            r = simulate_closed_loop(s, robust);
        }
        const int n = static_cast<int>(r.steps.size());
        const int nx = s.problem.model.state_dim;
        const int nu = s.problem.model.control_dim;
        Matrix x(n, nx), up(n, nu), u(n, nu);
        std::vector<double> t, h, margin;
        std::vector<std::string> mode;
        std::vector<bool> certified;
        for (int i = 0; i < n; ++i) {
            const SimStep& st = r.steps[static_cast<std::size_t>(i)];
            x.row(i) = st.x.transpose();
            up.row(i) = st.u_p.transpose();
            u.row(i) = st.u_safe.transpose();
            t.push_back(st.t);
            h.push_back(st.h);
            margin.push_back(st.min_margin);
            mode.emplace_back(to_string(st.mode));
            certified.push_back(st.certified);
        }
        const SimSummary sum = summarize(r);
        py::dict summary;
        summary["min_h"] = sum.min_h;
        summary["violations"] = sum.violations;
        summary["fallbacks"] = sum.fallbacks;
        summary["outside_certificate"] = sum.outside_certificate;
        py::dict d;
        d["t"] = t;
        d["x"] = x;
        d["u_p"] = up;
        d["u_safe"] = u;
        d["mode"] = mode;
        d["h"] = h;
        d["min_margin"] = margin;
        d["certified"] = certified;
        d["outside_guarantee"] = r.outside_guarantee;
        d["aborted"] = r.aborted;
        d["error"] = r.error;
        d["summary"] = summary;
        return d;
    }, py::arg("scenario"), py::arg("robust") = true);

    m.def("certify_region", [](const Scenario& s, std::optional<double> T, bool robust) {
        const FilterConfig cfg = T ? s.filter_config_for(FlowGrid(*T, s.grid.dt()), robust) : s.filter_config(robust);
        RegionResult r;
        {
            py::gil_scoped_release release;
            r = certify_region(s, cfg);
        }
        Matrix pts(static_cast<Eigen::Index>(r.cells.size()), s.problem.model.state_dim);
        std::vector<bool> inside;
        for (std::size_t i = 0; i < r.cells.size(); ++i) {
            pts.row(static_cast<Eigen::Index>(i)) = r.cells[i].x.transpose();
            inside.push_back(r.cells[i].cert.inside);
        }
        py::dict d;
        d["points"] = pts;
        d["inside"] = inside;
        d["inside_count"] = r.inside_count();
        return d;
    }, py::arg("scenario"), py::arg("T") = py::none(), py::arg("robust") = true);

    m.def("disturbance", [](const Scenario& s, double t) { return disturbance_signal(s.disturbance, t); },
          py::arg("scenario"), py::arg("t"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::vector<std::string> full = {"drbcbf"};
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : full) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int rc = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(rc, out.str(), err.str());
    }, py::arg("args"));
}
