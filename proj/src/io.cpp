#include "drbcbf/io.hpp"

#include "drbcbf/errors.hpp"
#include "json_report.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace drbcbf {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_vector(std::ostream& out, const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << format_double(v[i]);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) fields.push_back(item);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_field(const std::string& s, int line) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw ConfigError("trajectory csv line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

int count_prefix(const std::vector<std::string>& header, const std::string& prefix) {
    int count = 0;
    for (const auto& h : header) {
        if (h.rfind(prefix, 0) == 0 && h.size() > prefix.size() &&
            h.find_first_not_of("0123456789", prefix.size()) == std::string::npos) {
            ++count;
        }
    }
    return count;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const SimResult& r) {
    const auto n = r.steps.empty() ? 0 : r.steps.front().x.size();
    const auto m = r.steps.empty() ? 0 : r.steps.front().u_p.size();
    out << 't';
    for (Eigen::Index i = 1; i <= n; ++i) out << ",x" << i;
    for (Eigen::Index i = 1; i <= m; ++i) out << ",up" << i;
    for (Eigen::Index i = 1; i <= m; ++i) out << ",u" << i;
    out << ",mode,h,min_margin,cert,qp_iters,step_us\n";
    for (const auto& st : r.steps) {
        out << format_double(st.t);
        write_vector(out, st.x);
        write_vector(out, st.u_p);
        write_vector(out, st.u_safe);
        out << ',' << to_string(st.mode) << ',' << format_double(st.h) << ',' << format_double(st.min_margin) << ','
            << (st.certified ? "inside" : "outside") << ',' << st.qp_iterations << ',' << format_double(st.step_us)
            << '\n';
    }
}

SimResult read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("trajectory csv is empty");
    const auto header = split_csv(line);
    const int n = count_prefix(header, "x");
    const int m = count_prefix(header, "up");
    const std::size_t expected = 1 + static_cast<std::size_t>(n + 2 * m) + 6;
    if (header.size() != expected || header.front() != "t") throw ConfigError("trajectory csv has an unexpected header");

    SimResult r;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != expected) {
            throw ConfigError("trajectory csv line " + std::to_string(line_no) + ": expected " +
                              std::to_string(expected) + " fields");
        }
        SimStep st;
        std::size_t c = 0;
        st.t = parse_field(f[c++], line_no);
        st.x.resize(n);
        st.u_p.resize(m);
        st.u_safe.resize(m);
        for (int i = 0; i < n; ++i) st.x[i] = parse_field(f[c++], line_no);
        for (int i = 0; i < m; ++i) st.u_p[i] = parse_field(f[c++], line_no);
        for (int i = 0; i < m; ++i) st.u_safe[i] = parse_field(f[c++], line_no);
        const std::string& mode = f[c++];
        if (mode != "qp" && mode != "backup") throw ConfigError("trajectory csv line " + std::to_string(line_no) + ": bad mode");
        st.mode = mode == "qp" ? FilterMode::qp_optimal : FilterMode::backup_fallback;
        st.h = parse_field(f[c++], line_no);
        st.min_margin = parse_field(f[c++], line_no);
        const std::string& cert = f[c++];
        if (cert != "inside" && cert != "outside") throw ConfigError("trajectory csv line " + std::to_string(line_no) + ": bad cert");
        st.certified = cert == "inside";
        st.qp_iterations = static_cast<int>(parse_field(f[c++], line_no));
        st.step_us = parse_field(f[c++], line_no);
        r.steps.push_back(std::move(st));
    }
    return r;
}

void write_region_csv(std::ostream& out, const RegionResult& region) {
    const auto n = region.cells.empty() ? 0 : region.cells.front().x.size();
    for (Eigen::Index i = 1; i <= n; ++i) out << (i > 1 ? "," : "") << 'x' << i;
    out << ",inside,trajectory_slack,terminal_slack\n";
    for (const auto& cell : region.cells) {
        for (Eigen::Index i = 0; i < cell.x.size(); ++i) out << (i > 0 ? "," : "") << format_double(cell.x[i]);
        out << ',' << (cell.cert.inside ? 1 : 0) << ',' << format_double(cell.cert.trajectory_slack) << ','
            << format_double(cell.cert.terminal_slack) << '\n';
    }
}

namespace detail {

nlohmann::json scenario_json(const Scenario& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["bound"] = std::string(to_string(s.bound));
    j["disturbance"] = std::string(to_string(s.disturbance.kind));
    j["sim_step"] = s.sim_step;
    j["sim_horizon"] = s.sim_horizon;
    j["x0"] = std::vector<double>(s.x0.data(), s.x0.data() + s.x0.size());
    j["parameters"] = s.parameters;
    return j;
}

nlohmann::json run_json(const SimResult& r) {
    const SimSummary sum = summarize(r);
    nlohmann::json j;
    j["robust"] = r.robust;
    j["steps"] = sum.steps;
    j["min_h"] = sum.min_h;
    j["violation_count"] = sum.violations;
    j["fallback_count"] = sum.fallbacks;
    j["outside_certificate_count"] = sum.outside_certificate;
    j["mean_solve_us"] = sum.mean_step_us;
    j["p99_solve_us"] = sum.p99_step_us;
    j["outside_guarantee"] = r.outside_guarantee;
    j["aborted"] = r.aborted;
    if (r.aborted) j["error"] = r.error;
    return j;
}

}  // namespace detail

std::string summary_json(const Scenario& s, const SimResult& r) {
    nlohmann::json j;
    j["scenario"] = detail::scenario_json(s);
    j["run"] = detail::run_json(r);
    return j.dump(2) + "\n";
}

}  // namespace drbcbf
