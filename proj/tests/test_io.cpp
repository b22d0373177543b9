#include "doctest.h"

#include "drbcbf/errors.hpp"
#include "drbcbf/io.hpp"
#include "drbcbf/scenario.hpp"
#include "drbcbf/sim.hpp"

#include "json.hpp"

#include <sstream>

using namespace drbcbf;

TEST_CASE("doubles round trip exactly") {
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 12345.678901234567, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("trajectory csv round trip") {
    ScenarioOverrides o;
    o.sim_horizon = 0.3;
    const SimResult r = simulate_closed_loop(make_spacecraft(o), true);
    std::stringstream buf;
    write_trajectory_csv(buf, r);
    const std::string text = buf.str();
    CHECK(text.rfind("t,x1,x2,x3,up1,up2,up3,u1,u2,u3,mode,h,min_margin,cert,qp_iters,step_us\n", 0) == 0);
    const SimResult back = read_trajectory_csv(buf);
    REQUIRE(back.steps.size() == r.steps.size());
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        CHECK(back.steps[i].t == r.steps[i].t);
        CHECK(back.steps[i].x == r.steps[i].x);
        CHECK(back.steps[i].u_safe == r.steps[i].u_safe);
        CHECK(back.steps[i].mode == r.steps[i].mode);
        CHECK(back.steps[i].certified == r.steps[i].certified);
        CHECK(back.steps[i].h == r.steps[i].h);
    }
    std::stringstream again;
    write_trajectory_csv(again, back);
    CHECK(again.str() == text);
}

TEST_CASE("malformed trajectory csv") {
    std::stringstream empty;
    CHECK_THROWS_AS(read_trajectory_csv(empty), ConfigError);
    std::stringstream bad("t,x1,up1,u1,mode,h,min_margin,cert,qp_iters,step_us\n0,1,2,3,fly,0,0,inside,0,0\n");
    CHECK_THROWS_AS(read_trajectory_csv(bad), ConfigError);
}

TEST_CASE("summary json fields") {
    ScenarioOverrides o;
    o.sim_horizon = 0.2;
    const Scenario s = make_double_integrator(o);
    const SimResult r = simulate_closed_loop(s, true);
    const auto j = nlohmann::json::parse(summary_json(s, r));
    CHECK(j.at("scenario").at("name") == "double_integrator");
    const auto& run = j.at("run");
    CHECK(run.contains("min_h"));
    CHECK(run.at("violation_count") == 0);
    CHECK(run.at("fallback_count") == 0);
    CHECK(run.at("steps") == 21);
}

TEST_CASE("region csv header") {
    Scenario s = make_double_integrator();
    s.region.cells = {2, 2};
    std::stringstream buf;
    write_region_csv(buf, certify_region(s, s.filter_config()));
    std::string header;
    std::getline(buf, header);
    CHECK(header == "x1,x2,inside,trajectory_slack,terminal_slack");
}
