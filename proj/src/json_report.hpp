#pragma once

#include "drbcbf/scenario.hpp"
#include "drbcbf/sim.hpp"

#include "json.hpp"

namespace drbcbf::detail {

nlohmann::json scenario_json(const Scenario& s);
nlohmann::json run_json(const SimResult& r);

}  // namespace drbcbf::detail
