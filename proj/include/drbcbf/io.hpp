#pragma once

#include "drbcbf/scenario.hpp"
#include "drbcbf/sim.hpp"

#include <iosfwd>
#include <string>

namespace drbcbf {

/// 17 significant digits; exact round trip through strtod.
std::string format_double(double v);

/// Header: t,x1..xn,up1..upm,u1..um,mode,h,min_margin,cert,qp_iters,step_us
void write_trajectory_csv(std::ostream& out, const SimResult& r);

/// Inverse of write_trajectory_csv. Throws ConfigError on malformed input.
SimResult read_trajectory_csv(std::istream& in);

/// Header: x1..xn,inside,trajectory_slack,terminal_slack
void write_region_csv(std::ostream& out, const RegionResult& region);

/// Pretty-printed JSON summary of one run (min h, violation and fallback counts, solve times).
std::string summary_json(const Scenario& s, const SimResult& r);

}  // namespace drbcbf
