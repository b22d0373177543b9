#include "drbcbf/bounds.hpp"

#include "drbcbf/errors.hpp"

#include <cmath>
#include <string>

namespace drbcbf {

std::string_view to_string(BoundKind kind) {
    switch (kind) {
        case BoundKind::gronwall: return "gronwall";
        case BoundKind::contraction: return "contraction";
    }
    return "unknown";
}

BoundKind parse_bound_kind(std::string_view text) {
    if (text == "gronwall") return BoundKind::gronwall;
    if (text == "contraction") return BoundKind::contraction;
    throw ParameterError("unknown deviation bound kind '" + std::string(text) + "'");
}

DeviationBound gronwall_delta_max(const DisturbanceBound& xi, double lipschitz_cl, const FlowGrid& grid) {
    if (!(lipschitz_cl > 0.0) || !std::isfinite(lipschitz_cl)) {
        throw ParameterError("Gronwall bound requires a positive closed-loop Lipschitz constant");
    }
    DeviationBound out{BoundKind::gronwall, {}};
    out.values.reserve(grid.points());
    for (int k = 0; k < grid.points(); ++k) {
        out.values.push_back(xi.xi() / lipschitz_cl * std::expm1(lipschitz_cl * grid.time(k)));
    }
    return out;
}

DeviationBound contraction_delta_max(const DisturbanceBound& xi, double rate, const FlowGrid& grid) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw ParameterError("contraction bound requires a positive contraction rate");
    }
    DeviationBound out{BoundKind::contraction, {}};
    out.values.reserve(grid.points());
    for (int k = 0; k < grid.points(); ++k) {
        out.values.push_back(-xi.xi() / rate * std::expm1(-rate * grid.time(k)));
    }
    return out;
}

DeviationBound deviation_bound(BoundKind kind, const DisturbanceBound& xi, const BackupPolicy& policy,
                               const FlowGrid& grid) {
    if (kind == BoundKind::gronwall) return gronwall_delta_max(xi, policy.lipschitz_cl, grid);
    if (!policy.contraction_rate) {
        throw ParameterError("contraction bound requested but the backup policy declares no contraction rate");
    }
    return contraction_delta_max(xi, *policy.contraction_rate, grid);
}

TighteningTerms tightening_epsilons(const DeviationBound& delta, const ConstraintFunction& h,
                                    const std::vector<ConstraintFunction>& hb_list) {
    TighteningTerms out;
    out.eps_tau.reserve(delta.values.size());
    for (double d : delta.values) out.eps_tau.push_back(h.lipschitz * d);
    const double terminal = delta.values.empty() ? 0.0 : delta.values.back();
    out.eps_b.reserve(hb_list.size());
    for (const auto& hb : hb_list) out.eps_b.push_back(hb.lipschitz * terminal);
    return out;
}

double discretization_margin(const ConstraintFunction& h, const SystemModel& model, const DisturbanceBound& xi,
                             const FlowGrid& grid) {
    if (!std::isfinite(model.domain_speed_bound) || model.domain_speed_bound < 0.0) {
        throw ParameterError("domain speed bound must be finite and nonnegative");
    }
    return 0.5 * grid.dt() * h.lipschitz * (model.domain_speed_bound + xi.xi());
}

TighteningTerms compute_tightening(const BackupProblem& problem, BoundKind kind, const DisturbanceBound& xi,
                                   const FlowGrid& grid) {
    TighteningTerms terms = tightening_epsilons(deviation_bound(kind, xi, problem.policy, grid), problem.safe,
                                                problem.backup);
    terms.eps_delta = discretization_margin(problem.safe, problem.model, xi, grid);
    return terms;
}

}  // namespace drbcbf
