#pragma once

#include "drbcbf/flow.hpp"
#include "drbcbf/model.hpp"

#include <string_view>
#include <vector>

namespace drbcbf {

enum class BoundKind { gronwall, contraction };

std::string_view to_string(BoundKind kind);
BoundKind parse_bound_kind(std::string_view text);

/// Worst-case distance between nominal and disturbed backup flows at each grid time.
struct DeviationBound {
    BoundKind kind = BoundKind::gronwall;
    std::vector<double> values;
};

struct TighteningTerms {
    /// Per grid point, Lh * delta_max(tau_k).
    std::vector<double> eps_tau;
    /// Per backup constraint function, Lhb_j * delta_max(T).
    std::vector<double> eps_b;
    double eps_delta = 0.0;
};

/// (xi / L) (exp(L tau) - 1). Throws ParameterError for L <= 0.
DeviationBound gronwall_delta_max(const DisturbanceBound& xi, double lipschitz_cl, const FlowGrid& grid);

/// (xi / c) (1 - exp(-c tau)) for a closed loop contracting at rate c. Throws ParameterError for c <= 0.
DeviationBound contraction_delta_max(const DisturbanceBound& xi, double rate, const FlowGrid& grid);

/// Dispatches on `kind`, reading the constant from the policy. A contraction bound
/// on a policy without a contraction rate throws ParameterError.
DeviationBound deviation_bound(BoundKind kind, const DisturbanceBound& xi, const BackupPolicy& policy,
                               const FlowGrid& grid);

/// Fills eps_tau and eps_b with the smallest admissible values; eps_delta is left at 0.
TighteningTerms tightening_epsilons(const DeviationBound& delta, const ConstraintFunction& h,
                                    const std::vector<ConstraintFunction>& hb_list);

/// (dt / 2) Lh (speed bound + xi).
double discretization_margin(const ConstraintFunction& h, const SystemModel& model, const DisturbanceBound& xi,
                             const FlowGrid& grid);

/// All tightening terms for a problem, ready to be shared across filter calls.
TighteningTerms compute_tightening(const BackupProblem& problem, BoundKind kind, const DisturbanceBound& xi,
                                   const FlowGrid& grid);

}  // namespace drbcbf
