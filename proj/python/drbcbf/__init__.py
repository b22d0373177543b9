"""Disturbance-robust backup CBF safety filter (C++ core)."""

from ._drbcbf import (
    ConfigError,
    ContractViolation,
    ParameterError,
    PropagationError,
    Scenario,
    certify_membership,
    certify_region,
    check_feasible,
    contraction_delta_max,
    deviation_bound,
    disturbance,
    filter_control,
    gronwall_delta_max,
    make_scenario,
    propagate_backup_flow,
    run_cli,
    scenario_names,
    simulate,
    solve_qp,
)

__all__ = [
    "ConfigError",
    "ContractViolation",
    "ParameterError",
    "PropagationError",
    "Scenario",
    "certify_membership",
    "certify_region",
    "check_feasible",
    "contraction_delta_max",
    "deviation_bound",
    "disturbance",
    "filter_control",
    "gronwall_delta_max",
    "make_scenario",
    "propagate_backup_flow",
    "run_cli",
    "scenario_names",
    "simulate",
    "solve_qp",
]
