"""Rotor-router dynamics: simulation, circulations, and offset distances."""

from ._core import (
    BipartiteRefusal,
    BudgetExceeded,
    CheckResult,
    Circulation,
    DeltaTable,
    Graph,
    LoadTrace,
    Pipeline,
    RotorlabError,
    cumulated_discrepancy,
    empirical_delta,
    extract_circulation,
    idleness,
    known_checks,
    load_period,
    metrics_report,
    run_check,
    run_pipeline,
    simulate,
    time_average_deviation,
)

__all__ = [
    "BipartiteRefusal",
    "BudgetExceeded",
    "CheckResult",
    "Circulation",
    "DeltaTable",
    "Graph",
    "LoadTrace",
    "Pipeline",
    "RotorlabError",
    "cumulated_discrepancy",
    "empirical_delta",
    "extract_circulation",
    "idleness",
    "known_checks",
    "load_period",
    "metrics_report",
    "run_check",
    "run_pipeline",
    "simulate",
    "time_average_deviation",
]
