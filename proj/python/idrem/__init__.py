"""Time-varying parameter identification with interval DREM."""

from ._idrem import (
    ConfigError,
    ContractError,
    DomainError,
    NumericError,
    Scenario,
    adjugate,
    bounds,
    determinant,
    excitation,
    interval_index,
    lift,
    load_config,
    min_max_eigenvalues,
    parse_config,
    preset,
    run,
    sweep,
)

__all__ = [
    "ConfigError",
    "ContractError",
    "DomainError",
    "NumericError",
    "Scenario",
    "adjugate",
    "bounds",
    "determinant",
    "excitation",
    "interval_index",
    "lift",
    "load_config",
    "min_max_eigenvalues",
    "parse_config",
    "preset",
    "run",
    "sweep",
]
