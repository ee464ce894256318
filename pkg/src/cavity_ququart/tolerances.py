"""Central table of numerical thresholds used by the CLI checks and the tests."""

from __future__ import annotations

from types import MappingProxyType
from typing import Mapping

from .hilbert import ConfigurationError

DEFAULT_TOLERANCES: Mapping[str, float] = MappingProxyType({
    # state algebra
    "norm": 1e-12,
    "hermiticity": 1e-12,
    "excitation_conservation": 1e-10,
    "unitarity": 1e-9,
    "energy_drift_relative": 1e-9,
    "oracle_agreement": 1e-9,
    "sw_cancellation": 1e-10,
    # transfer
    "transfer_infidelity": 1e-9,
    "curve_infidelity": 1e-6,
    "sign_pattern": 1e-9,
    # AMES
    "ames_infidelity": 1e-9,
    "time_scan_floor": 0.993,
    "time_scan_range": 0.05,
    "coupling_scan_floor": 0.989,
    "coupling_scan_range": 0.1,
    "monotonicity_slack": 1e-12,
    # full vs effective model
    "photon_population_max": 5e-4,
    "effective_fidelity_min": 0.999,
    "truncation_stability": 1e-8,
    # teleportation
    "teleport_infidelity": 1e-10,
    "probability_sum": 1e-12,
    # quoted numbers
    "quoted_relative": 0.01,
})


def tolerances(overrides: Mapping[str, float] | None = None) -> dict[str, float]:
    """Defaults with ``overrides`` applied; unknown keys are rejected."""
    table = dict(DEFAULT_TOLERANCES)
    for key, value in (overrides or {}).items():
        if key not in table:
            raise ConfigurationError(f"tolerances.{key}: unknown tolerance")
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value < 0:
            raise ConfigurationError(f"tolerances.{key}: must be a non-negative number, got {value!r}")
        table[key] = float(value)
    return table
