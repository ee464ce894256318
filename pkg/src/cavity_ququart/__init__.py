"""Cavity-QED simulation of qubit-ququart state transfer, (2,2,4) entangled-state
preparation and qubit-pair/ququart teleportation."""

from .hilbert import ConfigurationError, HilbertSpace, Ket, Operator, atom_space, cavity_space
from .models import SystemParams
from .protocols import (
    QubitPairState,
    QuquartState,
    ames_sensitivity_scan,
    derive_correction_table,
    ideal_resource,
    prepare_ames,
    reverse_teleport,
    teleport,
    transfer,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "HilbertSpace",
    "Ket",
    "Operator",
    "QubitPairState",
    "QuquartState",
    "SystemParams",
    "ames_sensitivity_scan",
    "atom_space",
    "cavity_space",
    "derive_correction_table",
    "ideal_resource",
    "prepare_ames",
    "reverse_teleport",
    "teleport",
    "transfer",
]
