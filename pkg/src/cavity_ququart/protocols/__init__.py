"""State transfer, AMES preparation and teleportation protocols."""

from .ames import (
    AMESConditionError,
    AMESResult,
    ScanCurve,
    ames_sensitivity_scan,
    ames_target,
    ames_trace,
    correction_phases,
    ideal_resource,
    max_fidelity_over_time,
    prepare_ames,
    preparation_time,
)
from .states import QubitPairState, QuquartState, atomic_ket, atomic_state
from .teleportation import (
    BellOutcome,
    GeneralizedBellOutcome,
    NotMaximallyEntangledError,
    Transcript,
    bell_basis,
    bell_measure,
    channel_fidelities,
    derive_correction_table,
    forward_maps,
    generalized_bell_basis,
    reverse_teleport,
    reverse_teleport_branches,
    teleport,
    teleport_branches,
)
from .state_transfer import (
    TransferReport,
    round_trip_fidelity,
    transfer,
    transfer_matrix,
    transfer_time,
    transfer_trace,
)

__all__ = [
    "AMESConditionError",
    "AMESResult",
    "BellOutcome",
    "GeneralizedBellOutcome",
    "NotMaximallyEntangledError",
    "QubitPairState",
    "QuquartState",
    "ScanCurve",
    "Transcript",
    "TransferReport",
    "ames_sensitivity_scan",
    "ames_target",
    "ames_trace",
    "atomic_ket",
    "atomic_state",
    "bell_basis",
    "bell_measure",
    "channel_fidelities",
    "correction_phases",
    "derive_correction_table",
    "forward_maps",
    "generalized_bell_basis",
    "ideal_resource",
    "max_fidelity_over_time",
    "preparation_time",
    "prepare_ames",
    "reverse_teleport",
    "reverse_teleport_branches",
    "round_trip_fidelity",
    "teleport",
    "teleport_branches",
    "transfer",
    "transfer_matrix",
    "transfer_time",
    "transfer_trace",
]
