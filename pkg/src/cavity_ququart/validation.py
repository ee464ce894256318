"""Side-by-side runs of the full cavity model and its effective atomic model."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import Propagator
from .hilbert import Ket, cavity_space
from .models import (
    SystemParams,
    build_full,
    effective_mismatch,
    effective_vacuum,
    photon_number,
)
from .oracle import DOUBLE_LABELS, TypoEntry, typo_ledger
from .protocols.ames import preparation_time
from .protocols.states import atomic_ket
from .protocols.state_transfer import TRACKED_LABELS

QUOTED_TIMES = {
    "transfer_time": ("state transfer time in seconds", 1.6e-9),
    "resonant_ames_time": ("resonant AMES preparation time in seconds", 8e-10),
    "mismatch_ames_time": ("mismatch AMES preparation time in seconds", 1.2e-9),
    "cavity_lifetime": ("cavity photon lifetime in seconds", 3.2e-7),
}


@dataclass(frozen=True, eq=False)
class EffectiveRun:
    """Sampled full and effective evolutions from the same atomic state (vacuum modes).

    Both records are in the frame co-rotating with ``omega_at`` per
    excitation, which the full and the effective Hamiltonians share.
    """

    times: np.ndarray
    labels: tuple[str, ...]
    full_amplitudes: np.ndarray
    effective_amplitudes: np.ndarray
    full_populations: np.ndarray
    effective_populations: np.ndarray
    photon_population: np.ndarray
    fidelity: np.ndarray

    @property
    def max_photon_population(self) -> float:
        return float(np.max(self.photon_population))

    @property
    def final_fidelity(self) -> float:
        return float(self.fidelity[-1])

    @property
    def max_population_deviation(self) -> float:
        return float(np.max(np.abs(self.full_populations - self.effective_populations)))


def run_full_vs_effective(params: SystemParams, psi_atoms: Ket, t_end: float,
                          n_samples: int = 201) -> EffectiveRun:
    """Evolve ``psi_atoms (x) |0, 0>`` under the full Hamiltonian and ``psi_atoms`` under the effective one."""
    params.require_far_detuned()
    space = cavity_space(params.n_max)
    n_modes = (params.n_max + 1) ** 2
    vacuum = np.zeros(n_modes)
    vacuum[0] = 1.0
    psi_full = Ket(space, np.kron(psi_atoms.amplitudes, vacuum))
    times = np.linspace(0.0, t_end, n_samples)

    full_states = Propagator(build_full(params, space, rotating=True)).trajectory(psi_full, times)
    eff_states = Propagator(effective_vacuum(params, rotating=True)).trajectory(psi_atoms, times)

    per_atom = full_states.reshape(n_samples, -1, n_modes)
    labels = TRACKED_LABELS
    idx = [int(np.argmax(atomic_ket(k).amplitudes)) for k in labels]
    full_pops = np.sum(np.abs(per_atom[:, idx, :]) ** 2, axis=2)
    n_ph = np.diag(photon_number(space).matrix).real
    return EffectiveRun(
        times=times,
        labels=labels,
        full_amplitudes=per_atom[:, idx, 0],
        effective_amplitudes=eff_states[:, idx],
        full_populations=full_pops,
        effective_populations=np.abs(eff_states[:, idx]) ** 2,
        photon_population=np.abs(full_states) ** 2 @ n_ph,
        fidelity=np.clip(np.abs(np.sum(per_atom[:, :, 0].conj() * eff_states, axis=1)) ** 2, 0.0, 1.0),
    )


def numeric_mismatch_block(params: SystemParams) -> np.ndarray:
    h = effective_mismatch(params).matrix
    idx = [int(np.argmax(atomic_ket(k).amplitudes)) for k in DOUBLE_LABELS]
    return h[np.ix_(idx, idx)]


def cavity_lifetime(quality_factor: float, omega_op: float, excitation: float = 1e-4) -> float:
    """``Q / (excitation * omega_op)``: lifetime budget while the mode is only virtually populated."""
    return quality_factor / (excitation * omega_op)


def quoted_comparison(transfer: SystemParams, mismatch: SystemParams,
                      quality_factor: float = 3.9e4, excitation: float = 1e-4) -> dict[str, tuple[str, float, float]]:
    """``key -> (description, quoted, computed)`` for every quoted timing."""
    computed = {
        "transfer_time": math.pi / (2 * abs(transfer.lam)),
        "resonant_ames_time": preparation_time("resonant", transfer),
        "mismatch_ames_time": preparation_time("mismatch", mismatch),
        "cavity_lifetime": cavity_lifetime(quality_factor, transfer.omega_op, excitation),
    }
    return {k: (what, q, computed[k]) for k, (what, q) in QUOTED_TIMES.items()}


def build_typo_ledger(transfer: SystemParams, mismatch: SystemParams,
                      quoted: dict | None = None) -> list[TypoEntry]:
    return typo_ledger(transfer.omega_at, transfer.lam, mismatch.delta_mismatch, mismatch.lam_prime,
                       mismatch.omega_A, mismatch.omega_B, numeric_mismatch_block(mismatch), quoted)
