"""Preparation of the (2,2,4) asymmetric maximally entangled state from |gg4>."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..dynamics import Propagator, TimeSeries, trace_evolution
from ..hilbert import ConfigurationError, Ket, Operator, atom_space, fidelity
from ..models import SystemParams, effective_mismatch, effective_vacuum, phase_gate
from ..oracle import ames_condition_margin, ames_time_and_condition, CONDITION_RTOL
from .states import atomic_ket, atomic_state

MODES = ("resonant", "mismatch")
SCAN_AXES = ("time", "coupling")
DOUBLE_LABELS = ("ee1", "ge2", "eg3", "gg4")


class AMESConditionError(ConfigurationError):
    """The mismatch protocol cannot reach the AMES: ``4 lam'**2 < delta**2``."""

    def __init__(self, margin: float, delta: float, lam_prime: float):
        self.margin = margin
        super().__init__(
            f"AMES condition 4 lambda'^2 >= delta^2 violated: 4 lambda'^2 - delta^2 = {margin!r} "
            f"(delta = {delta!r}, lambda' = {lam_prime!r})"
        )


def ames_target() -> Ket:
    """``(|ee1> + |ge2> + |eg3> + |gg4>) / 2``."""
    return atomic_state({k: 1.0 for k in DOUBLE_LABELS})


def ideal_resource() -> Ket:
    """``(|gg1> + |ge2> + |eg3> + |ee4>) / 2``: qubit pair ``(A, B)`` in computational order carries level ``2A + B + 1``."""
    return atomic_state({"gg1": 1.0, "ge2": 1.0, "eg3": 1.0, "ee4": 1.0})


@dataclass(frozen=True, eq=False)
class AMESResult:
    mode: str
    state: Ket
    fidelity: float
    duration: float
    pre_correction: Ket
    correction: tuple[float, float]
    condition_margin: float


@dataclass(frozen=True)
class ScanCurve:
    axis: str
    errors: np.ndarray
    fidelities: np.ndarray


def _hamiltonian(mode: str, params: SystemParams) -> Operator:
    if mode == "resonant":
        return effective_vacuum(params, rotating=True)
    if mode == "mismatch":
        return effective_mismatch(params, rotating=True)
    raise ValueError(f"unknown AMES mode {mode!r}; expected one of {MODES}")


def default_params(mode: str) -> SystemParams:
    return SystemParams.reference_transfer() if mode == "resonant" else SystemParams.reference_mismatch()


def preparation_time(mode: str, params: SystemParams) -> float:
    """``pi/(4|lam|)`` for the resonant model; the earliest AMES time for the mismatch model."""
    if mode == "resonant":
        return math.pi / (4 * abs(params.lam))
    if mode != "mismatch":
        raise ValueError(f"unknown AMES mode {mode!r}; expected one of {MODES}")
    delta, lp = params.delta_mismatch, params.lam_prime
    timing = ames_time_and_condition(delta, lp)
    if not timing.achievable:
        raise AMESConditionError(ames_condition_margin(delta, lp), delta, lp)
    return timing.t_e


def correction_phases(mode: str, params: SystemParams) -> tuple[float, float]:
    """Phase-gate angles ``(phi_A, phi_B)`` that map the ideal evolved state onto the target.

    Resonant: ``-pi/2`` on both qubits (``+pi/2`` if ``lam > 0``).  Mismatch at
    ``4 lam'**2 == delta**2``: ``pi`` on qubit A (on B if ``delta < 0``).
    Elsewhere on the mismatch branch the angles are read off the evolved state.
    """
    if mode == "resonant":
        phi = -math.pi / 2 if params.lam < 0 else math.pi / 2
        return (phi, phi)
    delta, lp = params.delta_mismatch, params.lam_prime
    if abs(ames_condition_margin(delta, lp)) <= CONDITION_RTOL * max(delta**2, 4 * lp**2):
        return (math.pi, 0.0) if delta >= 0 else (0.0, math.pi)
    psi = evolve_from_gg4(mode, params, preparation_time(mode, params))
    amp = {k: psi.amplitudes[atom_space().index(_levels(k))] for k in DOUBLE_LABELS}
    ref = np.angle(amp["gg4"])
    return (float(ref - np.angle(amp["eg3"])), float(ref - np.angle(amp["ge2"])))


def _levels(label: str) -> tuple[int, int, int]:
    return ("ge".index(label[0]), "ge".index(label[1]), int(label[2]) - 1)


def apply_correction(psi: Ket, phases: tuple[float, float]) -> Ket:
    phi_a, phi_b = phases
    return phase_gate("B", phi_b) @ (phase_gate("A", phi_a) @ psi)


def _propagator(mode: str, params: SystemParams) -> Propagator:
    return Propagator(_hamiltonian(mode, params))


def evolve_from_gg4(mode: str, params: SystemParams, t: float) -> Ket:
    """State at ``t`` from ``|gg4>`` in the frame co-rotating with ``omega_at`` per excitation."""
    return _propagator(mode, params)(atomic_ket("gg4"), t)


def prepare_ames(mode: str = "mismatch", params: SystemParams | None = None) -> AMESResult:
    params = params or default_params(mode)
    t = preparation_time(mode, params)
    raw = evolve_from_gg4(mode, params, t)
    phases = correction_phases(mode, params)
    final = apply_correction(raw, phases)
    margin = ames_condition_margin(params.delta_mismatch, params.lam_prime) if mode == "mismatch" else math.nan
    return AMESResult(mode, final, fidelity(final, ames_target()), t, raw, phases, margin)


def ames_trace(mode: str = "mismatch", params: SystemParams | None = None,
               n_samples: int = 201, t_end: float | None = None) -> TimeSeries:
    """Populations of the four coupled states and the (uncorrected) AMES fidelity over time."""
    params = params or default_params(mode)
    h = _hamiltonian(mode, params)
    if t_end is None:
        t_end = 2 * math.pi / params.rabi_mismatch if mode == "mismatch" else math.pi / abs(params.lam)
    tracked = {k: atomic_ket(k) for k in DOUBLE_LABELS}
    return trace_evolution(h, atomic_ket("gg4"), t_end, n_samples, tracked,
                           target=ames_target())


def _scan_point(axis: str, eps: float, params: SystemParams, t_e: float,
                phases: tuple[float, float]) -> float:
    if axis == "time":
        psi = evolve_from_gg4("mismatch", params, t_e * (1 + eps))
    else:
        psi = evolve_from_gg4("mismatch", params.with_coupling_scale(1 + eps), t_e)
    return fidelity(apply_correction(psi, phases), ames_target())


def ames_sensitivity_scan(axis: str, relative_errors, params: SystemParams | None = None,
                          workers: int | None = None) -> ScanCurve:
    """AMES fidelity against a relative error in the interaction time or in ``lam'``.

    The correction is fixed at the one computed for the unperturbed
    parameters; for ``axis='coupling'`` the evolution time stays at the
    unperturbed ``T_e``.
    """
    if axis not in SCAN_AXES:
        raise ValueError(f"unknown scan axis {axis!r}; expected one of {SCAN_AXES}")
    params = params or SystemParams.reference_mismatch()
    errors = np.asarray(relative_errors, dtype=float)
    if errors.ndim != 1 or errors.size == 0:
        raise ValueError("relative_errors must be a non-empty 1-D grid")
    if np.any(errors <= -1):
        raise ValueError("relative errors must exceed -1")
    t_e = preparation_time("mismatch", params)
    phases = correction_phases("mismatch", params)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        fids = list(pool.map(lambda e: _scan_point(axis, float(e), params, t_e, phases), errors))
    return ScanCurve(axis, errors, np.array(fids))


def max_fidelity_over_time(params: SystemParams, n_grid: int = 801,
                           phases: tuple[float, float] = (math.pi, 0.0)) -> float:
    """Best AMES fidelity over one mismatch oscillation period with a fixed correction."""
    prop = _propagator("mismatch", params)
    omega = params.rabi_mismatch
    period = 2 * math.pi / omega if omega else 1.0
    u = np.diag(phase_gate("B", phases[1]).matrix) * np.diag(phase_gate("A", phases[0]).matrix)
    target = ames_target().amplitudes
    psi0 = atomic_ket("gg4")

    def fid(t: float) -> float:
        vec = prop(psi0, t).amplitudes
        return float(abs(np.vdot(target, u * vec)) ** 2)

    times = np.linspace(0.0, period, n_grid)
    states = prop.trajectory(psi0, times)
    values = np.abs((states * u) @ target.conj()) ** 2
    k = int(np.argmax(values))
    lo, hi = times[max(k - 1, 0)], times[min(k + 1, n_grid - 1)]
    res = minimize_scalar(lambda t: -fid(t), bounds=(lo, hi), method="bounded",
                          options={"xatol": period * 1e-12})
    return float(max(values[k], -res.fun))
