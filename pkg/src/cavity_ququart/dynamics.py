"""Closed-system time evolution by exact Hermitian eigendecomposition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .hilbert import Ket, Operator, SpaceMismatchError, expectation

HERMITIAN_TOL = 1e-10


class NonHermitianError(ValueError):
    pass


class NonCommutingShiftError(ValueError):
    pass


def hermitian_eig(h: Operator) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvector matrix of ``h``.

    The Hermiticity check is relative to the largest matrix element so that
    physical-unit Hamiltonians (entries ~1e15 rad/s) are accepted.
    """
    scale = max(1.0, h.max_abs())
    if h.hermiticity_residual() > HERMITIAN_TOL * scale:
        raise NonHermitianError(f"operator is not Hermitian (residual {h.hermiticity_residual():.3g})")
    return np.linalg.eigh(h.matrix)


class Propagator:
    """Caches the eigensystem of ``h`` for repeated evolutions.

    ``shift`` is an optional diagonal operator commuting with ``h`` (e.g.
    ``omega_at`` times the excitation number).  The eigensystem is then taken
    of ``h - shift``, which keeps eigenvector precision when ``h`` carries
    optical-frequency diagonals, and ``rotating`` returns states in the frame
    co-rotating with ``shift``.
    """

    def __init__(self, h: Operator, shift: Operator | None = None):
        self.h = h
        self.shift = np.zeros(h.space.total_dim)
        if shift is not None:
            self.shift = _commuting_diagonal(h, shift)
        self.energies, self.vectors = hermitian_eig(h - Operator(h.space, np.diag(self.shift)))

    def _check(self, psi0: Ket):
        if psi0.space.dims != self.h.space.dims:
            raise SpaceMismatchError(f"{psi0.space.dims} vs {self.h.space.dims}")

    def unitary(self, t: float) -> np.ndarray:
        phases = np.exp(-1j * self.energies * t)
        u = (self.vectors * phases) @ self.vectors.conj().T
        return np.exp(-1j * self.shift * t)[:, None] * u

    def rotating(self, psi0: Ket, t: float) -> Ket:
        """``exp(-i (h - shift) t) |psi0>``."""
        self._check(psi0)
        if t == 0:
            return psi0
        coeffs = self.vectors.conj().T @ psi0.amplitudes
        vec = self.vectors @ (np.exp(-1j * self.energies * t) * coeffs)
        return Ket.normalized(psi0.space, vec)

    def __call__(self, psi0: Ket, t: float) -> Ket:
        if t == 0:
            self._check(psi0)
            return psi0
        rot = self.rotating(psi0, t)
        return Ket.normalized(psi0.space, np.exp(-1j * self.shift * t) * rot.amplitudes)

    def trajectory(self, psi0: Ket, times, rotating: bool = False) -> np.ndarray:
        """States at each time as rows of a ``(len(times), dim)`` array."""
        self._check(psi0)
        times = np.asarray(times, dtype=float)
        coeffs = self.vectors.conj().T @ psi0.amplitudes
        phases = np.exp(-1j * np.outer(times, self.energies))
        states = (phases * coeffs) @ self.vectors.T
        if not rotating:
            states = states * np.exp(-1j * np.outer(times, self.shift))
        states /= np.linalg.norm(states, axis=1, keepdims=True)
        return states


def _commuting_diagonal(h: Operator, shift: Operator) -> np.ndarray:
    diag = np.diag(shift.matrix)
    if np.max(np.abs(shift.matrix - np.diag(diag))) > 0:
        raise NonCommutingShiftError("shift operator must be diagonal")
    diag = diag.real
    # [h, F]_ij = h_ij (F_j - F_i)
    comm = np.abs(h.matrix * (diag[None, :] - diag[:, None]))
    scale = max(1.0, h.max_abs()) * max(1.0, float(np.max(np.abs(diag))))
    if np.max(comm) > 1e-12 * scale:
        raise NonCommutingShiftError("shift operator does not commute with the Hamiltonian")
    return diag


def evolve(h: Operator, psi0: Ket, t: float, shift: Operator | None = None) -> Ket:
    """``exp(-i h t) |psi0>`` (hbar = 1)."""
    if psi0.space.dims != h.space.dims:
        raise SpaceMismatchError(f"{psi0.space.dims} vs {h.space.dims}")
    if t == 0:
        return psi0
    return Propagator(h, shift)(psi0, t)


def to_frame(frame: Operator, psi: Ket, t: float) -> Ket:
    """Remove the phases generated by a diagonal ``frame`` operator: ``exp(+i F t)|psi>``."""
    diag = np.diag(frame.matrix).real
    return Ket.normalized(psi.space, np.exp(1j * diag * t) * psi.amplitudes)


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Sampled evolution record.

    ``amplitudes`` and ``populations`` have one column per tracked label;
    ``states`` keeps the full (lab-frame) state at every sample.
    """

    times: np.ndarray
    labels: tuple[str, ...]
    amplitudes: np.ndarray
    populations: np.ndarray
    fidelity_to_target: np.ndarray | None
    states: np.ndarray

    def column(self, label: str) -> np.ndarray:
        return self.populations[:, self.labels.index(label)]

    def amplitude(self, label: str) -> np.ndarray:
        return self.amplitudes[:, self.labels.index(label)]

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)


def trace_evolution(h: Operator, psi0: Ket, t_end: float, n_samples: int,
                    tracked_states: Mapping[str, Ket], target: Ket | None = None,
                    frame: Operator | None = None, t_start: float = 0.0) -> TimeSeries:
    """Sample amplitudes, populations and target fidelity on a uniform grid.

    When ``frame`` is given, amplitudes and fidelity are evaluated in the
    frame co-rotating with it (``exp(+i F t)`` applied); populations are
    frame independent for a diagonal frame.
    """
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    if not tracked_states:
        raise ValueError("no tracked states given")
    if not t_end > t_start:
        raise ValueError("t_end must exceed t_start")
    times = np.linspace(t_start, t_end, n_samples)
    if frame is None:
        states = Propagator(h).trajectory(psi0, times)
        rotated = states
    else:
        diag = np.diag(frame.matrix).real
        try:
            rotated = Propagator(h, frame).trajectory(psi0, times, rotating=True)
        except NonCommutingShiftError:
            rotated = Propagator(h).trajectory(psi0, times) * np.exp(1j * np.outer(times, diag))
        states = rotated * np.exp(-1j * np.outer(times, diag))
    labels = tuple(tracked_states)
    basis = np.array([tracked_states[k].amplitudes for k in labels])
    amps = rotated @ basis.conj().T
    fid = None
    if target is not None:
        fid = np.clip(np.abs(rotated @ target.amplitudes.conj()) ** 2, 0.0, 1.0)
    return TimeSeries(times, labels, amps, np.abs(amps) ** 2, fid, states)


def energy_drift(h: Operator, series: TimeSeries) -> float:
    """Largest deviation of ``<H>`` from its initial value along ``series``."""
    energies = np.einsum("ti,ij,tj->t", series.states.conj(), h.matrix, series.states).real
    return float(np.max(np.abs(energies - energies[0])))


def mean_energy(h: Operator, psi: Ket) -> float:
    return expectation(h, psi).real
