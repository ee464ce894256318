"""Closed-form block solutions used as ground truth for the numeric engine.

Nothing here calls an eigensolver for the dynamics: eigenvalues and
eigenvectors are written down analytically and the amplitudes follow from
them.  Where a published closed form disagrees with the matrix it is derived
from, the matrix wins and the divergence goes into :func:`typo_ledger`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, NamedTuple

import numpy as np

from .hilbert import ConfigurationError

DOUBLE_LABELS = ("ee1", "ge2", "eg3", "gg4")

# coupling pattern of the double-excitation block in (ee1, ge2, eg3, gg4)
COUPLING_PATTERN = np.array(
    [[0, 1, 1, 0],
     [1, 0, 0, 1],
     [1, 0, 0, 1],
     [0, 1, 1, 0]], dtype=float)


@dataclass(frozen=True, eq=False)
class BlockSolution:
    """A small invariant block of an effective Hamiltonian and its exact dynamics.

    ``eigenvectors`` holds eigenvectors as columns, in the order of
    ``eigenvalues``.  ``rotating_fn(t)`` gives the amplitudes of the evolved
    ``initial`` vector in the frame that removes ``frame_energy``; it is built
    from frame-relative eigenvalues so optical-scale energies never enter a
    phase.
    """

    basis_labels: tuple[str, ...]
    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rotating_fn: Callable[[float], np.ndarray]
    initial: np.ndarray
    frame_energy: float = 0.0

    def rotating_amplitudes(self, t: float) -> np.ndarray:
        return self.rotating_fn(t)

    def amplitude_fn(self, t: float) -> np.ndarray:
        """Lab-frame amplitudes."""
        return np.exp(-1j * self.frame_energy * t) * self.rotating_fn(t)

    def reconstruction_residual(self) -> float:
        v, e = self.eigenvectors, self.eigenvalues
        return float(np.max(np.abs(self.matrix @ v - v * e)))

    def orthonormality_residual(self) -> float:
        v = self.eigenvectors
        return float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))))


def _initial(labels, which: str) -> np.ndarray:
    if which not in labels:
        raise ConfigurationError(f"initial state {which!r} not in block {labels}")
    vec = np.zeros(len(labels), dtype=complex)
    vec[labels.index(which)] = 1.0
    return vec


def vac_double_block(omega_at: float, lam: float, initial: str = "ee1") -> BlockSolution:
    """Double-excitation block of the vacuum effective Hamiltonian.

    Diagonal ``2 omega_at + 2 lam``, couplings ``lam``.  Spectrum
    ``2 omega_at + {0, 2 lam, 2 lam, 4 lam}``.  With ``lam = 0`` the block is
    diagonal and the solution is stationary.
    """
    matrix = (2 * omega_at + 2 * lam) * np.eye(4) + lam * COUPLING_PATTERN
    eigenvalues = 2 * omega_at + lam * np.array([0.0, 2.0, 2.0, 4.0])
    eigenvectors = 0.5 * np.array(
        [[1, -1, -1, 1],
         [-1, -1, 1, 1],
         [-1, 1, -1, 1],
         [1, 1, 1, 1]], dtype=float).T
    if initial not in ("ee1", "gg4"):
        raise ConfigurationError("closed form available for ee1 or gg4 only")
    init = _initial(DOUBLE_LABELS, initial)
    sign = 1.0 if initial == "ee1" else -1.0

    def rotating_fn(t: float) -> np.ndarray:
        u = np.exp(-2j * lam * t)
        return 0.25 * np.array([
            1 + sign * 2 * u + u**2,
            -1 + u**2,
            -1 + u**2,
            1 - sign * 2 * u + u**2,
        ])

    return BlockSolution(DOUBLE_LABELS, matrix, eigenvalues, eigenvectors, rotating_fn,
                         init, frame_energy=2 * omega_at)


def vac_single_block(omega_at: float, lam: float, variant: str = "vacuum") -> BlockSolution:
    """Single-excitation block ``{eg1, gg2}`` (identically ``{ge1, gg3}``).

    ``variant='vacuum'``: diagonal ``omega_at + lam``;
    ``variant='single_photon'``: diagonal ``omega_at - lam`` (photon-number shift).
    Initial state ``eg1``.
    """
    labels = ("eg1", "gg2")
    if variant == "vacuum":
        sym, anti = 2 * lam, 0.0
    elif variant == "single_photon":
        sym, anti = 0.0, -2 * lam
    else:
        raise ConfigurationError(f"unknown variant {variant!r}")
    diag = omega_at + (sym + anti) / 2
    matrix = np.array([[diag, lam], [lam, diag]], dtype=float)
    eigenvalues = omega_at + np.array([sym, anti])
    eigenvectors = np.array([[1, 1], [1, -1]], dtype=float).T / math.sqrt(2)

    def rotating_fn(t: float) -> np.ndarray:
        e_sym, e_anti = np.exp(-1j * sym * t), np.exp(-1j * anti * t)
        return 0.5 * np.array([e_sym + e_anti, e_sym - e_anti])

    return BlockSolution(labels, matrix, eigenvalues, eigenvectors, rotating_fn,
                         _initial(labels, "eg1"), frame_energy=omega_at)


def mismatch_block(delta: float, lam_prime: float, omega_A: float, omega_B: float,
                   initial: str = "gg4") -> BlockSolution:
    """Double-excitation block of the mismatch effective Hamiltonian.

    ``H = H_0,mis - lam' (D_A^dag D_A + D_B^dag D_B)`` restricted to
    ``(ee1, ge2, eg3, gg4)``: diagonal
    ``(wA + wB, 2 wB, 2 wA, wA + wB) - 2 lam'`` and couplings ``-lam'``.
    Eigenvalues ``wA + wB - 2 lam' + {Omega, 0, 0, -Omega}`` with
    ``Omega = sqrt(delta**2 + 4 lam'**2)``.
    """
    if not math.isclose(omega_B - omega_A, delta, rel_tol=1e-12, abs_tol=1e-12 * max(1.0, abs(omega_A))):
        raise ConfigurationError("omega_B - omega_A must equal delta")
    base = omega_A + omega_B - 2 * lam_prime
    matrix = (base * np.eye(4) + np.diag([0.0, delta, -delta, 0.0])
              - lam_prime * COUPLING_PATTERN)
    omega = math.hypot(delta, 2 * lam_prime)
    relative = -2 * lam_prime + np.array([omega, 0.0, 0.0, -omega])
    eigenvalues = omega_A + omega_B + relative
    if omega == 0:
        eigenvectors = np.eye(4)
    else:
        lp, d = lam_prime, delta
        eigenvectors = np.array([
            np.array([2 * lp, -(omega + d), -(omega - d), 2 * lp]) / (2 * omega),
            np.array([1.0, 0.0, 0.0, -1.0]) / math.sqrt(2),
            np.array([d, 2 * lp, -2 * lp, d]) / (math.sqrt(2) * omega),
            np.array([2 * lp, omega - d, omega + d, 2 * lp]) / (2 * omega),
        ]).T
    init = _initial(DOUBLE_LABELS, initial)
    weights = eigenvectors.T @ init

    def rotating_fn(t: float) -> np.ndarray:
        return eigenvectors @ (np.exp(-1j * relative * t) * weights)

    return BlockSolution(DOUBLE_LABELS, matrix, eigenvalues, eigenvectors, rotating_fn,
                         init, frame_energy=omega_A + omega_B)


class AMESTiming(NamedTuple):
    t_e: float
    achievable: bool


CONDITION_RTOL = 1e-12


def ames_condition_margin(delta: float, lam_prime: float) -> float:
    """``4 lam'**2 - delta**2``; non-negative when the AMES is reachable."""
    return 4 * lam_prime**2 - delta**2


def ames_time_and_condition(delta: float, lam_prime: float) -> AMESTiming:
    """Earliest time at which ``(<ee1| + <gg4|) U(t) |ee1> = 0``.

    That overlap equals ``(delta/Omega)**2 + (1 - (delta/Omega)**2) cos(Omega t)``,
    so the time solves ``cos(Omega t) = -delta**2 / (4 lam'**2)``; it exists iff
    ``4 lam'**2 >= delta**2``.  Equality gives ``pi / Omega``.
    """
    if lam_prime == 0:
        return AMESTiming(math.nan, False)
    if ames_condition_margin(delta, lam_prime) < -CONDITION_RTOL * delta**2:
        return AMESTiming(math.nan, False)
    omega = math.hypot(delta, 2 * lam_prime)
    arg = max(-1.0, -(delta**2) / (4 * lam_prime**2))
    return AMESTiming(math.acos(arg) / omega, True)


def ames_overlap_envelope(delta: float, lam_prime: float, t) -> np.ndarray:
    """``(<ee1| + <gg4|) U(t) |ee1>`` in the frame of the block's mean energy."""
    omega = math.hypot(delta, 2 * lam_prime)
    x2 = (delta / omega) ** 2 if omega else 1.0
    return x2 + (1 - x2) * np.cos(omega * np.asarray(t, dtype=float))


def ames_fidelity_bound(delta: float, lam_prime: float) -> float:
    """Upper bound on the AMES preparation fidelity from ``|gg4>`` over all times.

    With ``c(t)`` the overlap envelope, the fidelity is at most
    ``(1 + sqrt(1 - c**2))**2 / 4``; ``c`` cannot drop below
    ``(delta**2 - 4 lam'**2) / Omega**2``, which is positive when the
    condition fails.
    """
    omega = math.hypot(delta, 2 * lam_prime)
    if omega == 0:
        return 0.25
    c_min = (delta**2 - 4 * lam_prime**2) / omega**2
    if c_min <= 0:
        return 1.0
    return 0.25 * (1 + math.sqrt(1 - c_min**2)) ** 2


# -- published closed forms, as printed ------------------------------------


def printed_vacuum_double_eigenvalues(omega_at: float, lam: float) -> np.ndarray:
    return np.array([2 * omega_at, omega_at + 2 * lam, omega_at + 2 * lam, omega_at + 4 * lam])


def printed_vacuum_double_eigenvectors() -> np.ndarray:
    return vac_double_block(0.0, 1.0).eigenvectors


def printed_mismatch_matrix(delta: float, lam_prime: float, omega_A: float, omega_B: float) -> np.ndarray:
    return ((omega_A + omega_B + 2 * lam_prime) * np.eye(4)
            + np.diag([0.0, delta, -delta, 0.0]) + lam_prime * COUPLING_PATTERN)


def printed_mismatch_eigenvectors(delta: float, lam_prime: float) -> np.ndarray:
    omega = math.hypot(delta, 2 * lam_prime)
    norm1 = math.sqrt(2 * omega**2 + 2 * delta**2 + 8 * lam_prime**2)
    norm3 = math.sqrt(8 * lam_prime**2 + 2 * delta**2)
    lp, d = lam_prime, delta
    return np.array([
        np.array([2 * lp, omega + d, omega - d, 2 * lp]) / norm1,
        np.array([1.0, 0.0, 0.0, -1.0]) / math.sqrt(2),
        np.array([d, -2 * lp, 2 * lp, d]) / norm3,
        np.array([2 * lp, -(omega - d), -(omega + d), 2 * lp]) / norm1,
    ]).T


def printed_mismatch_eigenvalues(delta: float, lam_prime: float, omega_A: float, omega_B: float) -> np.ndarray:
    omega = math.hypot(omega_A - omega_B, 2 * lam_prime)
    s = omega_A + omega_B
    return np.array([s + omega, s, s, s - omega])


def printed_expansion_coefficients(delta: float, lam_prime: float) -> np.ndarray:
    omega = math.hypot(delta, 2 * lam_prime)
    root = math.sqrt(2 * omega**2 + 2 * delta**2 + 8 * lam_prime**2)
    a = lam_prime * root / (2 * omega**2)
    c = delta * math.sqrt(8 * lam_prime**2 + 2 * delta**2) / (2 * lam_prime**2)
    return np.array([a, -1 / math.sqrt(2), c, a])


# -- typo ledger -----------------------------------------------------------


@dataclass(frozen=True)
class TypoEntry:
    id: str
    location: str
    printed_claim: str
    printed_value: list
    recomputed_value: list
    max_deviation: float
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _floats(arr) -> list:
    return [float(x) for x in np.asarray(arr, dtype=float).ravel()]


def _quoted_rounding(key: str, what: str, quoted: float, computed: float) -> TypoEntry:
    return TypoEntry(
        id=f"rounded_quote_{key}",
        location=f"quoted value: {what}",
        printed_claim=f"{what} = {quoted:.2g}",
        printed_value=[quoted],
        recomputed_value=[computed],
        max_deviation=abs(computed - quoted) / quoted,
        note="relative deviation; the quote carries two significant figures",
    )


def typo_ledger(omega_at: float, lam: float, delta: float, lam_prime: float,
                omega_A: float, omega_B: float, numeric_mismatch_block: np.ndarray | None = None,
                quoted: dict | None = None) -> list[TypoEntry]:
    """Compare published closed forms with values recomputed from their matrices.

    ``numeric_mismatch_block`` is the (ee1, ge2, eg3, gg4) block of the
    mismatch effective Hamiltonian as built by the model code; when omitted
    the oracle's own block is used.  ``quoted`` maps a key to
    ``(description, quoted value, computed value)`` for rounded numbers.
    """
    entries = []

    vac = vac_double_block(omega_at, lam)
    vecs = printed_vacuum_double_eigenvectors()
    true_vals = np.einsum("ik,ij,jk->k", vecs, vac.matrix, vecs)
    printed_vals = printed_vacuum_double_eigenvalues(omega_at, lam)
    entries.append(TypoEntry(
        id="vacuum_double_block_eigenvalue_offset",
        location="Appendix A, eigenvalues of the vacuum double-excitation block",
        printed_claim="eigenvalues 2w_at, w_at+2l, w_at+2l, w_at+4l",
        printed_value=_floats(printed_vals),
        recomputed_value=_floats(true_vals),
        max_deviation=float(np.max(np.abs(true_vals - printed_vals))),
        note="the 2l diagonal keeps a 2w_at offset on every eigenvalue: 2w_at + {0, 2l, 2l, 4l}",
    ))

    ee1 = np.array([1.0, 0, 0, 0])
    gg4 = np.array([0, 0, 0, 1.0])
    entries.append(TypoEntry(
        id="vacuum_double_block_expansion_label",
        location="Appendix A, eigenbasis expansion of the initial double-excitation state",
        printed_claim="|ee1> = (E1 + E2 + E3 + E4)/2",
        printed_value=[0.5, 0.5, 0.5, 0.5],
        recomputed_value=_floats(vecs.T @ ee1),
        max_deviation=float(np.max(np.abs(vecs.T @ ee1 - 0.5))),
        note=f"the printed expansion is that of |gg4>: {_floats(vecs.T @ gg4)}; "
             "the printed time-dependent vector likewise starts from |gg4>",
    ))

    lam_unit = 1.0
    t_probe = 0.3 / lam_unit
    printed_vec = 0.25 * np.array([
        1 - 2 * np.exp(-2j * lam_unit * t_probe) + np.exp(-4j * lam_unit * t_probe),
        -1 + np.exp(-4j * lam_unit * t_probe),
        -1 + np.exp(-4j * lam_unit * t_probe),
        1 + 2 * np.exp(-2j * lam_unit * t_probe) + np.exp(-4j * lam_unit * t_probe),
    ])
    exact = vac_double_block(0.0, lam_unit, "ee1").amplitude_fn(t_probe)
    entries.append(TypoEntry(
        id="vacuum_double_block_vector_order",
        location="Appendix A, time-dependent double-excitation state vector",
        printed_claim="(1-2u+u^2, -1+u^2, -1+u^2, 1+2u+u^2)/4 for initial |ee1>, u = exp(-2i l t)",
        printed_value=_floats(np.abs(printed_vec)),
        recomputed_value=_floats(np.abs(exact)),
        max_deviation=float(np.max(np.abs(printed_vec - exact))),
        note="probed at l t = 0.3; the printed vector is the |gg4> evolution (first and last entries swapped)",
    ))

    model_block = mismatch_block(delta, lam_prime, omega_A, omega_B).matrix
    if numeric_mismatch_block is not None:
        model_block = np.asarray(numeric_mismatch_block).real
    printed_block = printed_mismatch_matrix(delta, lam_prime, omega_A, omega_B)
    entries.append(TypoEntry(
        id="mismatch_block_coupling_sign",
        location="Appendix B, matrix of the mismatch effective Hamiltonian",
        printed_claim="diagonal (+2l') and couplings +l'",
        printed_value=_floats(printed_block - (omega_A + omega_B) * np.eye(4)),
        recomputed_value=_floats(model_block - (omega_A + omega_B) * np.eye(4)),
        max_deviation=float(np.max(np.abs(printed_block - model_block))),
        note="the effective Hamiltonian subtracts l'(D_A^dag D_A + D_B^dag D_B); the printed "
             "block has the opposite sign of l'. The two are unitarily equivalent via "
             "diag(1,-1,-1,1), and only the subtracted form yields the stated prepared state",
    ))

    pvecs = printed_mismatch_eigenvectors(delta, lam_prime)
    pvals = printed_mismatch_eigenvalues(delta, lam_prime, omega_A, omega_B)
    rayleigh = np.einsum("ik,ij,jk->k", pvecs, printed_block, pvecs)
    entries.append(TypoEntry(
        id="mismatch_eigenvalue_offset",
        location="Appendix B, eigenvalues of the mismatch block",
        printed_claim="wA+wB+Omega, wA+wB, wA+wB, wA+wB-Omega",
        printed_value=_floats(pvals),
        recomputed_value=_floats(rayleigh),
        max_deviation=float(np.max(np.abs(rayleigh - pvals))),
        note="eigenvectors as printed are exact for the printed matrix; the eigenvalues omit its 2l' diagonal",
    ))

    coeff_printed = printed_expansion_coefficients(delta, lam_prime)
    coeff_ee1 = pvecs.T @ ee1
    coeff_gg4 = pvecs.T @ gg4
    entries.append(TypoEntry(
        id="mismatch_expansion_coefficients",
        location="Appendix B, expansion coefficients a, b, c, d of the initial state",
        printed_claim="a = d = l' sqrt(2 Omega^2 + 2 d^2 + 8 l'^2)/(2 Omega^2), b = -1/sqrt2, "
                      "c = d sqrt(8 l'^2 + 2 d^2)/(2 l'^2)",
        printed_value=_floats(coeff_printed),
        recomputed_value=_floats(coeff_ee1),
        max_deviation=float(np.max(np.abs(coeff_printed - coeff_ee1))),
        note=f"projections onto the printed eigenvectors; for |gg4> they are {_floats(coeff_gg4)}. "
             "a and d are correct (= l'/Omega), b matches |gg4> not |ee1>, c should be d/(sqrt2 Omega)",
    ))

    for key, (what, q, c) in (quoted or {}).items():
        entries.append(_quoted_rounding(key, what, q, c))
    return entries
