"""Two-qubit <-> ququart teleportation through a (2,2,4) resource.

Forward: the particle order is ``[d1, d2, A, B, C]``; Bell measurements act
on ``(d1, A)`` and ``(d2, B)`` and the ququart ``C`` receives the input
coefficients ``c_k`` on level ``|k>`` (``k = 2 d1 + d2``).  Reverse: the order
is ``[X, A, B, C]``; a 16-outcome generalized Bell measurement acts on
``(X, C)`` and the qubits receive ``c_k`` on computational state ``k``.

Corrections are never tabulated by hand.  For each outcome the conditional
map ``M_o`` (input coefficients -> unnormalized output) is computed from the
resource, and the correction is ``U_o = (M_o / sqrt(p_o))^dagger`` with
``p_o = Tr(M_o^dagger M_o) / 4``.  That is exact precisely when every ``M_o``
is proportional to a unitary, i.e. when the resource is maximally entangled.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..hilbert import HilbertSpace, Ket
from .states import QubitPairState, QuquartState, haar_vector

BELL_LABELS = ("Phi+", "Phi-", "Psi+", "Psi-")
FORWARD_SPACE = HilbertSpace((2, 2, 2, 2, 4), ("d1", "d2", "A", "B", "C"))
REVERSE_SPACE = HilbertSpace((4, 2, 2, 4), ("X", "A", "B", "C"))
FORWARD_PAIRS = ((0, 2), (1, 3))
REVERSE_BASES = ("fourier", "z2xz2")
ENTANGLEMENT_TOL = 1e-8

_S = 1 / np.sqrt(2)
_BELL = {
    "Phi+": np.array([[_S, 0], [0, _S]], dtype=complex),
    "Phi-": np.array([[_S, 0], [0, -_S]], dtype=complex),
    "Psi+": np.array([[0, _S], [_S, 0]], dtype=complex),
    "Psi-": np.array([[0, _S], [-_S, 0]], dtype=complex),
}


class NotMaximallyEntangledError(ValueError):
    """No exact correction table exists; carries the best worst-case fidelity found."""

    def __init__(self, worst_case_fidelity: float, residual: float):
        self.worst_case_fidelity = worst_case_fidelity
        self.residual = residual
        super().__init__(
            f"resource is not maximally entangled (unitarity residual {residual:.3g}); "
            f"best worst-case fidelity with polar corrections ~ {worst_case_fidelity:.6f}"
        )


@dataclass(frozen=True)
class BellOutcome:
    alice: str
    bob: str | None
    probability: float


@dataclass(frozen=True)
class GeneralizedBellOutcome:
    j: int
    k: int
    probability: float


@dataclass(frozen=True, eq=False)
class Transcript:
    outcome: BellOutcome | GeneralizedBellOutcome
    correction: np.ndarray


@dataclass(frozen=True)
class BranchResult:
    outcome: tuple
    probability: float
    fidelity: float


def bell_basis() -> dict[str, Ket]:
    """Two-qubit Bell states; ``|ge>`` means first qubit g, second e."""
    space = HilbertSpace((2, 2), ("q1", "q2"))
    return {k: Ket(space, v.ravel()) for k, v in _BELL.items()}


def generalized_bell_basis(kind: str = "fourier") -> dict[tuple[int, int], np.ndarray]:
    """Sixteen maximally entangled ququart-pair states as 4x4 amplitude arrays.

    ``fourier``: ``sum_m w**(j m) |m>|m + k mod 4> / 2`` with ``w = i``.
    ``z2xz2``: ``sum_m (-1)**popcount(j & m) |m>|m xor k> / 2``.
    """
    if kind not in REVERSE_BASES:
        raise ValueError(f"unknown generalized Bell basis {kind!r}; expected one of {REVERSE_BASES}")
    basis = {}
    for j, k in itertools.product(range(4), repeat=2):
        arr = np.zeros((4, 4), dtype=complex)
        for m in range(4):
            if kind == "fourier":
                arr[m, (m + k) % 4] = 1j ** (j * m)
            else:
                arr[m, m ^ k] = (-1) ** bin(j & m).count("1")
        basis[(j, k)] = arr / 2
    return basis


# -- measurement on an arbitrary joint state --------------------------------


def _contract(tensor: np.ndarray, present: list[int], pair: tuple[int, int], vec: np.ndarray):
    pi, pj = present.index(pair[0]), present.index(pair[1])
    out = np.tensordot(vec.conj(), tensor, axes=([0, 1], [pi, pj]))
    return out, [p for p in present if p not in pair]


def outcome_probabilities(joint: Ket, pairs) -> dict[tuple[str, ...], float]:
    """Born probabilities of every joint Bell outcome on the given qubit pairs."""
    return {labels: p for labels, p, _ in _branches(joint, pairs)}


def _branches(joint: Ket, pairs):
    pairs = [tuple(p) for p in pairs]
    dims = joint.space.dims
    for a, b in pairs:
        if dims[a] != 2 or dims[b] != 2:
            raise ValueError(f"Bell measurement needs two qubits, got factors {a}, {b} with dims {dims[a]}, {dims[b]}")
    tensor = joint.amplitudes.reshape(dims)
    for labels in itertools.product(BELL_LABELS, repeat=len(pairs)):
        t, present = tensor, list(range(len(dims)))
        for pair, lab in zip(pairs, labels):
            t, present = _contract(t, present, pair, _BELL[lab])
        yield labels, float(np.vdot(t, t).real), (t, present)


def bell_measure(joint: Ket, pairs, rng_seed: int | None = None) -> tuple[BellOutcome, Ket]:
    """Sample a Bell measurement and return ``(outcome, collapsed)``.

    ``pairs`` is one pair of factor indices or two pairs (Alice's, then
    Bob's); for a single pair ``outcome.bob`` is ``None``.  Zero-probability
    branches are never drawn.
    """
    pairs = [tuple(pairs)] if np.ndim(pairs) == 1 else [tuple(p) for p in pairs]
    if len(pairs) not in (1, 2):
        raise ValueError("measure one or two qubit pairs")
    branches = list(_branches(joint, pairs))
    probs = np.array([p for _, p, _ in branches])
    total = probs.sum()
    if abs(total - 1) > 1e-10:
        raise ValueError(f"branch probabilities sum to {total!r}")
    rng = np.random.default_rng(rng_seed)
    labels, p, (full, axes) = branches[int(rng.choice(len(branches), p=probs / total))]
    for pair, lab in zip(pairs, labels):
        full = np.multiply.outer(full, _BELL[lab])
        axes = axes + list(pair)
    collapsed = Ket.normalized(joint.space, np.transpose(full, np.argsort(axes)).ravel())
    bob = labels[1] if len(labels) == 2 else None
    return BellOutcome(labels[0], bob, p), collapsed


# -- conditional maps and corrections ---------------------------------------


def _resource_tensor(resource: Ket) -> np.ndarray:
    if resource.space.dims != (2, 2, 4):
        raise ValueError(f"resource must live on a (2, 2, 4) space, got {resource.space.dims}")
    return resource.amplitudes.reshape(2, 2, 4)


def forward_maps(resource: Ket) -> dict[tuple[str, str], np.ndarray]:
    """``M_o[l, 2 x + y]``: ququart amplitude on level ``l`` for input ``|x y>`` and outcome ``o``."""
    r = _resource_tensor(resource)
    maps = {}
    for la, lb in itertools.product(BELL_LABELS, repeat=2):
        # <alpha|_{d1 A} <beta|_{d2 B} |x y>_{d1 d2} |r>_{A B C}
        m = np.einsum("xa,yb,abl->lxy", _BELL[la].conj(), _BELL[lb].conj(), r)
        maps[(la, lb)] = m.reshape(4, 4)
    return maps


def reverse_maps(resource: Ket, basis: str = "fourier") -> dict[tuple[int, int], np.ndarray]:
    """``M_o[2 A + B, x]``: qubit-pair amplitude for ququart input ``|x>`` and outcome ``o``."""
    r = _resource_tensor(resource)
    return {o: np.einsum("xc,abc->abx", phi.conj(), r).reshape(4, 4)
            for o, phi in generalized_bell_basis(basis).items()}


def _polar_unitary(m: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(m)
    return u @ vh


def _unitarity_residual(m: np.ndarray) -> float:
    gram = m.conj().T @ m
    scale = np.trace(gram).real / 4
    if scale <= 0:
        return float("inf")
    return float(np.max(np.abs(gram / scale - np.eye(4))))


def _sampled_worst_case(maps: dict, corrections: dict, n: int = 256, seed: int = 0) -> float:
    rng = np.random.default_rng(seed)
    inputs = list(np.eye(4, dtype=complex)) + [haar_vector(4, rng) for _ in range(n)]
    worst = 1.0
    for c in inputs:
        f = sum(abs(np.vdot(c, corrections[o] @ m @ c)) ** 2 for o, m in maps.items())
        worst = min(worst, f)
    return float(worst)


def corrections_from_maps(maps: dict) -> dict:
    """Exact corrections ``U_o`` with ``U_o M_o = sqrt(p_o) I`` for every outcome."""
    residual = max(_unitarity_residual(m) for m in maps.values())
    if residual > ENTANGLEMENT_TOL:
        polar = {o: _polar_unitary(m).conj().T for o, m in maps.items()}
        raise NotMaximallyEntangledError(_sampled_worst_case(maps, polar), residual)
    return {o: (m / np.sqrt(np.trace(m.conj().T @ m).real / 4)).conj().T for o, m in maps.items()}


def derive_correction_table(resource: Ket) -> dict[tuple[str, str], np.ndarray]:
    """Ququart unitary to apply after each of the 16 forward Bell outcomes."""
    return corrections_from_maps(forward_maps(resource))


def channel_fidelities(maps: dict, corrections: dict) -> tuple[float, float]:
    """Entanglement and average fidelity of the corrected channel ``rho -> sum_o K_o rho K_o^dag``."""
    d = 4
    kraus = [corrections[o] @ m for o, m in maps.items()]
    f_e = sum(abs(np.trace(k)) ** 2 for k in kraus) / d**2
    return float(f_e), float((d * f_e + 1) / (d + 1))


def is_local_two_qubit(u: np.ndarray, tol: float = 1e-10) -> bool:
    """Whether a 4x4 unitary factors as ``U_A (x) U_B``."""
    realigned = u.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    s = np.linalg.svd(realigned, compute_uv=False)
    return bool(s[1] <= tol * s[0])


# -- protocols -------------------------------------------------------------


def _state_fidelity(target: np.ndarray, out: np.ndarray) -> float:
    out = out / np.linalg.norm(out)
    return float(min(1.0, abs(np.vdot(target, out)) ** 2))


def teleport_branches(state: QubitPairState, resource: Ket, table: dict | None = None) -> list[BranchResult]:
    """Every forward outcome with its probability and corrected-output fidelity."""
    maps = forward_maps(resource)
    table = table if table is not None else corrections_from_maps(maps)
    c = state.computational()
    results = []
    for o, m in maps.items():
        out = m @ c
        p = float(np.vdot(out, out).real)
        fid = _state_fidelity(c, table[o] @ out) if p > 0 else float("nan")
        results.append(BranchResult(o, p, fid))
    return results


def teleport(state: QubitPairState, resource: Ket, rng_seed: int | None = None,
             table: dict | None = None) -> tuple[QuquartState, Transcript]:
    """Teleport a qubit pair onto the ququart; the outcome is sampled from Born probabilities."""
    joint = state.ket().tensor(resource)
    joint = Ket(FORWARD_SPACE, joint.amplitudes)
    outcome, collapsed = bell_measure(joint, FORWARD_PAIRS, rng_seed)
    key = (outcome.alice, outcome.bob)
    table = table if table is not None else derive_correction_table(resource)
    bell = np.kron(_BELL[key[0]].ravel(), _BELL[key[1]].ravel())
    tensor = collapsed.amplitudes.reshape(2, 2, 2, 2, 4).transpose(0, 2, 1, 3, 4).reshape(16, 4)
    ququart = bell.conj() @ tensor
    out = table[key] @ ququart
    return QuquartState(tuple(out / np.linalg.norm(out))), Transcript(outcome, table[key])


def reverse_outcome_probabilities(state: QuquartState, resource: Ket,
                                  basis: str = "fourier") -> dict[tuple[int, int], float]:
    c = state.vector()
    return {o: float(np.linalg.norm(m @ c) ** 2) for o, m in reverse_maps(resource, basis).items()}


def reverse_teleport_branches(state: QuquartState, resource: Ket, basis: str = "fourier") -> list[BranchResult]:
    maps = reverse_maps(resource, basis)
    table = corrections_from_maps(maps)
    c = state.vector()
    results = []
    for o, m in maps.items():
        out = m @ c
        p = float(np.vdot(out, out).real)
        results.append(BranchResult(o, p, _state_fidelity(c, table[o] @ out) if p > 0 else float("nan")))
    return results


def reverse_teleport(state: QuquartState, resource: Ket, rng_seed: int | None = None,
                     basis: str = "fourier") -> tuple[QubitPairState, Transcript]:
    """Teleport a ququart state onto the qubit pair ``(A, B)``.

    Level ``|k>`` lands on the computational state ``k = 2 A + B``, so level
    ``|1>`` becomes ``|gg>``.
    """
    maps = reverse_maps(resource, basis)
    table = corrections_from_maps(maps)
    c = state.vector()
    keys = list(maps)
    outs = [maps[o] @ c for o in keys]
    probs = np.array([np.vdot(v, v).real for v in outs])
    rng = np.random.default_rng(rng_seed)
    idx = int(rng.choice(len(keys), p=probs / probs.sum()))
    o = keys[idx]
    out = table[o] @ outs[idx]
    result = QubitPairState.from_computational(out / np.linalg.norm(out))
    return result, Transcript(GeneralizedBellOutcome(o[0], o[1], float(probs[idx])), table[o])
