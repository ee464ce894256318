"""Tensor-product Hilbert spaces and dense operator/state algebra.

Conventions used everywhere in the package:

* qubit levels: ``|g> = 0``, ``|e> = 1``
* ququart levels: ``|1>..|4> = 0..3``
* Fock levels: ``0..n_max``
* composite index is row-major over ``[qubit A, qubit B, ququart, mode a, mode b]``
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

NORM_TOL = 1e-12

SUBSYSTEM_LABELS = ("A", "B", "C", "a", "b")


class ConfigurationError(ValueError):
    """Invalid space, parameter or scenario configuration."""


class SpaceMismatchError(ValueError):
    """Operands live on different Hilbert spaces."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class HilbertSpace:
    """Ordered tensor product of finite-dimensional factors.

    Parameters
    ----------
    dims : tuple of int
        Subsystem dimensions, in tensor order.
    labels : tuple of str, optional
        One label per factor; defaults to ``("0", "1", ...)``.
    """

    dims: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ConfigurationError("a Hilbert space needs at least one factor")
        if any(d < 1 for d in dims):
            raise ConfigurationError(f"subsystem dimensions must be >= 1, got {dims}")
        labels = tuple(self.labels) or tuple(str(i) for i in range(len(dims)))
        if len(labels) != len(dims):
            raise ConfigurationError(f"{len(labels)} labels for {len(dims)} factors")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "labels", labels)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def factor(self, key: int | str) -> int:
        """Index of a factor given either its position or its label."""
        if isinstance(key, str):
            try:
                return self.labels.index(key)
            except ValueError:
                raise ConfigurationError(f"no factor labelled {key!r} in {self.labels}") from None
        if not 0 <= key < self.n_factors:
            raise ConfigurationError(f"factor index {key} out of range for {self.n_factors} factors")
        return key

    def has(self, label: str) -> bool:
        return label in self.labels

    def index(self, levels: Sequence[int]) -> int:
        """Composite (row-major) index of a product basis state."""
        if len(levels) != self.n_factors:
            raise ConfigurationError(f"expected {self.n_factors} levels, got {len(levels)}")
        for lvl, d in zip(levels, self.dims):
            if not 0 <= lvl < d:
                raise ConfigurationError(f"level {lvl} out of range for dimension {d}")
        return int(np.ravel_multi_index(tuple(levels), self.dims))

    def levels(self, index: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(index, self.dims))

    def identity(self) -> "Operator":
        return Operator(self, np.eye(self.total_dim))

    def zero(self) -> "Operator":
        return Operator(self, np.zeros((self.total_dim, self.total_dim)))

    def basis(self, levels: Sequence[int]) -> "Ket":
        vec = np.zeros(self.total_dim, dtype=complex)
        vec[self.index(levels)] = 1.0
        return Ket(self, vec)


def build_space(qudit_dims: Sequence[int], mode_truncations: Sequence[int] = ()) -> HilbertSpace:
    """Composite space of the atoms followed by truncated bosonic modes.

    ``mode_truncations`` holds ``n_max`` per mode; each mode contributes
    ``n_max + 1`` Fock levels.
    """
    qudit_dims = list(qudit_dims)
    mode_truncations = list(mode_truncations)
    if not qudit_dims:
        raise ConfigurationError("at least one atomic factor is required")
    if any(d < 2 for d in qudit_dims):
        raise ConfigurationError(f"atomic dimensions must be >= 2, got {qudit_dims}")
    if any(n < 0 for n in mode_truncations):
        raise ConfigurationError(f"mode truncations must be >= 0, got {mode_truncations}")
    dims = tuple(qudit_dims) + tuple(n + 1 for n in mode_truncations)
    if qudit_dims == [2, 2, 4] and len(mode_truncations) <= 2:
        return HilbertSpace(dims, SUBSYSTEM_LABELS[: len(dims)])
    return HilbertSpace(dims)


def atom_space() -> HilbertSpace:
    """The 16-dimensional space of qubit A, qubit B and the ququart."""
    return build_space([2, 2, 4])


def cavity_space(n_max: int = 2) -> HilbertSpace:
    """Atoms plus both cavity modes truncated at ``n_max`` photons."""
    return build_space([2, 2, 4], [n_max, n_max])


@dataclass(frozen=True, eq=False)
class Ket:
    """Normalized pure state on a :class:`HilbertSpace`."""

    space: HilbertSpace
    amplitudes: np.ndarray

    def __post_init__(self):
        vec = _frozen(np.asarray(self.amplitudes).ravel())
        if vec.shape != (self.space.total_dim,):
            raise SpaceMismatchError(
                f"amplitude vector of length {vec.size} on a space of dimension {self.space.total_dim}"
            )
        norm = np.linalg.norm(vec)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"Ket is not normalized (norm = {norm!r}); use Ket.normalized")
        object.__setattr__(self, "amplitudes", vec)

    @classmethod
    def normalized(cls, space: HilbertSpace, vec) -> "Ket":
        vec = np.asarray(vec, dtype=complex).ravel()
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(space, vec / norm)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, levels: Sequence[int]) -> complex:
        return complex(self.amplitudes[self.space.index(levels)])

    def tensor(self, other: "Ket") -> "Ket":
        space = HilbertSpace(self.space.dims + other.space.dims, self.space.labels + other.space.labels)
        return Ket(space, np.kron(self.amplitudes, other.amplitudes))

    def __repr__(self):
        return f"Ket(dims={self.space.dims}, norm={self.norm:.3g})"


@dataclass(frozen=True, eq=False)
class Operator:
    """Dense square matrix acting on a :class:`HilbertSpace`."""

    space: HilbertSpace
    matrix: np.ndarray

    def __post_init__(self):
        mat = _frozen(self.matrix)
        n = self.space.total_dim
        if mat.shape != (n, n):
            raise SpaceMismatchError(f"matrix of shape {mat.shape} on a space of dimension {n}")
        object.__setattr__(self, "matrix", mat)

    def _check(self, other):
        if other.space.dims != self.space.dims:
            raise SpaceMismatchError(f"{self.space.dims} vs {other.space.dims}")

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix / scalar)

    def __matmul__(self, other):
        self._check(other)
        if isinstance(other, Ket):
            vec = self.matrix @ other.amplitudes
            return Ket.normalized(self.space, vec)
        return Operator(self.space, self.matrix @ other.matrix)

    def apply(self, psi: Ket) -> np.ndarray:
        """Unnormalized image ``A|psi>`` as a raw vector."""
        self._check(psi)
        return self.matrix @ psi.amplitudes

    @property
    def dag(self) -> "Operator":
        return dagger(self)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.matrix))) if self.matrix.size else 0.0

    def element(self, bra: Sequence[int], ket: Sequence[int]) -> complex:
        return complex(self.matrix[self.space.index(bra), self.space.index(ket)])

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def antihermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix + self.matrix.conj().T)))

    def __repr__(self):
        return f"Operator(dims={self.space.dims}, max|M|={self.max_abs():.3g})"


def local_space(dim: int) -> HilbertSpace:
    return HilbertSpace((dim,))


def local_operator(matrix) -> Operator:
    matrix = np.asarray(matrix, dtype=complex)
    return Operator(local_space(matrix.shape[0]), matrix)


def embed(local_op, index: int | str, space: HilbertSpace) -> Operator:
    """Kronecker-embed a single-factor operator with identities elsewhere."""
    mat = local_op.matrix if isinstance(local_op, Operator) else np.asarray(local_op, dtype=complex)
    idx = space.factor(index)
    if mat.shape != (space.dims[idx], space.dims[idx]):
        raise SpaceMismatchError(
            f"local operator of shape {mat.shape} on factor {idx} of dimension {space.dims[idx]}"
        )
    factors = [np.eye(d) for d in space.dims]
    factors[idx] = mat
    return Operator(space, reduce(np.kron, factors))


def annihilation(n_max: int) -> Operator:
    """Truncated bosonic lowering operator on ``n_max + 1`` Fock levels."""
    if n_max < 1:
        raise ConfigurationError(f"n_max must be >= 1, got {n_max}")
    return local_operator(np.diag(np.sqrt(np.arange(1, n_max + 1)), k=1))


def qubit_lowering() -> Operator:
    """``|g><e|`` with ``|g> = 0``."""
    return local_operator([[0, 1], [0, 0]])


def transition(dim: int, i: int, j: int) -> Operator:
    """``|i><j|`` on a single ``dim``-level factor (0-based levels)."""
    mat = np.zeros((dim, dim), dtype=complex)
    mat[i, j] = 1.0
    return local_operator(mat)


def dagger(op: Operator) -> Operator:
    return Operator(op.space, op.matrix.conj().T)


def commutator(a: Operator, b: Operator) -> Operator:
    a._check(b)
    return Operator(a.space, a.matrix @ b.matrix - b.matrix @ a.matrix)


def expectation(op: Operator, psi: Ket) -> complex:
    op._check(psi)
    return complex(np.vdot(psi.amplitudes, op.matrix @ psi.amplitudes))


def overlap(psi: Ket, phi: Ket) -> complex:
    """``<psi|phi>``."""
    if psi.space.dims != phi.space.dims:
        raise SpaceMismatchError(f"{psi.space.dims} vs {phi.space.dims}")
    return complex(np.vdot(psi.amplitudes, phi.amplitudes))


def fidelity(psi: Ket, phi: Ket) -> float:
    """``|<psi|phi>|^2``, clipped to [0, 1] against rounding."""
    value = abs(overlap(psi, phi)) ** 2
    return float(min(1.0, max(0.0, value)))


def subsystem_population(psi: Ket, index: int | str, level: int) -> float:
    """Probability that factor ``index`` is found in ``level``."""
    idx = psi.space.factor(index)
    dim = psi.space.dims[idx]
    if not 0 <= level < dim:
        raise ConfigurationError(f"level {level} out of range for factor of dimension {dim}")
    probs = np.abs(psi.amplitudes.reshape(psi.space.dims)) ** 2
    axes = tuple(i for i in range(psi.space.n_factors) if i != idx)
    return float(probs.sum(axis=axes)[level])


def subsystem_populations(psi: Ket, index: int | str) -> np.ndarray:
    idx = psi.space.factor(index)
    probs = np.abs(psi.amplitudes.reshape(psi.space.dims)) ** 2
    axes = tuple(i for i in range(psi.space.n_factors) if i != idx)
    return probs.sum(axis=axes)
