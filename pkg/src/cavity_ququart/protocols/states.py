"""Small coefficient containers for the protocol inputs and outputs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..hilbert import HilbertSpace, Ket, NORM_TOL, atom_space

QUBIT_PAIR_SPACE = HilbertSpace((2, 2), ("q1", "q2"))
QUQUART_SPACE = HilbertSpace((4,), ("C",))


def _check_norm(vec: np.ndarray, what: str) -> None:
    norm = np.linalg.norm(vec)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"{what} is not normalized (norm = {norm!r})")


def haar_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return vec / np.linalg.norm(vec)


@dataclass(frozen=True)
class QubitPairState:
    """``C_gg|gg> + C_eg|eg> + C_ge|ge> + C_ee|ee>``; first letter is qubit A."""

    c_gg: complex
    c_eg: complex
    c_ge: complex
    c_ee: complex

    def __post_init__(self):
        _check_norm(self.computational(), "QubitPairState")

    @classmethod
    def from_computational(cls, vec) -> "QubitPairState":
        """From amplitudes in ``(gg, ge, eg, ee)`` order (index ``2 A + B``)."""
        gg, ge, eg, ee = (complex(x) for x in np.asarray(vec).ravel())
        return cls(c_gg=gg, c_eg=eg, c_ge=ge, c_ee=ee)

    @classmethod
    def haar_random(cls, rng: np.random.Generator) -> "QubitPairState":
        return cls.from_computational(haar_vector(4, rng))

    def computational(self) -> np.ndarray:
        return np.array([self.c_gg, self.c_ge, self.c_eg, self.c_ee], dtype=complex)

    def transfer_levels(self) -> np.ndarray:
        """Coefficients in the order they land on ququart levels |1>..|4>: (gg, eg, ge, ee)."""
        return np.array([self.c_gg, self.c_eg, self.c_ge, self.c_ee], dtype=complex)

    def ket(self) -> Ket:
        return Ket(QUBIT_PAIR_SPACE, self.computational())

    def with_ququart_ground(self) -> Ket:
        """``|psi>_AB (x) |1>_C`` on the 16-dimensional atomic space."""
        ground = np.zeros(4)
        ground[0] = 1.0
        return Ket(atom_space(), np.kron(self.computational(), ground))


@dataclass(frozen=True)
class QuquartState:
    """``c1|1> + c2|2> + c3|3> + c4|4>``."""

    coefficients: tuple[complex, complex, complex, complex]

    def __post_init__(self):
        coeffs = tuple(complex(x) for x in self.coefficients)
        if len(coeffs) != 4:
            raise ValueError("a ququart state has four coefficients")
        object.__setattr__(self, "coefficients", coeffs)
        _check_norm(self.vector(), "QuquartState")

    @classmethod
    def haar_random(cls, rng: np.random.Generator) -> "QuquartState":
        return cls(tuple(haar_vector(4, rng)))

    def vector(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=complex)

    def ket(self) -> Ket:
        return Ket(QUQUART_SPACE, self.vector())


def atomic_ket(label: str) -> Ket:
    """Basis ket of the atomic space from a label such as ``'eg3'``."""
    if len(label) != 3 or label[0] not in "ge" or label[1] not in "ge" or label[2] not in "1234":
        raise ValueError(f"bad atomic label {label!r}")
    levels = ("ge".index(label[0]), "ge".index(label[1]), int(label[2]) - 1)
    return atom_space().basis(levels)


def atomic_state(coeffs: dict[str, complex]) -> Ket:
    vec = sum(c * atomic_ket(k).amplitudes for k, c in coeffs.items())
    return Ket.normalized(atom_space(), vec)
