"""Hamiltonians, Schrieffer-Wolff generators and gates of the qubit-ququart cavity.

Two qubits A and B and one ququart C couple to the cavity modes a and b
through the collective dipoles

    D_A = sigma_A + |1><2| + |3><4|
    D_B = sigma_B + |1><3| + |2><4|

Everything is in angular-frequency units with hbar = 1.  The resonant model
gives the ququart level |2> the A-branch energy; the mismatch model assigns
omega_B to |2> and omega_A to |3> (each model is built exactly as written,
the two labellings are not reconciled).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .hilbert import (
    ConfigurationError,
    HilbertSpace,
    Operator,
    annihilation,
    atom_space,
    dagger,
    embed,
    qubit_lowering,
    transition,
)


class FarDetuningError(ConfigurationError):
    """Effective model requested outside the dispersive regime."""


FAR_DETUNING_RATIO = 10.0


@dataclass(frozen=True)
class SystemParams:
    """Scalar parameters of the cavity model (rad/s).

    ``g_B`` is not independent: it is derived from ``g_A``, the detuning and
    the mismatch so that ``g_A**2/(Delta - delta/2) == g_B**2/(Delta + delta/2)``.
    With ``delta_mismatch = 0`` this reduces to ``g_B == g_A``.
    """

    omega_op: float
    omega_at: float
    g_A: float
    delta_mismatch: float = 0.0
    n_max: int = 2

    def __post_init__(self):
        if self.n_max < 1:
            raise ConfigurationError(f"n_max must be >= 1, got {self.n_max}")
        d = self.detuning
        if d == 0:
            raise ConfigurationError("cavity and atoms are resonant (detuning = 0)")
        if abs(self.delta_mismatch) >= 2 * abs(d):
            raise ConfigurationError(
                f"|delta_mismatch| = {abs(self.delta_mismatch)!r} must be below 2|detuning| = {2 * abs(d)!r}"
            )

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_detuning(cls, g: float, detuning: float, omega_op: float,
                      delta_mismatch: float = 0.0, n_max: int = 2) -> "SystemParams":
        return cls(omega_op=omega_op, omega_at=omega_op - detuning, g_A=g,
                   delta_mismatch=delta_mismatch, n_max=n_max)

    @classmethod
    def from_lambda_prime(cls, lambda_prime: float, delta_mismatch: float, detuning: float,
                          omega_op: float, n_max: int = 2) -> "SystemParams":
        """Pick ``g_A`` so that ``g_A**2 / (Delta - delta/2) == lambda_prime``."""
        denom = detuning - delta_mismatch / 2
        if lambda_prime / denom < 0:
            raise ConfigurationError("lambda_prime must share the sign of detuning - delta/2")
        g = math.sqrt(lambda_prime * denom)
        return cls.from_detuning(g, detuning, omega_op, delta_mismatch, n_max)

    @classmethod
    def reference_transfer(cls, n_max: int = 2) -> "SystemParams":
        """g = 2pi x 15.2 GHz, Delta = 100 g, omega_op = 2pi x 192 THz."""
        g = 2 * math.pi * 15.2e9
        return cls.from_detuning(g, 100 * g, 2 * math.pi * 192e12, n_max=n_max)

    @classmethod
    def reference_mismatch(cls, n_max: int = 2) -> "SystemParams":
        """delta = 2pi x 304 MHz with lambda' = delta/2 exactly, Delta = 100 x 2pi x 15.2 GHz."""
        delta = 2 * math.pi * 304e6
        detuning = 100 * 2 * math.pi * 15.2e9
        return cls.from_lambda_prime(delta / 2, delta, detuning, 2 * math.pi * 192e12, n_max=n_max)

    def with_coupling_scale(self, factor: float) -> "SystemParams":
        """Scale both effective couplings (lambda, lambda') by ``factor``."""
        if factor <= 0:
            raise ConfigurationError(f"coupling scale must be positive, got {factor}")
        return replace(self, g_A=self.g_A * math.sqrt(factor))

    # -- derived quantities ----------------------------------------------

    @property
    def detuning(self) -> float:
        return self.omega_op - self.omega_at

    @property
    def g_B(self) -> float:
        d, dm = self.detuning, self.delta_mismatch
        return self.g_A * math.sqrt((d + dm / 2) / (d - dm / 2))

    @property
    def lam(self) -> float:
        """Resonant effective coupling, ``-g_A**2 / Delta``."""
        return -self.g_A**2 / self.detuning

    @property
    def lam_B(self) -> float:
        return -self.g_B**2 / self.detuning

    @property
    def lam_prime(self) -> float:
        return self.g_A**2 / (self.detuning - self.delta_mismatch / 2)

    @property
    def omega_A(self) -> float:
        return self.omega_at - self.delta_mismatch / 2

    @property
    def omega_B(self) -> float:
        return self.omega_at + self.delta_mismatch / 2

    @property
    def rabi_mismatch(self) -> float:
        """Generalized Rabi frequency sqrt(delta**2 + 4 lambda'**2)."""
        return math.hypot(self.delta_mismatch, 2 * self.lam_prime)

    def require_far_detuned(self, ratio: float = FAR_DETUNING_RATIO) -> None:
        g = max(abs(self.g_A), abs(self.g_B))
        # slack for the round-off in omega_op - omega_at
        if abs(self.detuning) < ratio * g * (1 - 1e-9):
            raise FarDetuningError(
                f"detuning: |Delta| = {abs(self.detuning):.6g} < {ratio:g} x max(|g_A|, |g_B|) = {ratio * g:.6g}"
            )
        if abs(self.delta_mismatch) > abs(self.detuning) / ratio:
            raise FarDetuningError(
                f"delta_mismatch: |delta| = {abs(self.delta_mismatch):.6g} > |Delta|/{ratio:g}"
            )


# -- building blocks -------------------------------------------------------


def _require_atoms(space: HilbertSpace) -> None:
    if not all(space.has(x) for x in "ABC") or space.dims[:3] != (2, 2, 4):
        raise ConfigurationError(f"space {space.dims} lacks the qubit/qubit/ququart factors")


def _require_modes(space: HilbertSpace) -> None:
    if not (space.has("a") and space.has("b")):
        raise ConfigurationError(f"space {space.dims} has no cavity modes")


def has_modes(space: HilbertSpace) -> bool:
    return space.has("a") and space.has("b")


def ququart_op(space: HilbertSpace, i: int, j: int) -> Operator:
    """``|i><j|`` on the ququart, levels numbered 1..4."""
    _require_atoms(space)
    return embed(transition(4, i - 1, j - 1), "C", space)


def qubit_sigma(space: HilbertSpace, which: str) -> Operator:
    _require_atoms(space)
    return embed(qubit_lowering(), which, space)


def mode_lowering(space: HilbertSpace, which: str) -> Operator:
    _require_modes(space)
    n_max = space.dims[space.factor(which)] - 1
    return embed(annihilation(n_max), which, space)


def collective_dipoles(space: HilbertSpace) -> tuple[Operator, Operator]:
    _require_atoms(space)
    d_a = qubit_sigma(space, "A") + ququart_op(space, 1, 2) + ququart_op(space, 3, 4)
    d_b = qubit_sigma(space, "B") + ququart_op(space, 1, 3) + ququart_op(space, 2, 4)
    return d_a, d_b


def dipole_z(d: Operator) -> Operator:
    """Collective inversion ``D^dag D - D D^dag``."""
    return dagger(d) @ d - d @ dagger(d)


def excitation_number(space: HilbertSpace) -> Operator:
    """Total excitations: qubits, ququart weights (0, 1, 1, 2), photons."""
    n = atomic_excitation_number(space)
    if has_modes(space):
        n = n + photon_number(space)
    return n


def atomic_excitation_number(space: HilbertSpace) -> Operator:
    _require_atoms(space)
    sa, sb = qubit_sigma(space, "A"), qubit_sigma(space, "B")
    return (dagger(sa) @ sa + dagger(sb) @ sb + ququart_op(space, 2, 2)
            + ququart_op(space, 3, 3) + 2 * ququart_op(space, 4, 4))


def photon_number(space: HilbertSpace) -> Operator:
    a, b = mode_lowering(space, "a"), mode_lowering(space, "b")
    return dagger(a) @ a + dagger(b) @ b


def rotating_frame(params: SystemParams, space: HilbertSpace) -> Operator:
    """``omega_at * N_atoms + omega_op * N_photons``.

    For the resonant model this is exactly the bare Hamiltonian; for the
    mismatch model it removes the mean atomic frequency and leaves the
    +-delta/2 splittings in the dynamics.
    """
    frame = params.omega_at * atomic_excitation_number(space)
    if has_modes(space):
        frame = frame + params.omega_op * photon_number(space)
    return frame


# -- resonant model --------------------------------------------------------


def _mode_energy(params: SystemParams, space: HilbertSpace, rotating: bool) -> Operator:
    omega = params.detuning if rotating else params.omega_op
    return omega * photon_number(space)


def bare_hamiltonian(params: SystemParams, space: HilbertSpace, rotating: bool = False) -> Operator:
    """H_0: omega_at on each branch (|4> carries 2 omega_at) plus mode energies.

    ``rotating=True`` drops ``omega_at`` per excitation analytically, leaving
    only ``Delta`` per photon; all builders below take the same flag.
    """
    _require_atoms(space)
    sa, sb = qubit_sigma(space, "A"), qubit_sigma(space, "B")
    p = lambda k: ququart_op(space, k, k)  # noqa: E731
    omega = 0.0 if rotating else params.omega_at
    h0 = omega * (dagger(sa) @ sa + p(2) + p(4))
    h0 = h0 + omega * (dagger(sb) @ sb + p(3) + p(4))
    if has_modes(space):
        h0 = h0 + _mode_energy(params, space, rotating)
    return h0


def interaction(params: SystemParams, space: HilbertSpace) -> Operator:
    _require_modes(space)
    d_a, d_b = collective_dipoles(space)
    a, b = mode_lowering(space, "a"), mode_lowering(space, "b")
    jc_a = dagger(a) @ d_a
    jc_b = dagger(b) @ d_b
    return params.g_A * (jc_a + dagger(jc_a)) + params.g_B * (jc_b + dagger(jc_b))


def build_full(params: SystemParams, space: HilbertSpace, rotating: bool = False) -> Operator:
    """Full Jaynes-Cummings-type Hamiltonian (valid at any detuning)."""
    return bare_hamiltonian(params, space, rotating) + interaction(params, space)


def sw_generator(params: SystemParams, space: HilbertSpace) -> Operator:
    """Anti-Hermitian S with ``H_I + [S, H_0] = 0``."""
    _require_modes(space)
    d_a, d_b = collective_dipoles(space)
    a, b = mode_lowering(space, "a"), mode_lowering(space, "b")
    delta = params.detuning
    s_a = dagger(d_a) @ a - dagger(a) @ d_a
    s_b = dagger(d_b) @ b - dagger(b) @ d_b
    return -(params.g_A / delta) * s_a - (params.g_B / delta) * s_b


def effective_interaction(params: SystemParams, space: HilbertSpace) -> Operator:
    """Second-order part ``H_eff - H_0`` (photon-number dependent if modes present)."""
    d_a, d_b = collective_dipoles(space)
    term_a = dagger(d_a) @ d_a
    term_b = dagger(d_b) @ d_b
    if has_modes(space):
        a, b = mode_lowering(space, "a"), mode_lowering(space, "b")
        term_a = term_a + dipole_z(d_a) @ (dagger(a) @ a)
        term_b = term_b + dipole_z(d_b) @ (dagger(b) @ b)
    return params.lam * term_a + params.lam_B * term_b


def build_effective(params: SystemParams, space: HilbertSpace, rotating: bool = False) -> Operator:
    params.require_far_detuned()
    return bare_hamiltonian(params, space, rotating) + effective_interaction(params, space)


def effective_vacuum(params: SystemParams, rotating: bool = False) -> Operator:
    """Effective atomic Hamiltonian with both modes in vacuum (16 x 16)."""
    params.require_far_detuned()
    space = atom_space()
    d_a, d_b = collective_dipoles(space)
    return (bare_hamiltonian(params, space, rotating)
            + params.lam * (dagger(d_a) @ d_a) + params.lam_B * (dagger(d_b) @ d_b))


def effective_single_photon(params: SystemParams, rotating: bool = False) -> Operator:
    """Effective atomic Hamiltonian with one photon in each mode (16 x 16)."""
    space = atom_space()
    d_a, d_b = collective_dipoles(space)
    return (effective_vacuum(params, rotating)
            + params.lam * dipole_z(d_a) + params.lam_B * dipole_z(d_b))


# -- mismatch model --------------------------------------------------------


def bare_hamiltonian_mismatch(params: SystemParams, space: HilbertSpace, rotating: bool = False) -> Operator:
    _require_atoms(space)
    sa, sb = qubit_sigma(space, "A"), qubit_sigma(space, "B")
    p = lambda k: ququart_op(space, k, k)  # noqa: E731
    if rotating:
        omega_a, omega_b = -params.delta_mismatch / 2, params.delta_mismatch / 2
    else:
        omega_a, omega_b = params.omega_A, params.omega_B
    h0 = omega_a * (dagger(sa) @ sa + p(3) + p(4))
    h0 = h0 + omega_b * (dagger(sb) @ sb + p(2) + p(4))
    if has_modes(space):
        h0 = h0 + _mode_energy(params, space, rotating)
    return h0


def build_mismatch_full(params: SystemParams, space: HilbertSpace, rotating: bool = False) -> Operator:
    return bare_hamiltonian_mismatch(params, space, rotating) + interaction(params, space)


def sw_generator_mismatch(params: SystemParams, space: HilbertSpace) -> Operator:
    """Generator with separate denominators for the qubit and ququart transitions.

    The qubit terms keep the bare ``1/Delta`` although their transitions sit
    at omega_A, omega_B, so first-order cancellation is only approximate
    (residual of order g * delta / Delta).
    """
    _require_modes(space)
    a, b = mode_lowering(space, "a"), mode_lowering(space, "b")
    sa, sb = qubit_sigma(space, "A"), qubit_sigma(space, "B")
    q = lambda i, j: ququart_op(space, i, j)  # noqa: E731
    delta, dm = params.detuning, params.delta_mismatch
    x_a = q(1, 2) + q(3, 4)
    x_b = q(1, 3) + q(2, 4)
    s = (params.g_A / delta) * (dagger(a) @ sa - dagger(sa) @ a)
    s = s + (params.g_B / delta) * (dagger(b) @ sb - dagger(sb) @ b)
    s = s + (params.g_A / (delta - dm / 2)) * (dagger(a) @ x_a - dagger(x_a) @ a)
    s = s + (params.g_B / (delta + dm / 2)) * (dagger(b) @ x_b - dagger(x_b) @ b)
    return s


def effective_mismatch(params: SystemParams, rotating: bool = False) -> Operator:
    """``H_0,mis - lambda' (D_A^dag D_A + D_B^dag D_B)`` on the atoms (vacuum modes)."""
    params.require_far_detuned()
    space = atom_space()
    d_a, d_b = collective_dipoles(space)
    return (bare_hamiltonian_mismatch(params, space, rotating)
            - params.lam_prime * (dagger(d_a) @ d_a + dagger(d_b) @ d_b))


# -- gates -----------------------------------------------------------------


def phase_gate(target: str, phi: float, space: HilbertSpace | None = None) -> Operator:
    """``|g><g| + exp(i phi) |e><e|`` on qubit ``target`` ('A' or 'B')."""
    if target not in ("A", "B"):
        raise ConfigurationError(f"phase gates act on qubit 'A' or 'B', not {target!r}")
    space = space or atom_space()
    _require_atoms(space)
    return embed(np.diag([1.0, np.exp(1j * phi)]), target, space)
