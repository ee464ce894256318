import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cavity_ququart.hilbert import ConfigurationError, atom_space, cavity_space, commutator
from cavity_ququart.models import (
    FarDetuningError,
    SystemParams,
    bare_hamiltonian,
    bare_hamiltonian_mismatch,
    build_full,
    build_mismatch_full,
    collective_dipoles,
    effective_mismatch,
    effective_single_photon,
    effective_vacuum,
    excitation_number,
    interaction,
    phase_gate,
    sw_generator,
    sw_generator_mismatch,
)

G = 2 * math.pi * 15.2e9
OMEGA_OP = 2 * math.pi * 192e12

ratios = st.floats(min_value=10.0, max_value=1000.0)
couplings = st.floats(min_value=0.1, max_value=10.0)


def params_for(ratio, g_scale=1.0, delta_frac=0.0, n_max=2):
    g = G * g_scale
    return SystemParams.from_detuning(g, ratio * g, OMEGA_OP, delta_mismatch=delta_frac * ratio * g, n_max=n_max)


@given(ratios, couplings)
def test_full_hamiltonians_hermitian(ratio, g_scale):
    p = params_for(ratio, g_scale, delta_frac=0.01)
    space = cavity_space(2)
    for h in (build_full(p, space), build_mismatch_full(p, space)):
        assert h.hermiticity_residual() <= 1e-12 * h.max_abs()


@given(ratios, couplings)
def test_generators_antihermitian(ratio, g_scale):
    p = params_for(ratio, g_scale, delta_frac=0.01)
    space = cavity_space(2)
    for s in (sw_generator(p, space), sw_generator_mismatch(p, space)):
        assert s.antihermiticity_residual() <= 1e-12 * max(1.0, s.max_abs())


def test_effective_hamiltonians_hermitian(transfer_params, mismatch_params):
    for h in (effective_vacuum(transfer_params), effective_single_photon(transfer_params),
              effective_mismatch(mismatch_params)):
        assert h.hermiticity_residual() <= 1e-12 * h.max_abs()


@given(ratios, couplings)
def test_sw_first_order_cancellation_resonant(ratio, g_scale):
    p = params_for(ratio, g_scale)
    space = cavity_space(2)
    h_i = interaction(p, space)
    residual = h_i + commutator(sw_generator(p, space), bare_hamiltonian(p, space))
    assert residual.max_abs() <= 1e-10 * h_i.max_abs()


def test_sw_mismatch_residual_scales_with_delta_over_detuning():
    space = cavity_space(2)
    fracs = np.geomspace(1e-4, 1e-3, 5)
    rel = []
    for frac in fracs:
        p = params_for(100.0, delta_frac=frac)
        h0 = bare_hamiltonian_mismatch(p, space)
        h_i = build_mismatch_full(p, space) - h0
        rel.append((h_i + commutator(sw_generator_mismatch(p, space), h0)).max_abs() / h_i.max_abs())
    slope = np.polyfit(np.log(fracs), np.log(rel), 1)[0]
    assert slope == pytest.approx(1.0, abs=1e-3)
    assert np.allclose(np.array(rel) / fracs, 0.5, rtol=1e-3)


def test_collective_dipoles_commute():
    d_a, d_b = collective_dipoles(atom_space())
    assert commutator(d_a, d_b).max_abs() == 0
    assert commutator(d_a, d_b.dag).max_abs() == 0


@given(ratios, st.floats(min_value=0.0, max_value=0.05))
def test_excitation_number_conserved(ratio, delta_frac):
    p = params_for(ratio, delta_frac=delta_frac)
    space = cavity_space(2)
    n = excitation_number(space)
    for h in (build_full(p, space), build_mismatch_full(p, space)):
        assert commutator(h, n).max_abs() <= 1e-10 * h.max_abs()


def test_g_b_derived_from_equal_effective_couplings():
    p = params_for(100.0, delta_frac=0.02)
    d, dm = p.detuning, p.delta_mismatch
    assert p.g_A**2 / (d - dm / 2) == pytest.approx(p.g_B**2 / (d + dm / 2), rel=1e-12)
    assert params_for(100.0).g_B == params_for(100.0).g_A


def test_reference_parameters():
    p = SystemParams.reference_transfer()
    assert p.detuning == pytest.approx(100 * G, rel=1e-12)
    m = SystemParams.reference_mismatch()
    assert 4 * m.lam_prime**2 == pytest.approx(m.delta_mismatch**2, rel=1e-12)


def test_coupling_scale_scales_lambda_prime(mismatch_params):
    scaled = mismatch_params.with_coupling_scale(1.1)
    assert scaled.lam_prime == pytest.approx(1.1 * mismatch_params.lam_prime, rel=1e-12)
    with pytest.raises(ConfigurationError):
        mismatch_params.with_coupling_scale(0.0)


@pytest.mark.parametrize("kwargs", [
    {"n_max": 0},
    {"omega_at": OMEGA_OP},
])
def test_invalid_params(kwargs):
    base = {"omega_op": OMEGA_OP, "omega_at": OMEGA_OP - 100 * G, "g_A": G}
    base.update(kwargs)
    with pytest.raises(ConfigurationError):
        SystemParams(**base)


def test_far_detuning_guard():
    close = SystemParams.from_detuning(G, 5 * G, OMEGA_OP)
    with pytest.raises(FarDetuningError, match="detuning"):
        effective_vacuum(close)
    SystemParams.from_detuning(G, 10 * G, OMEGA_OP).require_far_detuned()


def test_phase_gate_acts_on_excited_state():
    space = atom_space()
    gate = phase_gate("A", math.pi / 3)
    ket = space.basis((1, 0, 0))
    assert gate.apply(ket)[space.index((1, 0, 0))] == pytest.approx(np.exp(1j * math.pi / 3))
    with pytest.raises(ConfigurationError):
        phase_gate("C", 1.0)
