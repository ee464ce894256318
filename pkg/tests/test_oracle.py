import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cavity_ququart.dynamics import Propagator
from cavity_ququart.hilbert import ConfigurationError
from cavity_ququart.models import (
    SystemParams,
    effective_mismatch,
    effective_single_photon,
    effective_vacuum,
)
from cavity_ququart.oracle import (
    DOUBLE_LABELS,
    ames_fidelity_bound,
    ames_overlap_envelope,
    ames_time_and_condition,
    mismatch_block,
    printed_mismatch_eigenvectors,
    printed_mismatch_matrix,
    typo_ledger,
    vac_double_block,
    vac_single_block,
)
from cavity_ququart.protocols.states import atomic_ket
from cavity_ququart.validation import numeric_mismatch_block

N_GRID = 100


def engine_amplitudes(h, initial, labels, times):
    states = Propagator(h).trajectory(atomic_ket(initial), times)
    idx = [int(np.argmax(atomic_ket(k).amplitudes)) for k in labels]
    return states[:, idx]


@pytest.mark.parametrize("initial", ["ee1", "gg4"])
def test_vacuum_double_block_matches_engine(transfer_params, initial):
    p = transfer_params
    block = vac_double_block(p.omega_at, p.lam, initial)
    times = np.linspace(0, 2 * math.pi / abs(p.lam), N_GRID)
    numeric = engine_amplitudes(effective_vacuum(p, rotating=True), initial, DOUBLE_LABELS, times)
    exact = np.array([block.rotating_amplitudes(t) for t in times])
    assert np.max(np.abs(numeric - exact)) <= 1e-9


@pytest.mark.parametrize("variant,builder", [("vacuum", effective_vacuum),
                                             ("single_photon", effective_single_photon)])
def test_single_block_matches_engine(transfer_params, variant, builder):
    p = transfer_params
    block = vac_single_block(p.omega_at, p.lam, variant)
    times = np.linspace(0, 2 * math.pi / abs(p.lam), N_GRID)
    numeric = engine_amplitudes(builder(p, rotating=True), "eg1", block.basis_labels, times)
    exact = np.array([block.rotating_amplitudes(t) for t in times])
    assert np.max(np.abs(numeric - exact)) <= 1e-9


@pytest.mark.parametrize("lam_frac", [1.0, 0.6, 1.7])
def test_mismatch_block_matches_engine(mismatch_params, lam_frac):
    m = mismatch_params
    p = SystemParams.from_lambda_prime(lam_frac * m.lam_prime, m.delta_mismatch, m.detuning, m.omega_op)
    block = mismatch_block(p.delta_mismatch, p.lam_prime, p.omega_A, p.omega_B)
    times = np.linspace(0, 4 * math.pi / p.rabi_mismatch, N_GRID)
    numeric = engine_amplitudes(effective_mismatch(p, rotating=True), "gg4", DOUBLE_LABELS, times)
    exact = np.array([block.rotating_amplitudes(t) for t in times])
    assert np.max(np.abs(numeric - exact)) <= 1e-9


def test_mismatch_block_equals_model_block(mismatch_params):
    m = mismatch_params
    block = mismatch_block(m.delta_mismatch, m.lam_prime, m.omega_A, m.omega_B)
    numeric = numeric_mismatch_block(m).real
    assert np.max(np.abs(numeric - block.matrix)) <= 1e-12 * np.max(np.abs(block.matrix))


@given(st.floats(0.1, 10.0), st.floats(0.0, 10.0))
def test_block_eigensystems_exact(lam, delta):
    for block in (vac_double_block(0.0, lam), vac_single_block(0.0, lam, "vacuum"),
                  vac_single_block(0.0, lam, "single_photon"), mismatch_block(delta, lam, -delta / 2, delta / 2)):
        scale = max(1.0, np.max(np.abs(block.matrix)))
        assert block.reconstruction_residual() <= 1e-12 * scale
        assert block.orthonormality_residual() <= 1e-12


def test_printed_mismatch_vectors_are_exact_for_printed_matrix():
    d, lp = 2.0, 1.3
    vecs = printed_mismatch_eigenvectors(d, lp)
    h = printed_mismatch_matrix(d, lp, -d / 2, d / 2)
    rayleigh = vecs.T @ h @ vecs
    assert np.max(np.abs(rayleigh - np.diag(np.diag(rayleigh)))) <= 1e-12


def test_mismatch_at_zero_delta_is_vacuum_block_with_flipped_sign():
    lp = 0.7
    mis = mismatch_block(0.0, lp, 0.0, 0.0)
    vac = vac_double_block(0.0, -lp)
    assert np.allclose(mis.matrix, vac.matrix, atol=1e-14)


def test_unknown_initial_rejected():
    with pytest.raises(ConfigurationError):
        vac_double_block(0.0, 1.0, "eg3")


@given(st.floats(0.05, 5.0), st.floats(0.0, 1.0))
def test_ames_time_solves_overlap_condition(lam_prime, delta_frac):
    delta = 2 * lam_prime * delta_frac
    timing = ames_time_and_condition(delta, lam_prime)
    assert timing.achievable
    assert abs(ames_overlap_envelope(delta, lam_prime, timing.t_e)) <= 1e-9


def test_equal_condition_gives_pi_over_rabi():
    timing = ames_time_and_condition(2.0, 1.0)
    assert timing.t_e == pytest.approx(math.pi / math.sqrt(8.0), rel=1e-12)


def test_zero_delta_gives_quarter_period():
    assert ames_time_and_condition(0.0, 1.0).t_e == pytest.approx(math.pi / 4, rel=1e-12)


def test_condition_violation_not_achievable():
    timing = ames_time_and_condition(2.0, 0.9)
    assert not timing.achievable and math.isnan(timing.t_e)
    assert ames_fidelity_bound(2.0, 0.9) < 1
    assert ames_fidelity_bound(2.0, 1.0) == 1


def test_typo_ledger_entries(transfer_params, mismatch_params):
    t, m = transfer_params, mismatch_params
    entries = {e.id: e for e in typo_ledger(t.omega_at, t.lam, m.delta_mismatch, m.lam_prime,
                                            m.omega_A, m.omega_B, numeric_mismatch_block(m))}
    offset = entries["vacuum_double_block_eigenvalue_offset"]
    assert offset.max_deviation == pytest.approx(t.omega_at, rel=1e-6)
    coeffs = entries["mismatch_expansion_coefficients"]
    lp, om = m.lam_prime, m.rabi_mismatch
    expected = [lp / om, 1 / math.sqrt(2), m.delta_mismatch / (math.sqrt(2) * om), lp / om]
    assert np.allclose(np.abs(coeffs.recomputed_value), np.abs(expected), atol=1e-12)
    assert coeffs.max_deviation > 0.1
    for e in entries.values():
        assert e.printed_value and e.recomputed_value
