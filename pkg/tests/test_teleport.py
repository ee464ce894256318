import math

import numpy as np
import pytest

from cavity_ququart.hilbert import Ket, atom_space
from cavity_ququart.protocols import ames
from cavity_ququart.protocols import teleportation as tp
from cavity_ququart.protocols.states import QubitPairState, QuquartState


@pytest.fixture(scope="module")
def prepared_resource():
    return ames.prepare_ames("mismatch").state


@pytest.mark.parametrize("resource_kind", ["ideal", "prepared"])
def test_all_forward_branches_exact(rng, prepared_resource, resource_kind):
    resource = ames.ideal_resource() if resource_kind == "ideal" else prepared_resource
    for _ in range(5):
        branches = tp.teleport_branches(QubitPairState.haar_random(rng), resource)
        assert len(branches) == 16
        assert sum(b.probability for b in branches) == pytest.approx(1.0, abs=1e-12)
        for b in branches:
            assert b.probability == pytest.approx(1 / 16, abs=1e-12)
            assert 1 - b.fidelity <= 1e-10


def test_sampled_teleport_reproducible_and_exact(rng):
    state = QubitPairState.haar_random(rng)
    out1, tr1 = tp.teleport(state, ames.ideal_resource(), rng_seed=11)
    out2, tr2 = tp.teleport(state, ames.ideal_resource(), rng_seed=11)
    assert tr1.outcome == tr2.outcome
    np.testing.assert_array_equal(out1.vector(), out2.vector())
    assert abs(np.vdot(state.computational(), out1.vector())) ** 2 >= 1 - 1e-10


def test_outcome_sampling_follows_born_rule():
    state = QubitPairState(0.5, 0.5, 0.5, 0.5)
    seen = {tp.teleport(state, ames.ideal_resource(), rng_seed=s)[1].outcome.alice for s in range(64)}
    assert seen == set(tp.BELL_LABELS)


@pytest.mark.parametrize("basis", tp.REVERSE_BASES)
def test_reverse_branches_exact(rng, basis):
    for _ in range(5):
        branches = tp.reverse_teleport_branches(QuquartState.haar_random(rng), ames.ideal_resource(), basis)
        assert len(branches) == 16
        assert all(1 - b.fidelity <= 1e-10 for b in branches)
        assert sum(b.probability for b in branches) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("basis", tp.REVERSE_BASES)
def test_forward_then_reverse_is_identity(rng, basis):
    resource = ames.ideal_resource()
    for seed in range(5):
        state = QubitPairState.haar_random(rng)
        mid, _ = tp.teleport(state, resource, rng_seed=seed)
        back, _ = tp.reverse_teleport(mid, resource, rng_seed=seed, basis=basis)
        assert abs(np.vdot(state.computational(), back.computational())) ** 2 >= 1 - 1e-10


def test_reverse_corrections_local_only_in_z2xz2_basis():
    resource = ames.ideal_resource()
    fourier = tp.corrections_from_maps(tp.reverse_maps(resource, "fourier"))
    z2 = tp.corrections_from_maps(tp.reverse_maps(resource, "z2xz2"))
    assert all(tp.is_local_two_qubit(u) for u in z2.values())
    assert not all(tp.is_local_two_qubit(u) for u in fourier.values())


def test_forward_corrections_are_unitary(prepared_resource):
    for u in tp.derive_correction_table(prepared_resource).values():
        np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-10)


def test_bell_basis_orthonormal():
    vecs = np.array([k.amplitudes for k in tp.bell_basis().values()])
    np.testing.assert_allclose(vecs @ vecs.conj().T, np.eye(4), atol=1e-15)
    for kind in tp.REVERSE_BASES:
        g = np.array([v.ravel() for v in tp.generalized_bell_basis(kind).values()])
        np.testing.assert_allclose(g @ g.conj().T, np.eye(16), atol=1e-14)


def test_non_maximal_resource_reports_worst_case():
    amps = np.zeros(16, dtype=complex)
    for label, c in {0: 0.8, 5: 0.4, 10: 0.3, 15: math.sqrt(1 - 0.89)}.items():
        amps[label] = c
    with pytest.raises(tp.NotMaximallyEntangledError) as info:
        tp.derive_correction_table(Ket(atom_space(), amps))
    assert 0 < info.value.worst_case_fidelity < 1
    assert info.value.residual > 1e-8


def test_imperfect_resource_entanglement_fidelity_equals_resource_fidelity():
    params = ames.default_params("mismatch")
    nominal = ames.prepare_ames("mismatch", params)
    psi = ames.apply_correction(ames.evolve_from_gg4("mismatch", params, nominal.duration * 1.05),
                                nominal.correction)
    ideal = ames.ames_target()
    table = tp.derive_correction_table(ideal)
    f_e, f_avg = tp.channel_fidelities(tp.forward_maps(psi), table)
    resource_fid = abs(np.vdot(ideal.amplitudes, psi.amplitudes)) ** 2
    assert f_e == pytest.approx(resource_fid, abs=1e-12)
    assert f_avg == pytest.approx((4 * f_e + 1) / 5, abs=1e-12)


def test_bell_measure_collapses_onto_sampled_branch():
    state = QubitPairState(0.6, 0.0, 0.8j, 0.0)
    joint = Ket(tp.FORWARD_SPACE, state.ket().tensor(ames.ideal_resource()).amplitudes)
    probs = tp.outcome_probabilities(joint, tp.FORWARD_PAIRS)
    assert sum(probs.values()) == pytest.approx(1.0, abs=1e-12)
    outcome, collapsed = tp.bell_measure(joint, tp.FORWARD_PAIRS, rng_seed=3)
    assert outcome.probability == pytest.approx(probs[(outcome.alice, outcome.bob)], abs=1e-15)
    assert np.linalg.norm(collapsed.amplitudes) == pytest.approx(1.0, abs=1e-12)
