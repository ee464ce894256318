import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cavity_ququart.hilbert import (
    ConfigurationError,
    HilbertSpace,
    Ket,
    SpaceMismatchError,
    annihilation,
    atom_space,
    build_space,
    cavity_space,
    commutator,
    embed,
    fidelity,
    local_operator,
    overlap,
    qubit_lowering,
    subsystem_population,
    subsystem_populations,
    transition,
)

dims_lists = st.lists(st.integers(min_value=2, max_value=4), min_size=1, max_size=3)


def test_cavity_space_layout():
    space = cavity_space(2)
    assert space.dims == (2, 2, 4, 3, 3)
    assert space.labels == ("A", "B", "C", "a", "b")
    assert space.total_dim == 144
    assert cavity_space(3).total_dim == 256


def test_empty_space_rejected():
    with pytest.raises(ConfigurationError):
        build_space([])


def test_annihilation_needs_a_photon_level():
    with pytest.raises(ConfigurationError):
        annihilation(0)


@given(st.integers(min_value=1, max_value=6))
def test_ladder_commutator_below_cutoff(n_max):
    a = annihilation(n_max)
    comm = commutator(a, a.dag).matrix
    # [a, a^dag] = 1 except on the truncated top level
    assert np.allclose(np.diag(comm)[:-1], 1.0, atol=1e-12)
    assert np.isclose(comm[-1, -1], -n_max)


@given(dims_lists, st.data())
def test_index_levels_round_trip(dims, data):
    space = build_space(dims)
    levels = tuple(data.draw(st.integers(0, d - 1)) for d in dims)
    assert space.levels(space.index(levels)) == levels
    assert space.basis(levels).amplitudes[space.index(levels)] == 1


def test_ket_rejects_unnormalized():
    with pytest.raises(ValueError):
        Ket(atom_space(), np.ones(16))


def test_ket_is_immutable():
    ket = atom_space().basis((0, 0, 0))
    with pytest.raises(ValueError):
        ket.amplitudes[0] = 2


def test_operator_space_mismatch():
    a = atom_space().identity()
    b = cavity_space(2).identity()
    with pytest.raises(SpaceMismatchError):
        a + b


def test_embed_places_factor():
    space = atom_space()
    sigma = embed(qubit_lowering().matrix, "B", space)
    ket = space.basis((0, 1, 2))
    out = sigma.apply(ket)
    assert out[space.index((0, 0, 2))] == 1
    assert np.count_nonzero(out) == 1


def test_transition_and_local_operator():
    t = transition(4, 0, 1)
    assert t.matrix[0, 1] == 1 and t.max_abs() == 1
    assert local_operator(np.eye(3)).space.dims == (3,)


@given(st.integers(0, 2**31 - 1))
def test_fidelity_is_symmetric_and_bounded(seed):
    gen = np.random.default_rng(seed)
    space = atom_space()
    vecs = [gen.normal(size=16) + 1j * gen.normal(size=16) for _ in range(2)]
    psi, phi = (Ket.normalized(space, v) for v in vecs)
    f = fidelity(psi, phi)
    assert 0 <= f <= 1
    assert np.isclose(f, fidelity(phi, psi))
    assert np.isclose(abs(overlap(psi, phi)) ** 2, f)


def test_subsystem_populations_sum_to_one(rng):
    space = cavity_space(2)
    psi = Ket.normalized(space, rng.normal(size=space.total_dim) + 0j)
    pops = subsystem_populations(psi, "C")
    assert np.isclose(pops.sum(), 1.0, atol=1e-12)
    assert np.isclose(subsystem_population(psi, "C", 3), pops[3])


def test_spaces_compare_by_value():
    assert HilbertSpace((2, 2, 4), ("A", "B", "C")) == atom_space()
