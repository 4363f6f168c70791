import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from fermidicke.hilbert import (
    BasisDescriptor,
    CapacityError,
    StatisticsConfig,
    anticommutator,
    basis_state,
    build_basis,
    commutator,
    excitation_number_operator,
    mode_annihilation_operator,
    mode_number_operator,
    product_superposition_state,
    site_jump_operator,
    site_number_operator,
)

from oracle import product_state, site_lowering


def dense(op):
    return op.toarray() if sp.issparse(op) else op


@pytest.mark.parametrize("code", ["bf", "fb", "bb"])
def test_statistics_round_trip(code):
    assert StatisticsConfig.from_code(code).code == code


def test_ff_rejected():
    with pytest.raises(ValueError):
        StatisticsConfig.from_code("ff")


def test_emitted_statistics():
    assert StatisticsConfig.from_code("bf").fermionic
    assert StatisticsConfig.from_code("fb").fermionic
    assert not StatisticsConfig.from_code("bb").fermionic


@pytest.mark.parametrize("n,m,stats,dim", [(3, 0, "bf", 8), (3, 1, "bf", 16), (3, 1, "bb", 32), (4, 2, "fb", 64)])
def test_dimensions(n, m, stats, dim):
    assert build_basis(n, m, stats).dim == dim


def test_capacity_limits():
    with pytest.raises(ValueError):
        build_basis(0)
    with pytest.raises(ValueError):
        build_basis(17)
    with pytest.raises(ValueError):
        build_basis(3, 4)
    with pytest.raises(CapacityError):
        build_basis(16, 5)


def test_index_and_label():
    b = build_basis(3, 1, "bf")
    idx = b.index([0, 1, 0], [1])
    assert b.label(idx) == "|ege;1>"
    assert isinstance(b, BasisDescriptor)


@pytest.mark.parametrize("stats", ["bf", "fb", "bb"])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_site_operators_match_kronecker_oracle(stats, n):
    b = build_basis(n, 0, stats)
    for i in range(n):
        assert np.array_equal(dense(site_jump_operator(b, i)), site_lowering(n, i, stats))


@pytest.mark.parametrize("stats", ["bf", "fb"])
def test_canonical_anticommutation(stats):
    b = build_basis(4, 0, stats)
    ops = [site_jump_operator(b, i) for i in range(4)]
    eye = np.eye(b.dim)
    for i in range(4):
        for j in range(4):
            ac = dense(anticommutator(ops[i], ops[j].conj().T))
            assert np.allclose(ac, eye if i == j else 0, atol=0)
            assert np.abs(dense(anticommutator(ops[i], ops[j]))).max() == 0


def test_bosonic_sites_commute():
    b = build_basis(3, 0, "bb")
    ops = [site_jump_operator(b, i) for i in range(3)]
    for i in range(3):
        for j in range(3):
            if i != j:
                assert np.abs(dense(commutator(ops[i], ops[j].conj().T))).max() == 0


def test_number_operators():
    b = build_basis(3, 0, "bf")
    # N_e counts parents: multiplicities of eigenvalues 0..3 are binomial
    values = np.real(dense(excitation_number_operator(b)).diagonal())
    assert sorted(np.bincount(values.astype(int)).tolist()) == [1, 1, 3, 3]
    n0 = dense(site_number_operator(b, 0))
    c0 = dense(site_jump_operator(b, 0))
    assert np.allclose(n0, c0.conj().T @ c0)


def test_mode_operators():
    b = build_basis(2, 1, "bf")
    a = dense(mode_annihilation_operator(b, 0))
    assert np.allclose(a @ a, 0)
    assert np.allclose(a.conj().T @ a, dense(mode_number_operator(b, 0)))
    # the cavity mode is fermionic and anticommutes with site operators
    c = dense(site_jump_operator(b, 1))
    assert np.allclose(a @ c + c @ a, 0)
    bb = build_basis(2, 1, "bb")
    a = dense(mode_annihilation_operator(bb, 0))
    assert np.allclose(a @ a.conj().T - a.conj().T @ a, np.diag(np.where(bb.mode_occupations[:, 0] == 2, -2, 1)))


def test_basis_state_is_unit_vector():
    b = build_basis(3, 0)
    v = basis_state(b, [1, 0, 1])
    assert v.sum() == 1 and v[b.index([1, 0, 1])] == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=1, max_size=6))
def test_product_state_matches_oracle_and_is_normalised(phases):
    b = build_basis(len(phases), 0)
    psi = product_superposition_state(b, phases)
    assert abs(np.linalg.norm(psi) - 1) < 1e-12
    assert np.allclose(psi, product_state(phases), atol=1e-14)
