import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pf_lattice.errors import HypothesisViolated, PreconditionViolation
from pf_lattice.fixtures import (ALL_ONES_4, CORNER_NILPOTENT, CYCLIC_3, SWAP_PLUS_IDENTITY, UPPER_JORDAN_2,
                                 WEIGHTED_BLOCKS)
from pf_lattice.lattice import is_invariant_ideal
from pf_lattice.perron import (common_peripheral_eigenpair, commuting_eigenvalue, is_ideal_irreducible,
                               nonnegative_eigenvector, perron_pair, peripheral_cycle_structure,
                               strongly_expanding_sum)
from pf_lattice.verify import random_irreducible

from conftest import invariant_subsets


def test_irreducibility_fixtures():
    assert is_ideal_irreducible([ALL_ONES_4]).irreducible
    cert = is_ideal_irreducible([UPPER_JORDAN_2])
    assert not cert.irreducible and cert.witness.one_based() == [1]
    cert = is_ideal_irreducible([SWAP_PLUS_IDENTITY])
    assert cert.to_dict() == {"irreducible": False, "witness": [1, 2]}
    # a collection can be irreducible although each member is not
    assert is_ideal_irreducible([UPPER_JORDAN_2, UPPER_JORDAN_2.T]).irreducible
    with pytest.raises(ValueError):
        is_ideal_irreducible([])


@given(st.integers(2, 6), st.integers(0, 2**32 - 1), st.floats(0.05, 0.6))
@settings(max_examples=300, deadline=None)
def test_irreducibility_agrees_with_subset_enumeration(n, seed, density):
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.0, 1.0, (n, n)) * (rng.uniform(size=(n, n)) < density)
    cert = is_ideal_irreducible([a])
    brute = invariant_subsets(a)
    assert cert.irreducible == (not brute)
    if not cert.irreducible:
        assert cert.witness.support in brute


def test_perron_pair_fixtures():
    r, x0, xs = perron_pair(WEIGHTED_BLOCKS)
    assert r == pytest.approx(6.0, abs=1e-9)
    assert x0 == pytest.approx(np.array([1, 1, 2, 2]) / 6, rel=1e-7)
    assert xs / xs[0] == pytest.approx([1, 1, 2, 2], rel=1e-7)
    r, x0, xs = perron_pair(CYCLIC_3)
    assert r == pytest.approx(1.0) and x0 == pytest.approx(np.ones(3) / 3)
    assert xs == pytest.approx(np.ones(3))
    r, x0, _ = perron_pair(ALL_ONES_4)
    assert r == pytest.approx(4.0) and x0 == pytest.approx(np.full(4, 0.25))
    with pytest.raises(PreconditionViolation):
        perron_pair(SWAP_PLUS_IDENTITY)


def test_strongly_expanding_sum():
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert strongly_expanding_sum(swap) == pytest.approx(np.array([[1, 2], [2, 1]]) / 3, abs=1e-12)
    tc = strongly_expanding_sum(CYCLIC_3)
    assert tc.min() > 0 and tc.sum(axis=1) == pytest.approx(np.ones(3))
    assert strongly_expanding_sum(ALL_ONES_4).min() > 0


@given(st.integers(2, 9), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_expanding_sum_is_positive_for_sparse_irreducible(n, seed):
    t = np.asarray(random_irreducible(n, 0.0, seed))
    assert strongly_expanding_sum(t).min() > 0


def test_peripheral_structure_fixtures():
    st_ = peripheral_cycle_structure(SWAP_PLUS_IDENTITY)
    assert st_.radius == pytest.approx(1.0)
    assert np.abs(st_.projection - np.eye(4)).max() <= 1e-9
    assert [p + 1 for p in st_.permutation] == [2, 1, 3, 4]
    assert st_.period == 2 and st_.x0 == pytest.approx(np.ones(4))
    for v, e in zip(st_.vectors, np.eye(4)):
        assert v == pytest.approx(e)
    st_ = peripheral_cycle_structure(CYCLIC_3)
    assert st_.cycles() == [[0, 1, 2]] and st_.period == 3
    st_ = peripheral_cycle_structure(np.diag([1.0, 0.5]))
    assert st_.rank == 1 and st_.vectors[0] == pytest.approx([1, 0]) and st_.period == 1
    assert not st_.quasi_interior


def test_peripheral_structure_rejects_defective_input():
    with pytest.raises(HypothesisViolated):
        peripheral_cycle_structure(UPPER_JORDAN_2)


def test_common_eigenpair_fixtures():
    pair = common_peripheral_eigenpair(ALL_ONES_4, SWAP_PLUS_IDENTITY)
    assert pair.x0 == pytest.approx(np.full(4, 0.25))
    assert pair.lambda_T == pytest.approx(4.0) and pair.mu_K == pytest.approx(1.0)
    pair = common_peripheral_eigenpair(WEIGHTED_BLOCKS, SWAP_PLUS_IDENTITY)
    assert pair.x0 / pair.x0[0] == pytest.approx([1, 1, 2, 2], rel=1e-7)
    assert pair.lambda_T == pytest.approx(6.0) and pair.mu_K == pytest.approx(1.0)
    r, x0, _ = perron_pair(CYCLIC_3)
    pair = common_peripheral_eigenpair(CYCLIC_3, CYCLIC_3)
    assert pair.x0 == pytest.approx(x0) and pair.lambda_T == pytest.approx(r) == pair.mu_K
    with pytest.raises(PreconditionViolation):
        common_peripheral_eigenpair(ALL_ONES_4, np.diag([1.0, 2.0, 3.0, 4.0]))


def test_commuting_eigenvalue_fixtures():
    st_ = peripheral_cycle_structure(SWAP_PLUS_IDENTITY)
    ce = commuting_eigenvalue(CORNER_NILPOTENT, st_, SWAP_PLUS_IDENTITY)
    assert ce.value == pytest.approx(0.0, abs=1e-9)
    assert ce.x / ce.x.max() == pytest.approx([0, 0, 1, 0])
    assert ce.xstar / ce.xstar.max() == pytest.approx([0, 0, 0, 1])
    ce = commuting_eigenvalue(ALL_ONES_4, st_, SWAP_PLUS_IDENTITY)
    assert ce.value == pytest.approx(4.0) and ce.x / ce.x[0] == pytest.approx(np.ones(4))
    ce = commuting_eigenvalue(SWAP_PLUS_IDENTITY, st_, SWAP_PLUS_IDENTITY)
    assert ce.value == pytest.approx(1.0)


def test_nonnegative_eigenvector_of_reducible_matrix():
    m = np.array([[1.0, 1.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.5]])
    rho, v, w = nonnegative_eigenvector(m)
    assert rho == pytest.approx(1.0)
    assert m @ v == pytest.approx(v) and m.T @ w == pytest.approx(w)
    assert v.min() >= 0 and w.min() >= 0
    assert is_invariant_ideal(m, set(np.flatnonzero(v)))
