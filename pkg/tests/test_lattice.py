import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pf_lattice.errors import MatrixFormatError
from pf_lattice.fixtures import ALL_ONES_4, SWAP_PLUS_IDENTITY
from pf_lattice.lattice import (CoordinateIdeal, PosMatrix, Tolerances, is_invariant_ideal, is_quasi_interior,
                                quasi_interior_violation, support_of)
from pf_lattice.matrix_io import dumps, load_matrix, parse_csv_matrix, parse_json_matrix, save_matrix

from conftest import invariant_subsets


def test_posmatrix_rejects_bad_input():
    with pytest.raises(MatrixFormatError):
        PosMatrix([[1.0, -0.5], [0.0, 1.0]])
    with pytest.raises(MatrixFormatError):
        PosMatrix([[1.0, 2.0, 3.0]])
    with pytest.raises(MatrixFormatError):
        PosMatrix([[1.0]])
    with pytest.raises(MatrixFormatError):
        PosMatrix([[1.0, np.nan], [0.0, 1.0]])


def test_posmatrix_clamps_tiny_negatives_and_is_immutable():
    m = PosMatrix([[1.0, -1e-12], [0.0, 1.0]])
    assert m.entries[0, 1] == 0.0
    with pytest.raises(ValueError):
        m.entries[0, 0] = 5.0
    assert m == PosMatrix(np.array(m))
    assert hash(m) == hash(PosMatrix(np.array(m)))


def test_support_of():
    assert support_of([1, 0, 2, 0]) == {0, 2}
    assert support_of([0, 0, 0, 0]) == frozenset()
    assert support_of(np.ones(4)) == {0, 1, 2, 3}


def test_invariant_ideal_examples():
    assert is_invariant_ideal([[1, 1], [0, 1]], {0})
    assert not is_invariant_ideal([[1, 1], [1, 1]], {0})
    assert is_invariant_ideal(SWAP_PLUS_IDENTITY, CoordinateIdeal.from_one_based(4, [3, 4]))
    assert invariant_subsets(ALL_ONES_4) == []


def test_quasi_interior():
    assert is_quasi_interior([1, 1, 1, 1])
    assert quasi_interior_violation([1, 0, 1, 1]) == 1
    assert is_quasi_interior([1, 1, 2, 2])


def test_coordinate_ideal_order_and_serialization():
    a = CoordinateIdeal.of(4, [0])
    b = CoordinateIdeal.from_one_based(4, [1, 2])
    assert a < b and a <= b and not b < a
    assert b.one_based() == [1, 2]
    assert CoordinateIdeal.of(4, []).is_trivial and CoordinateIdeal.of(4, range(4)).is_trivial
    with pytest.raises(ValueError):
        CoordinateIdeal.of(3, [3])


@given(arrays(np.float64, (4, 4), elements=st.floats(0.0, 1.0)), st.integers(0, 15))
@settings(max_examples=200, deadline=None)
def test_invariance_matches_definition(a, bits):
    a = np.where(a < 0.5, 0.0, a)
    sub = {j for j in range(4) if bits >> j & 1}
    # A I_S in I_S  <=>  A e_j stays in I_S for every j in S
    direct = all(set(np.flatnonzero(a[:, j] > 0)) <= sub for j in sub)
    assert is_invariant_ideal(a, sub) == direct


def test_tolerances_parse_and_env():
    assert Tolerances.parse("1e-12").zero == 1e-12
    t = Tolerances.parse("zero=1e-10,lp_eps=1e-8")
    assert (t.zero, t.lp_eps) == (1e-10, 1e-8)
    assert Tolerances.from_env({"PF_LATTICE_TOL": "cluster=1e-6"}).cluster == 1e-6
    assert Tolerances.from_env({}) == Tolerances()
    with pytest.raises(ValueError):
        Tolerances.parse("bogus=1")
    with pytest.raises(ValueError):
        Tolerances(zero=0.0)


def test_json_and_csv_parsing():
    a = parse_json_matrix('{"n": 2, "rows": [[1, 2], [3, 4]]}')
    assert np.array_equal(a, [[1, 2], [3, 4]])
    assert np.array_equal(parse_csv_matrix("1,2\n3,4\n"), a)
    for bad in ['{"n": 3, "rows": [[1, 2], [3, 4]]}', "[[1, 0], [0, 1]]",
                '{"n": 2, "rows": [[1, 2], [3]]}', "not json"]:
        with pytest.raises(MatrixFormatError):
            parse_json_matrix(bad)
    with pytest.raises(MatrixFormatError):
        parse_csv_matrix("1,x\n3,4\n")
    # signed files parse (commutators are serialized too); positivity is checked by PosMatrix
    signed = parse_json_matrix('{"n": 2, "rows": [[1, -2], [3, 4]]}')
    with pytest.raises(MatrixFormatError):
        PosMatrix(signed)


@given(arrays(np.float64, (3, 3), elements=st.floats(0.0, 1e6, allow_subnormal=False)))
@settings(max_examples=100, deadline=None)
def test_seventeen_digit_round_trip(a):
    text = dumps({"rows": a})
    assert np.array_equal(np.array(json.loads(text)["rows"]), a)


def test_save_and_load(tmp_path):
    a = np.array([[0.1, 1 / 3], [2.0, 0.0]])
    save_matrix(tmp_path / "m.json", a)
    assert np.array_equal(load_matrix(tmp_path / "m.json"), a)
    (tmp_path / "m.csv").write_text("0.1,0.5\n2,0\n")
    assert load_matrix(tmp_path / "m.csv")[0, 1] == 0.5
