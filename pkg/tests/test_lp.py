from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from pf_lattice.errors import SolverFailure
from pf_lattice.lp import linprog_bland

STATUS = {0: "optimal", 2: "infeasible", 3: "unbounded"}


def _random_lp(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(1, 6)), int(rng.integers(1, 7))
    a = rng.normal(size=(m, n))
    b = rng.normal(size=m)
    eq = rng.uniform() < 0.5
    ae = rng.normal(size=(1, n)) if eq else None
    be = rng.normal(size=1) if eq else None
    return rng.normal(size=n), a, b, ae, be


def _check_ray(out, c, a, ae):
    d = np.asarray(out.direction, dtype=float)
    assert d.min() >= -1e-9 and c @ d < 0
    assert (a @ d).max() <= 1e-9
    if ae is not None:
        assert np.abs(ae @ d).max() <= 1e-9


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_float_matches_exact_and_highs(seed):
    c, a, b, ae, be = _random_lp(seed)
    out = linprog_bland(c, a, b, ae, be)
    exact = linprog_bland(c, a, b, ae, be, exact=True)
    assert out.status == exact.status
    if out.status == "optimal":
        x = out.x
        assert x.min() >= 0 and (a @ x - b).max() <= 1e-8
        if ae is not None:
            assert np.abs(ae @ x - be).max() <= 1e-8
        assert out.objective == pytest.approx(float(exact.objective), abs=1e-8)
        ref = linprog(c, A_ub=a, b_ub=b, A_eq=ae, b_eq=be, bounds=(0, None), method="highs")
        assert ref.status == 0 and out.objective == pytest.approx(ref.fun, abs=1e-7)
    elif out.status == "unbounded":
        _check_ray(out, c, a, ae)


def test_exact_mode_returns_fractions():
    out = linprog_bland([-1, -1], [[1, 2], [3, 1]], [4, 6], exact=True)
    assert out.status == "optimal"
    assert out.objective == Fraction(-14, 5)
    assert list(out.x) == [Fraction(8, 5), Fraction(6, 5)]


def test_status_fixtures():
    assert linprog_bland([1, 1], [[1, 1]], [-1]).status == "infeasible"
    out = linprog_bland([-1, 0], [[0, 1]], [1])
    assert out.status == "unbounded"
    _check_ray(out, np.array([-1, 0]), np.array([[0, 1]]), None)
    assert linprog_bland([1, 2], A_eq=[[1, 1]], b_eq=[1]).objective == pytest.approx(1.0)
    assert linprog_bland([-1], None, None).status == "unbounded"
    assert linprog_bland([2], None, None).status == "optimal"


def test_degenerate_cycling_example_terminates():
    # Beale's example cycles under the textbook largest-coefficient rule.
    c = [-0.75, 150, -0.02, 6]
    a = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
    b = [0, 0, 1]
    for exact in (False, True):
        out = linprog_bland(c, a, b, exact=exact)
        assert out.status == "optimal"
        assert float(out.objective) == pytest.approx(-0.05)
    assert linprog_bland(c, a, b, perturb=False).objective == pytest.approx(-0.05)


def test_homogeneous_cone_lp():
    # {x >= 0 : G x >= 0, sum x = 1} for a G with a one-dimensional feasible ray
    g = np.array([[1.0, -1.0], [-1.0, 1.0]])
    out = linprog_bland([1, 0], A_ub=-g, b_ub=[0, 0], A_eq=[[1, 1]], b_eq=[1])
    assert out.x == pytest.approx([0.5, 0.5])


def test_iteration_cap_raises():
    c, a, b, ae, be = _random_lp(11)
    out = linprog_bland(c, a, b, ae, be)
    if out.iterations == 0:
        pytest.skip("instance solved without pivots")
    with pytest.raises(SolverFailure):
        linprog_bland(c, a, b, ae, be, cap=0)
