import itertools
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pf_lattice.lattice import DEFAULT_TOL, CoordinateIdeal, is_invariant_ideal

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
SCHEMA = ROOT / "schema" / "report.json"


@pytest.fixture
def data_dir():
    return DATA


def invariant_subsets(a, tol=DEFAULT_TOL):
    """Every nontrivial coordinate set left invariant by a, by enumerating all 2^n subsets."""
    n = a.shape[0]
    found = []
    for size in range(1, n):
        for sub in itertools.combinations(range(n), size):
            if is_invariant_ideal(a, CoordinateIdeal.of(n, sub), tol):
                found.append(frozenset(sub))
    return found


def sparse_nonneg(n, density=0.5):
    """Strategy: n x n nonnegative matrices with a random zero pattern."""
    vals = arrays(np.float64, (n, n), elements=st.floats(0.1, 3.0))
    mask = arrays(np.bool_, (n, n), elements=st.booleans().map(lambda b: b))
    return st.tuples(vals, mask).map(lambda vm: vm[0] * vm[1])
