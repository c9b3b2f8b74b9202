"""Positive operators on R^n with the coordinatewise order.

Closed ideals of R^n are exactly the coordinate subspaces span{e_i : i in S},
so an ideal is stored as its support set. Indices are 0-based internally and
1-based in every serialized form.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from typing import Iterable

import numpy as np

from .errors import MatrixFormatError

TOL_ENV_VAR = "PF_LATTICE_TOL"


@dataclass(frozen=True)
class Tolerances:
    zero: float = 1e-9
    peripheral_band: float = 1e-6
    cluster: float = 1e-8
    lp_eps: float = 1e-9

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"tolerance {f.name} must be strictly positive")
        if not self.zero < 1:
            raise ValueError("tolerance zero must be < 1")

    @classmethod
    def from_env(cls, environ=None) -> "Tolerances":
        """Read overrides from ``PF_LATTICE_TOL``.

        Accepts a bare float (sets ``zero``) or ``name=value`` pairs separated by
        commas, e.g. ``zero=1e-10,lp_eps=1e-8``.
        """
        environ = os.environ if environ is None else environ
        raw = environ.get(TOL_ENV_VAR, "").strip()
        if not raw:
            return cls()
        return cls.parse(raw)

    @classmethod
    def parse(cls, text: str, base: "Tolerances | None" = None) -> "Tolerances":
        base = cls() if base is None else base
        text = text.strip()
        if "=" not in text:
            return replace(base, zero=float(text))
        names = {f.name for f in fields(cls)}
        updates = {}
        for item in text.split(","):
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in names:
                raise ValueError(f"unknown tolerance {key!r}")
            updates[key] = float(value)
        return replace(base, **updates)


DEFAULT_TOL = Tolerances()


class PosMatrix:
    """Immutable dense n x n entrywise nonnegative matrix, n >= 2.

    Entries in (-tol.zero, 0) are clamped to 0; anything more negative is rejected.
    """

    __slots__ = ("_a",)

    def __init__(self, entries, tol: Tolerances = DEFAULT_TOL):
        if isinstance(entries, PosMatrix):
            self._a = entries._a
            return
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise MatrixFormatError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 2:
            raise MatrixFormatError("dimension must be at least 2")
        if not np.all(np.isfinite(a)):
            raise MatrixFormatError("entries must be finite")
        low = a.min()
        if low <= -tol.zero:
            i, j = np.unravel_index(np.argmin(a), a.shape)
            raise MatrixFormatError(
                f"negative entry {low!r} at ({i + 1},{j + 1})", index=(int(i) + 1, int(j) + 1)
            )
        a[a < 0] = 0.0
        a.flags.writeable = False
        self._a = a

    @property
    def entries(self) -> np.ndarray:
        return self._a

    @property
    def n(self) -> int:
        return self._a.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._a
        return self._a.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, PosMatrix):
            return NotImplemented
        return np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash(self._a.tobytes())

    def __repr__(self):
        return f"PosMatrix({self._a.tolist()!r})"


def as_array(A) -> np.ndarray:
    """Plain float ndarray view of a PosMatrix or array-like."""
    if isinstance(A, PosMatrix):
        return A.entries
    return np.asarray(A, dtype=float)


def inf_norm(A) -> float:
    a = np.asarray(as_array(A))
    if a.ndim == 1:
        return float(np.max(np.abs(a))) if a.size else 0.0
    return float(np.max(np.sum(np.abs(a), axis=1)))


@dataclass(frozen=True)
class CoordinateIdeal:
    """The ideal span{e_i : i in support} of R^n (0-based support)."""

    n: int
    support: frozenset

    def __post_init__(self):
        s = frozenset(int(i) for i in self.support)
        if any(i < 0 or i >= self.n for i in s):
            raise ValueError(f"support {sorted(s)} outside 0..{self.n - 1}")
        object.__setattr__(self, "support", s)

    @classmethod
    def of(cls, n: int, support: Iterable[int]) -> "CoordinateIdeal":
        return cls(n, frozenset(support))

    @classmethod
    def from_one_based(cls, n: int, support: Iterable[int]) -> "CoordinateIdeal":
        return cls(n, frozenset(int(i) - 1 for i in support))

    @property
    def is_trivial(self) -> bool:
        return len(self.support) in (0, self.n)

    def one_based(self) -> list[int]:
        return sorted(i + 1 for i in self.support)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[list(self.support)] = True
        return m

    def __len__(self):
        return len(self.support)

    def __le__(self, other):
        return self.support <= other.support

    def __lt__(self, other):
        return self.support < other.support


def support_of(v, tol: Tolerances = DEFAULT_TOL) -> frozenset:
    """Indices with |v_i| > tol.zero. A 2-d input is read as a set of column vectors
    and the union of their supports (the ideal they generate) is returned."""
    a = np.abs(np.asarray(v, dtype=float))
    if a.ndim == 2:
        a = a.max(axis=1) if a.size else np.zeros(a.shape[0])
    return frozenset(int(i) for i in np.flatnonzero(a > tol.zero))


def is_invariant_ideal(A, S, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff A maps the coordinate ideal S into itself, i.e. A_ij <= tol.zero
    for every i outside S and j inside S."""
    a = as_array(A)
    if isinstance(S, CoordinateIdeal):
        mask = S.mask()
    else:
        mask = np.zeros(a.shape[0], dtype=bool)
        mask[list(S)] = True
    block = a[np.ix_(~mask, mask)]
    return bool(block.size == 0 or np.abs(block).max() <= tol.zero)


def quasi_interior_violation(v, tol: Tolerances = DEFAULT_TOL) -> int | None:
    """0-based index of the first entry <= tol.zero, or None if v is strictly positive."""
    a = np.asarray(v, dtype=float)
    bad = np.flatnonzero(a <= tol.zero)
    return int(bad[0]) if bad.size else None


def is_quasi_interior(v, tol: Tolerances = DEFAULT_TOL) -> bool:
    return quasi_interior_violation(v, tol) is None
