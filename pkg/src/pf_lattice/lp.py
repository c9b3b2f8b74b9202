"""Two-phase primal simplex for small dense LPs.

Solves  min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
Rows of the form a.x <= b with b >= 0 start with their slack basic, so only the
remaining rows need artificial variables.

Floating point runs a revised simplex: basic values and reduced costs are always
recomputed from the original data through the basis inverse, which is updated
by rank-one steps and rebuilt from a fresh LU factorization every REFACTOR_EVERY
pivots and before optimality or unboundedness is declared. The cone LPs used by this package are homogeneous and hence
massively degenerate; the first pass therefore relaxes the zero right-hand sides
by tiny deterministic amounts and prices by most negative reduced cost, then
re-solves the final basis against the original data. If that basis is not
feasible for the original problem, or the pass stalls, the problem is solved
again without relaxation using Bland's rule. ``exact=True`` runs a tableau
simplex with Bland's rule in ``fractions.Fraction`` arithmetic (small problems).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg
from scipy.linalg.blas import dger as _ger
from scipy.linalg.lapack import dgetri as _getri

from .errors import SolverFailure

ITERATION_CAP = 10_000
PIVOT_RTOL = 1e-7  # smallest usable pivot relative to the entering column
DUAL_RTOL = 1e-9  # reduced-cost tolerance relative to the cost scale
TIE_RTOL = 1e-9
TINY_RTOL = 1e-11  # direction entries below this count as zero
PERTURB = 1e-7
FEAS_RTOL = 1e-9
HARRIS_RTOL = 1e-11  # feasibility slack allowed inside the ratio test
REFACTOR_EVERY = 50  # pivots between fresh LU factorizations


@dataclass
class LPOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: np.ndarray | None = None
    objective: float | None = None
    direction: np.ndarray | None = None
    iterations: int = 0

    @property
    def feasible(self) -> bool:
        return self.status in ("optimal", "unbounded")


@dataclass
class _Standard:
    c: np.ndarray  # costs of the structural variables
    rows: np.ndarray  # m x (width + artificials), rhs made nonnegative
    b: np.ndarray
    basis: list
    width: int  # structural + slack columns
    nvar: int
    relaxable: np.ndarray  # rows whose slack starts basic (b >= 0 inequality rows)


def _as(values, exact):
    a = np.array(values, dtype=float)
    if not exact:
        return a
    out = np.empty(a.shape, dtype=object)
    flat = out.reshape(-1)
    for k, v in enumerate(a.reshape(-1)):
        flat[k] = Fraction(v)
    return out


def _standard_form(c, A_ub, b_ub, A_eq, b_eq, exact) -> _Standard | None:
    c = _as(c, exact)
    nvar = c.shape[0]
    blocks, rhs, kinds = [], [], []
    if A_ub is not None and len(A_ub):
        blocks.append(_as(A_ub, exact).reshape(-1, nvar))
        rhs.append(_as(b_ub, exact).reshape(-1))
        kinds += ["ub"] * blocks[-1].shape[0]
    if A_eq is not None and len(A_eq):
        blocks.append(_as(A_eq, exact).reshape(-1, nvar))
        rhs.append(_as(b_eq, exact).reshape(-1))
        kinds += ["eq"] * blocks[-1].shape[0]
    if not blocks:
        return None
    a = np.vstack(blocks)
    b = np.concatenate(rhs)
    m = a.shape[0]
    n_slack = kinds.count("ub")
    one = _as([1.0], exact)[0]
    zero = one * 0
    width = nvar + n_slack

    neg = np.array([v < 0 for v in b])
    slack_of = {}
    for i, kind in enumerate(kinds):
        if kind == "ub":
            slack_of[i] = nvar + len(slack_of)
    art_rows = [i for i in range(m) if i not in slack_of or neg[i]]
    rows = np.empty((m, width + len(art_rows)), dtype=a.dtype)
    rows[:, :] = zero
    rows[:, :nvar] = a
    for i, col in slack_of.items():
        rows[i, col] = one
    rows[neg, :width] = -rows[neg, :width]
    b = b.copy()
    b[neg] = -b[neg]
    basis = [slack_of.get(i) for i in range(m)]
    for k, i in enumerate(art_rows):
        rows[i, width + k] = one
        basis[i] = width + k
    relaxable = np.array([i in slack_of and not neg[i] for i in range(m)])
    return _Standard(c, rows, b, basis, width, nvar, relaxable)


def _no_constraints(c):
    c = np.asarray([float(v) for v in c])
    if np.any(c < 0):
        ray = np.zeros(c.size)
        ray[int(np.argmin(c))] = 1.0
        return LPOutcome("unbounded", np.zeros(c.size), None, ray)
    return LPOutcome("optimal", np.zeros(c.size), 0.0)


def linprog_bland(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, *,
                  exact=False, cap=ITERATION_CAP, perturb=True) -> LPOutcome:
    std = _standard_form(c, A_ub, b_ub, A_eq, b_eq, exact)
    if std is None:
        return _no_constraints(c)
    if exact:
        return _solve_exact(std, cap)
    if perturb and std.relaxable.any():
        scale = PERTURB * max(1.0, float(np.abs(std.b).max()))
        noise = np.random.default_rng(len(std.b)).uniform(0.5, 1.0, len(std.b))
        shift = np.where(std.relaxable, scale * noise, 0.0)
        try:
            out = _solve_float(std, cap, shift, bland=False)
        except SolverFailure:
            out = None
        if out is not None:
            return out
    return _solve_float(std, cap, None, bland=True)


# ------------------------------------------------------------ floating point

class _Drift(Exception):
    """Updated basis inverse has drifted: a fresh factorization found the basis infeasible."""


class _Revised:
    def __init__(self, a, b, basis, cap, bland, refactor_every=REFACTOR_EVERY):
        self.a = a
        self.b = b
        self.basis = list(basis)
        self.cap = cap
        self.bland = bland
        self.refactor_every = refactor_every
        self.iterations = 0
        self.lu = None
        self.inverse = None
        self.updates = 0

    def factor(self):
        self.lu = scipy.linalg.lu_factor(self.a[:, self.basis], check_finite=False)
        inverse, info = _getri(*self.lu)
        if info != 0:
            raise SolverFailure("singular basis", info=int(info))
        self.inverse = np.asfortranarray(inverse)
        self.updates = 0

    def solve(self, rhs, trans=0):
        """B^-1 rhs (trans=0) or B^-T rhs (trans=1) for the current basis B."""
        if self.updates == 0:
            return scipy.linalg.lu_solve(self.lu, rhs, trans=trans, check_finite=False)
        return self.inverse @ rhs if trans == 0 else rhs @ self.inverse

    def pivot(self, leave, enter, col):
        """Replace basic row ``leave`` by column ``enter`` (col = B^-1 a_enter)."""
        self.basis[leave] = enter
        self.iterations += 1
        inv = self.inverse
        inv[leave] /= col[leave]
        step = col.copy()
        step[leave] = 0.0
        self.inverse = _ger(-1.0, step, inv[leave].copy(), a=inv, overwrite_a=1)
        self.updates += 1
        if self.updates >= self.refactor_every:
            self.factor()

    def run(self, cost, limit):
        """Minimize cost over columns [0, limit). Returns None at an optimum, or
        the entering column when the problem is unbounded along it."""
        a = self.a
        dtol = DUAL_RTOL * max(1.0, float(np.abs(cost).max()))
        floor = FEAS_RTOL * max(1.0, float(np.abs(self.b).max()))
        self.factor()
        fresh = True
        while True:
            xb = self.solve(self.b)
            if fresh and self.refactor_every > 1 and xb.size and xb.min() < -floor:
                raise _Drift()
            y = self.solve(cost[self.basis], trans=1)
            d = cost[:limit] - y @ a[:, :limit]
            basic = np.asarray(self.basis)
            d[basic[basic < limit]] = 0.0
            cand = np.flatnonzero(d < -dtol)
            if cand.size == 0:
                if fresh:
                    return None
                # confirm optimality on a fresh factorization
                self.factor()
                fresh = True
                continue
            if self.iterations >= self.cap:
                raise SolverFailure("simplex iteration cap exceeded", iterations=self.iterations)
            enter = int(cand[0]) if self.bland else int(cand[np.argmin(d[cand])])
            col = self.solve(a[:, enter])
            leave = self._ratio_test(xb, col)
            if leave is None:
                if fresh:
                    return enter
                self.factor()
                fresh = True
                continue
            self.pivot(leave, enter, col)
            fresh = self.updates == 0

    def _ratio_test(self, xb, col):
        """Harris two-pass test: bound the step by every positive entry of the
        direction with a small feasibility slack, then take the largest pivot
        (Bland mode: the lowest basic index) among rows within that bound."""
        big = float(np.abs(col).max())
        rows = np.flatnonzero(col > TINY_RTOL * max(1.0, big))
        if rows.size == 0:
            return None
        slack = HARRIS_RTOL * max(1.0, float(np.abs(self.b).max()))
        xr = np.maximum(xb[rows], 0.0)
        bound = ((xr + slack) / col[rows]).min()
        within = rows[xr / col[rows] <= bound]
        usable = within[col[within] > PIVOT_RTOL * max(1.0, big)]
        pool = usable if usable.size else within
        if self.bland:
            ratios = np.maximum(xb[pool], 0.0) / col[pool]
            low = ratios.min()
            tied = pool[ratios <= low + TIE_RTOL * (1.0 + low)]
            return int(tied[np.argmin(np.asarray(self.basis)[tied])])
        return int(pool[np.argmax(col[pool])])

    def drop_row(self, i):
        keep = [r for r in range(self.a.shape[0]) if r != i]
        self.a = self.a[keep]
        self.b = self.b[keep]
        del self.basis[i]


def _solve_float(std: _Standard, cap, shift, bland) -> LPOutcome | None:
    """One two-phase run. With ``shift`` the relaxable rows are loosened by it
    while pivoting; returns None if the final basis is infeasible for the
    original right-hand side. Badly conditioned problems whose updated inverse
    drifts are re-solved with a fresh factorization at every pivot."""
    try:
        return _two_phase(std, cap, shift, bland, REFACTOR_EVERY)
    except _Drift:
        return _two_phase(std, cap, shift, bland, 1)


def _two_phase(std: _Standard, cap, shift, bland, refactor_every) -> LPOutcome | None:
    a = np.asarray(std.rows, dtype=float)
    b_true = np.asarray(std.b, dtype=float)
    b_work = b_true + shift if shift is not None else b_true.copy()
    width, total = std.width, a.shape[1]
    sim = _Revised(a, b_work, std.basis, cap, bland, refactor_every)
    if total > width:
        sim.run(np.r_[np.zeros(width), np.ones(total - width)], total)
        sim.factor()
        xb = sim.solve(sim.b)
        infeas = float(sum(v for v, j in zip(xb, sim.basis) if j >= width))
        if infeas > FEAS_RTOL * max(1.0, float(np.abs(b_true).max())):
            return LPOutcome("infeasible", iterations=sim.iterations)
        # Pivot remaining (zero-valued) artificials out; drop rows that are redundant.
        i = 0
        while i < len(sim.basis):
            if sim.basis[i] < width:
                i += 1
                continue
            sim.factor()
            e = np.zeros(len(sim.basis))
            e[i] = 1.0
            r = sim.solve(e, trans=1) @ sim.a[:, :width]
            r[[j for j in sim.basis if j < width]] = 0.0
            j = int(np.argmax(np.abs(r)))
            if abs(r[j]) > 1e-9:
                sim.basis[i] = j
                i += 1
            else:
                sim.drop_row(i)
                b_true = np.delete(b_true, i)

    cost = np.zeros(total)
    cost[:std.nvar] = np.asarray(std.c, dtype=float)
    enter = sim.run(cost, width)

    sim.b = b_true
    floor = FEAS_RTOL * max(1.0, float(np.abs(b_true).max()))
    if enter is None:
        _dual_repair(sim, cost, width, 1e-3 * floor)
    sim.factor()
    xb = sim.solve(b_true)
    if xb.size and xb.min() < -floor:
        if shift is not None:
            return None
        raise SolverFailure("final basis is not primal feasible", most_negative=float(xb.min()))
    xb[xb < 0] = 0.0
    x = np.zeros(total)
    x[sim.basis] = xb
    xs = x[:std.nvar]
    if enter is not None:
        col = sim.solve(sim.a[:, enter])
        ray = np.zeros(total)
        ray[enter] = 1.0
        ray[sim.basis] = -col
        return LPOutcome("unbounded", xs, None, ray[:std.nvar], sim.iterations)
    return LPOutcome("optimal", xs, float(cost[:std.nvar] @ xs), None, sim.iterations)


def _dual_repair(sim: _Revised, cost, width, floor):
    """Dual simplex steps from an optimal basis whose basic values went slightly
    negative (typically after removing the rhs relaxation). Stops when the basis
    is primal feasible, when no pivot is available, or at the iteration cap."""
    a = sim.a
    while sim.iterations < sim.cap:
        sim.factor()
        xb = sim.solve(sim.b)
        r = int(np.argmin(xb)) if xb.size else 0
        if not xb.size or xb[r] >= -floor:
            return
        e = np.zeros(len(sim.basis))
        e[r] = 1.0
        row = sim.solve(e, trans=1) @ a[:, :width]
        y = sim.solve(cost[sim.basis], trans=1)
        d = np.maximum(cost[:width] - y @ a[:, :width], 0.0)
        row[[j for j in sim.basis if j < width]] = 0.0
        cand = np.flatnonzero(row < -PIVOT_RTOL * max(1.0, float(np.abs(row).max())))
        if cand.size == 0:
            return
        ratios = d[cand] / -row[cand]
        low = ratios.min()
        tied = cand[ratios <= low + TIE_RTOL * (1.0 + low)]
        sim.basis[r] = int(tied[np.argmin(row[tied])])
        sim.iterations += 1


# ------------------------------------------------------------------- exact

class _Tableau:
    def __init__(self, rows, rhs, basis, cap):
        m, n = rows.shape
        self.t = np.empty((m + 1, n + 1), dtype=object)
        self.t[:m, :n] = rows
        self.t[:m, n] = rhs
        self.t[m, :] = Fraction(0)
        self.basis = list(basis)
        self.cap = cap
        self.iterations = 0

    @property
    def m(self):
        return self.t.shape[0] - 1

    def set_costs(self, cost):
        m, t = self.m, self.t
        cb = np.array([cost[b] for b in self.basis], dtype=object)
        t[m, :-1] = cost - cb @ t[:m, :-1]
        t[m, -1] = -(cb @ t[:m, -1])

    def pivot(self, r, c):
        t = self.t
        t[r, :] = t[r, :] / t[r, c]
        col = t[:, c].copy()
        col[r] = 0
        t -= np.outer(col, t[r, :])
        self.basis[r] = c
        self.iterations += 1

    def run(self, limit):
        """Bland's rule: lowest-index entering column, lowest-index leaving variable."""
        m = self.m
        while True:
            t = self.t
            cand = [j for j in range(limit) if t[m, j] < 0]
            if not cand:
                return None
            if self.iterations >= self.cap:
                raise SolverFailure("simplex iteration cap exceeded", iterations=self.iterations)
            enter = cand[0]
            rows = [i for i in range(m) if t[i, enter] > 0]
            if not rows:
                return enter
            low = min(t[i, -1] / t[i, enter] for i in rows)
            leave = min((i for i in rows if t[i, -1] / t[i, enter] == low), key=lambda i: self.basis[i])
            self.pivot(leave, enter)


def _solve_exact(std: _Standard, cap) -> LPOutcome:
    width, total = std.width, std.rows.shape[1]
    zero, one = Fraction(0), Fraction(1)
    tab = _Tableau(std.rows, std.b, std.basis, cap)
    if total > width:
        tab.set_costs(np.array([zero] * width + [one] * (total - width), dtype=object))
        tab.run(total)
        if -tab.t[-1, -1] > 0:
            return LPOutcome("infeasible", iterations=tab.iterations)
        keep = []
        for i in range(tab.m):
            if tab.basis[i] >= width:
                j = next((j for j in range(width) if tab.t[i, j] != 0), None)
                if j is None:
                    continue
                tab.pivot(i, j)
            keep.append(i)
        cols = list(range(width)) + [total]
        t = tab.t
        tab.t = np.vstack([t[keep][:, cols], t[-1:, cols]])
        tab.basis = [tab.basis[i] for i in keep]
    cost = np.array([zero] * width, dtype=object)
    cost[:std.nvar] = std.c
    tab.set_costs(cost)
    enter = tab.run(width)
    x = np.array([zero] * width, dtype=object)
    for i, bvar in enumerate(tab.basis):
        x[bvar] = tab.t[i, -1]
    xs = x[:std.nvar]
    if enter is not None:
        ray = np.array([zero] * width, dtype=object)
        ray[enter] = one
        for i, bvar in enumerate(tab.basis):
            ray[bvar] = -tab.t[i, enter]
        return LPOutcome("unbounded", xs, None, ray[:std.nvar], tab.iterations)
    return LPOutcome("optimal", xs, -tab.t[-1, -1], None, tab.iterations)
