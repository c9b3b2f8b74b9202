"""Super right/left commutants of a positive matrix via linear programming.

Right side [K>: A >= 0 with AK >= KA. Left side <K]: A >= 0 with AK <= KA.
With A flattened row-major, vec(AK - KA) = (I (x) K^T - K (x) I) vec(A), so both
sides are polyhedral cones and every question here is a small LP.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import nnls

from .errors import SolverFailure
from .graph import relation_digraph
from .lattice import DEFAULT_TOL, Tolerances, as_array, inf_norm, is_invariant_ideal
from .lp import linprog_bland
from .perron import IrreducibilityCertificate, certificate_from_digraph


class Side(str, Enum):
    RIGHT = "right"
    LEFT = "left"


def commutator_operator(K, side: Side) -> np.ndarray:
    """Matrix G with G vec(A) = vec(AK - KA) (right) or vec(KA - AK) (left)."""
    k = as_array(K)
    n = k.shape[0]
    eye = np.eye(n)
    g = np.kron(eye, k.T) - np.kron(k, eye)
    return g if Side(side) is Side.RIGHT else -g


def side_violation(A, K, side: Side) -> float:
    """Largest amount by which A misses the side inequality (0 if it holds)."""
    a, k = as_array(A), as_array(K)
    c = a @ k - k @ a
    if Side(side) is Side.LEFT:
        c = -c
    return float(max(0.0, -c.min()))


def _side_ok(A, K, side, tol):
    scale = max(inf_norm(A) * inf_norm(K), 1e-300)
    return as_array(A).min() >= -tol.lp_eps and side_violation(A, K, side) <= tol.lp_eps * scale


def _unit(k: np.ndarray) -> np.ndarray:
    """K scaled to unit norm; both cones are invariant under positive scaling of K."""
    norm = inf_norm(k)
    return k / norm if norm > 0 else k


def _clean(x: np.ndarray, n: int, tol: Tolerances) -> np.ndarray:
    a = np.array(x, dtype=float).reshape(n, n)
    a[a <= 1e-3 * tol.lp_eps * max(a.max(), 1.0)] = 0.0
    return a


@dataclass
class Feasibility:
    feasible: bool
    witness: np.ndarray | None = None


def semi_commutant_feasible(K, side: Side, i: int, j: int, tol: Tolerances = DEFAULT_TOL,
                            exact: bool = False) -> Feasibility:
    """Is there A on the given side with A_ij = 1 (0-based i, j)?"""
    k = as_array(K)
    n = k.shape[0]
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError(f"entry ({i}, {j}) outside a {n}x{n} matrix")
    if i == j:
        return Feasibility(True, np.eye(n))
    k = _unit(k)
    g = commutator_operator(k, side)
    pin = np.zeros((1, n * n))
    pin[0, i * n + j] = 1.0
    out = linprog_bland(np.ones(n * n), A_ub=-g, b_ub=np.zeros(n * n),
                        A_eq=pin, b_eq=[1.0], exact=exact)
    if out.status == "infeasible":
        return Feasibility(False)
    if out.status != "optimal":
        raise SolverFailure("unexpected LP status", status=out.status, entry=(i + 1, j + 1))
    a = _clean(np.array(out.x, dtype=float), n, tol)
    if not (_side_ok(a, k, side, tol) and a[i, j] > tol.lp_eps):
        raise SolverFailure("LP witness fails verification", entry=(i + 1, j + 1))
    return Feasibility(True, a)


@dataclass
class CommutantRelation:
    side: Side
    edges: np.ndarray  # edges[i, j]: some A on this side has A_ij > 0 (edge j -> i)
    witnesses: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "side": self.side.value,
            "edges": self.edges.astype(int).tolist(),
            "witnesses": {f"{i + 1},{j + 1}": w for (i, j), w in sorted(self.witnesses.items())},
        }


def super_commutant_relation(K, side: Side, tol: Tolerances = DEFAULT_TOL,
                             exact: bool = False) -> CommutantRelation:
    """Entrywise reachability of the side cone. A witness found for one entry also
    certifies every entry in its support, which saves most of the n^2 LPs."""
    k = as_array(K)
    side = Side(side)
    n = k.shape[0]
    edges = np.zeros((n, n), dtype=bool)
    decided = np.zeros((n, n), dtype=bool)
    witnesses = {}
    for i in range(n):
        for j in range(n):
            if decided[i, j]:
                continue
            try:
                res = semi_commutant_feasible(k, side, i, j, tol, exact=exact)
            except SolverFailure as exc:
                exc.diagnostics.setdefault("entry", (i + 1, j + 1))
                raise
            decided[i, j] = True
            if not res.feasible:
                continue
            w = res.witness
            witnesses[(i, j)] = w
            for p, q in zip(*np.nonzero(w > tol.lp_eps)):
                if not decided[p, q]:
                    decided[p, q] = True
                    witnesses[(int(p), int(q))] = w / w[p, q]
                edges[p, q] = True
    if not edges.diagonal().all():
        raise SolverFailure("relation is not reflexive")
    closure = (edges.astype(int) @ edges.astype(int)) > 0
    if np.any(closure & ~edges):
        p, q = np.argwhere(closure & ~edges)[0]
        raise SolverFailure("relation is not transitive", entry=(int(p) + 1, int(q) + 1))
    return CommutantRelation(side, edges, witnesses)


def is_super_commutant_irreducible(K, side: Side, tol: Tolerances = DEFAULT_TOL,
                                   relation: CommutantRelation | None = None) -> IrreducibilityCertificate:
    k = as_array(K)
    rel = relation if relation is not None else super_commutant_relation(k, side, tol)
    cert = certificate_from_digraph(k.shape[0], relation_digraph(rel.edges))
    if not cert.irreducible:
        members = [np.eye(k.shape[0]), k] + list(rel.witnesses.values())
        for m in members:
            # K itself need not lie on the side cone only when it fails the inequality.
            if not is_invariant_ideal(m, cert.witness, Tolerances(zero=tol.lp_eps * max(1.0, inf_norm(m)))):
                raise SolverFailure("witness ideal is not invariant under a cone member")
    return cert


def _max_commutator_mass(k, side, tol, exact=False):
    n = k.shape[0]
    norm = inf_norm(k)
    if norm == 0:
        return 0.0
    g = commutator_operator(k / norm, side)
    obj = -g.sum(axis=0)
    out = linprog_bland(obj, A_ub=-g, b_ub=np.zeros(n * n),
                        A_eq=np.ones((1, n * n)), b_eq=[1.0], exact=exact)
    if out.status != "optimal":
        raise SolverFailure("gap LP did not reach an optimum", status=out.status, side=Side(side).value)
    return max(0.0, -float(out.objective)) * norm


def commutant_equality_gap(K, tol: Tolerances = DEFAULT_TOL, exact: bool = False):
    """(gap_right, gap_left): the largest total commutator mass sum(AK - KA) over
    normalized A in the right cone, and likewise sum(KA - AK) on the left.
    Zero gaps mean both cones lie inside the commutant of K."""
    k = as_array(K)
    return (_max_commutator_mass(k, Side.RIGHT, tol, exact),
            _max_commutator_mass(k, Side.LEFT, tol, exact))


@dataclass
class SampleSet:
    matrices: list
    degenerate: bool = False


def _in_structural_cone(a, structural) -> bool:
    basis = np.column_stack([s.reshape(-1) for s in structural])
    _, resid = nnls(basis, a.reshape(-1))
    return resid <= 1e-9 * max(1.0, np.linalg.norm(a))


def sample_semi_commuting(K, side: Side, seed: int, count: int,
                          tol: Tolerances = DEFAULT_TOL, vertices: int | None = None) -> SampleSet:
    """Deterministic samples from the side cone: I and K first, then LP vertices
    of {A in cone, sum A = 1} for random nonnegative objectives, then random
    convex combinations of everything found."""
    if count < 1:
        raise ValueError("count must be at least 1")
    k = as_array(K)
    side = Side(side)
    n = k.shape[0]
    rng = np.random.default_rng(seed)
    structural = [np.eye(n)]
    if _side_ok(k, k, side, tol) and k.max() > 0:
        structural.append(k.copy())
    g = commutator_operator(_unit(k), side)
    n_vert = vertices if vertices is not None else min(count, n + 2)
    found = []
    for _ in range(n_vert):
        c = rng.uniform(0.0, 1.0, n * n)
        out = linprog_bland(-c, A_ub=-g, b_ub=np.zeros(n * n), A_eq=np.ones((1, n * n)), b_eq=[1.0])
        if out.status != "optimal":
            raise SolverFailure("sampling LP did not reach an optimum", status=out.status)
        a = _clean(out.x, n, tol)
        if not _side_ok(a, k, side, tol):
            raise SolverFailure("sampled vertex fails the side inequality")
        if not any(np.array_equal(a, f) for f in found):
            found.append(a)
    if all(_in_structural_cone(a, structural) for a in found):
        return SampleSet([s.copy() for s in structural], degenerate=True)
    members = structural + found
    out = [m.copy() for m in members[:count]]
    while len(out) < count:
        size = int(rng.integers(2, len(members) + 1))
        pick = rng.choice(len(members), size=size, replace=False)
        weights = rng.dirichlet(np.ones(size))
        a = sum(w * members[p] / max(members[p].sum(), 1e-300) for w, p in zip(weights, pick))
        out.append(a)
    for a in out:
        if not _side_ok(a, k, side, tol):
            raise SolverFailure("sample fails the side inequality")
    return SampleSet(out)
