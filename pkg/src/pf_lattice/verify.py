"""Randomized property suites: instance generators plus executable versions of the
structure results for positive matrices, with seeded determinism and margins.

Every trial draws its randomness from ``default_rng([seed, crc32(name), trial])``
so any single trial can be replayed without running the rest of the suite.
"""

from __future__ import annotations

import time
import zlib
from dataclasses import dataclass, field

import numpy as np

from .commutant import (
    Side,
    commutant_equality_gap,
    is_super_commutant_irreducible,
    sample_semi_commuting,
    side_violation,
)
from .errors import LatticeError, PreconditionViolation
from .lattice import (
    DEFAULT_TOL,
    CoordinateIdeal,
    PosMatrix,
    Tolerances,
    as_array,
    inf_norm,
    is_invariant_ideal,
)
from .matrix_io import matrix_to_obj
from .perron import (
    common_peripheral_eigenpair,
    commuting_eigenvalue,
    is_ideal_irreducible,
    peripheral_cycle_structure,
    perron_pair,
    strongly_expanding_sum,
)
from .spectral import LimitKind, local_spectral_radius, power_dichotomy, spectral_radius
from .triangularize import commutator_nilpotency, semi_commuting_sign

N_MIN, N_MAX = 2, 64
ORACLE_MAX_N = 12
COMMUTATOR_RTOL = 1e-7
RADIUS_RTOL = 1e-6
LOCAL_RTOL = 1e-9
POWER_TARGET = 1e-6


# ---------------------------------------------------------------- generators

def random_irreducible(n: int, density: float, seed) -> PosMatrix:
    """Random Hamiltonian cycle of weights in (0, 1] plus Bernoulli(density)
    extra entries with weights in (0, 1]."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 <= density <= 1:
        raise ValueError("density must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    a = np.zeros((n, n))
    perm = rng.permutation(n)
    a[perm[np.r_[1:n, 0]], perm] = 1.0 - rng.uniform(size=n)
    extra = (rng.uniform(size=(n, n)) < density) & (a == 0)
    a[extra] = 1.0 - rng.uniform(size=int(extra.sum()))
    return PosMatrix(a)


def _split(rng, total: int, parts: int) -> list[int]:
    cuts = np.sort(rng.choice(np.arange(1, total), size=parts - 1, replace=False)) if parts > 1 else []
    edges = [0, *cuts, total]
    return [int(b - a) for a, b in zip(edges, edges[1:])]


def _conjugate(rng, a):
    perm = rng.permutation(a.shape[0])
    return a[np.ix_(perm, perm)]


def block_cyclic(rng, n: int, period: int) -> np.ndarray:
    """Irreducible matrix with `period` cyclic classes, strictly positive blocks
    between consecutive classes, scaled to spectral radius 1."""
    sizes = _split(rng, n, period)
    offs = np.cumsum([0] + sizes)
    a = np.zeros((n, n))
    for k in range(period):
        src = slice(offs[k], offs[k + 1])
        dst = (k + 1) % period
        a[offs[dst]:offs[dst + 1], src] = rng.uniform(0.1, 1.0, (sizes[dst], sizes[k]))
    return a / spectral_radius(a)


def peripheral_test_operator(rng, n: int) -> np.ndarray:
    """Direct sum of block-cyclic components, all with spectral radius 1, in a
    random coordinate order and with a random overall scale. The peripheral part
    is a weighted permutation and the remaining spectrum is strictly smaller."""
    parts = int(rng.integers(1, min(n, 3) + 1))
    a = np.zeros((n, n))
    start = 0
    for size in _split(rng, n, parts):
        period = int(rng.integers(1, min(size, 3) + 1))
        a[start:start + size, start:start + size] = block_cyclic(rng, size, period)
        start += size
    return _conjugate(rng, a) * rng.uniform(0.5, 2.0)


def random_reducible(rng, n: int, density: float = 0.5) -> np.ndarray:
    """Block upper triangular matrix (two or three diagonal blocks) in a random
    coordinate order; the leading block spans a nontrivial invariant ideal."""
    parts = int(rng.integers(2, min(n, 3) + 1))
    sizes = _split(rng, n, parts)
    offs = np.cumsum([0] + sizes)
    a = np.zeros((n, n))
    for k, size in enumerate(sizes):
        blk = slice(offs[k], offs[k + 1])
        if size == 1:
            a[blk, blk] = rng.uniform(0.0, 1.0)
        else:
            a[blk, blk] = np.asarray(random_irreducible(size, density, int(rng.integers(2**63))))
        cols = slice(offs[k + 1], n)
        mask = rng.uniform(size=(size, n - offs[k + 1])) < density
        a[blk, cols] = mask * rng.uniform(0.0, 1.0, mask.shape)
    return _conjugate(rng, a)


def _sub_seed(rng) -> int:
    return int(rng.integers(2**63))


def _partner(rng, T, side, tol, count=4):
    """A nonzero member of the side cone of T that is not one of the first, structural samples."""
    samples = sample_semi_commuting(T, side, _sub_seed(rng), count, tol, vertices=2).matrices
    return samples[-1]


# ---------------------------------------------------------- detectors / checks

@dataclass
class DetectorHit:
    criterion: str  # "a" | "b" | "c" | "d"
    detail: dict
    certificate: CoordinateIdeal | None
    verified: bool

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "detail": self.detail,
            "certificate": None if self.certificate is None else self.certificate.one_based(),
            "verified": self.verified,
        }


def _probe_vectors(n: int, rng):
    probes = [np.eye(n)[j] for j in range(n)] + [np.ones(n)]
    probes += [rng.uniform(0.0, 1.0, n) * (rng.uniform(size=n) < 0.6) for _ in range(3)]
    return [p for p in probes if p.any()]


def _local_deficit(A, bound, probes, tol):
    """First probe (or dual probe) whose exact local radius is below bound*(1 - 1e-6)."""
    for dual in (False, True):
        for x in probes:
            rho = local_spectral_radius(A, x, tol, dual=dual).exact
            if rho < bound * (1 - RADIUS_RTOL):
                return {"x": x.tolist(), "dual": dual, "local_radius": rho, "bound": bound}
    return None


def reducibility_detectors(T, K, tol: Tolerances = DEFAULT_TOL, seed: int = 0) -> list[DetectorHit]:
    """Evaluate the checkable sufficient conditions for T to have a nontrivial
    invariant coordinate ideal, given a compact K >= 0 semi-commuting with T:
    (a) r(K) = 0; (b) a local radius of K (or K^T) below r(K); (c) r(TK) = 0 or a
    local radius of T (or T^T) below r(TK)/r(K); (d) a strictly semi-commuting
    partner of T. Each hit carries the ideal found
    for T and whether it checks out as nontrivial and invariant."""
    t, k = as_array(T), as_array(K)
    if not t.any() or not k.any():
        raise PreconditionViolation("T and K must be nonzero")
    semi_commuting_sign(t, k, tol)
    n = t.shape[0]
    rng = np.random.default_rng(seed)
    probes = _probe_vectors(n, rng)
    raw = []
    rk = spectral_radius(k, tol)
    if rk <= tol.zero * max(1.0, inf_norm(k)):
        raw.append(("a", {"radius_K": rk}))
    else:
        hit = _local_deficit(k, rk, probes, tol)
        if hit is not None:
            raw.append(("b", hit))
        tk = t @ k
        rtk = spectral_radius(tk, tol)
        if rtk <= tol.zero * max(1.0, inf_norm(tk)):
            raw.append(("c", {"radius_TK": rtk}))
        else:
            hit = _local_deficit(t, rtk / rk, probes, tol)
            if hit is not None:
                raw.append(("c", hit))
    gaps = commutant_equality_gap(t, tol)
    if max(gaps) > COMMUTATOR_RTOL:
        raw.append(("d", {"gap_right": gaps[0], "gap_left": gaps[1]}))
    if not raw:
        return []
    cert = is_ideal_irreducible([t], tol)
    ideal = cert.witness
    ok = ideal is not None and not ideal.is_trivial and is_invariant_ideal(t, ideal, tol)
    return [DetectorHit(c, d, ideal, ok) for c, d in raw]


@dataclass
class ComparisonReport:
    radius_a: float
    radius_b: float
    difference: float  # ||A - B||_inf
    margin: float  # r(A) - r(B)
    holds: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def comparison_check(A, B, tol: Tolerances = DEFAULT_TOL) -> ComparisonReport:
    """For irreducible A >= B >= 0: r(B) < r(A) unless B = A."""
    a, b = as_array(A), as_array(B)
    if not is_ideal_irreducible([a], tol).irreducible:
        raise PreconditionViolation("A must be ideal irreducible")
    if b.min() < -tol.zero or (b - a).max() > tol.zero:
        raise PreconditionViolation("need 0 <= B <= A entrywise")
    ra, rb = spectral_radius(a, tol), spectral_radius(b, tol)
    diff = inf_norm(a - b)
    if diff > tol.zero:
        holds = rb < ra
    else:
        holds = abs(ra - rb) <= RADIUS_RTOL * max(ra, 1.0)
    return ComparisonReport(ra, rb, diff, ra - rb, holds)


def _brute_force_irreducible(a, tol) -> bool:
    n = a.shape[0]
    for bits in range(1, 2**n - 1):
        ideal = CoordinateIdeal.of(n, [j for j in range(n) if bits >> j & 1])
        if is_invariant_ideal(a, ideal, tol):
            return False
    return True


# ---------------------------------------------------------------- properties

class Skip(Exception):
    """The generated instance does not meet the property's hypothesis."""


@dataclass
class Outcome:
    ok: bool
    margin: float | None
    note: str = ""


def _bounded_margin(value, bound):
    return float(bound - value)


def _prop_positive_radius(rng, n, tol, mats):
    if rng.uniform() < 0.5:
        k = np.asarray(random_irreducible(n, rng.uniform(0.0, 0.6), _sub_seed(rng)))
    else:
        k = random_reducible(rng, n, rng.uniform(0.2, 0.7))
    mats.update({"K": k})
    if not any(is_super_commutant_irreducible(k, s, tol).irreducible for s in Side):
        raise Skip("both super-commutants are ideal reducible")
    r = spectral_radius(k, tol)
    margin = r - tol.zero * max(1.0, inf_norm(k))
    return Outcome(margin > 0, margin)


def _prop_shared_eigenvector(rng, n, tol, mats):
    u = np.asarray(random_irreducible(n, rng.uniform(0.0, 0.6), _sub_seed(rng)))
    mats["U"] = u
    pair = common_peripheral_eigenpair(u, np.eye(n), tol)
    if pair.x0.min() <= 0 or pair.x0star.min() <= 0:
        return Outcome(False, None, "shared eigenpair is not strictly positive")
    side = Side.RIGHT if rng.uniform() < 0.5 else Side.LEFT
    v = _partner(rng, u, side, tol)
    mats["V"] = v
    gap = inf_norm(u @ v - v @ u)
    margin = _bounded_margin(gap, COMMUTATOR_RTOL * inf_norm(u) * inf_norm(v))
    return Outcome(margin >= 0, margin)


def _prop_local_radius_lower_bound(rng, n, tol, mats):
    t = np.asarray(random_irreducible(n, rng.uniform(0.0, 0.6), _sub_seed(rng)))
    mats["T"] = t
    lam, x0, x0star = perron_pair(t, tol)
    that = t / lam
    x = rng.uniform(0.0, 1.0, n) * (rng.uniform(size=n) < 0.5)
    x[int(rng.integers(n))] = 1.0
    xs = rng.uniform(0.0, 1.0, n) * (rng.uniform(size=n) < 0.5)
    xs[int(rng.integers(n))] = 1.0
    # lambda^k x*(x0) <= ||T^k* x*||_1 ||x0||_inf, and the same with the roles swapped.
    worst = np.inf
    u, w = x.copy(), xs.copy()
    for _ in range(64):
        u, w = that @ u, that.T @ w
        worst = min(worst, np.abs(w).sum() * np.abs(x0).max() / (xs @ x0) - 1.0,
                    np.abs(u).max() * np.abs(x0star).sum() / (x0star @ x) - 1.0)
    local = min(local_spectral_radius(t, x, tol).exact, local_spectral_radius(t, xs, tol, dual=True).exact)
    worst = min(worst + LOCAL_RTOL, local / lam - 1.0 + LOCAL_RTOL)
    # r(T) is an eigenvalue of T^T for every T >= 0, so the eigenvalue at x0 is r(T).
    r = spectral_radius(t, tol)
    worst = min(worst, LOCAL_RTOL - abs(lam - r) / r)
    return Outcome(worst >= 0, float(worst))


def _prop_peripheral_structure(rng, n, tol, mats):
    k = peripheral_test_operator(rng, n)
    mats.update({"K": k})
    if not any(is_super_commutant_irreducible(k, s, tol).irreducible for s in Side):
        return Outcome(False, None, "generator output has reducible super-commutants")
    st = peripheral_cycle_structure(k, tol)
    r = st.radius
    khat = k / r
    X, F = np.column_stack(st.vectors), np.column_stack(st.functionals)
    margins = []
    # (1) disjoint families, biorthogonal, P = sum x_i* (x) x_i
    overlap = max([float(np.minimum(X[:, i], X[:, j]).max()) for i in range(st.rank) for j in range(i)] + [0.0])
    margins.append(STRUCTURE_TOL - overlap)
    margins.append(STRUCTURE_TOL - float(np.abs(F.T @ X - np.eye(st.rank)).max()))
    margins.append(STRUCTURE_TOL - inf_norm(st.projection - X @ F.T))
    # (2) K^(Nm) -> P
    dich = power_dichotomy(k, tol, target=POWER_TARGET)
    if dich.kind is not LimitKind.PROJECTION:
        return Outcome(False, None, "powers did not converge to the projection")
    resid = inf_norm(np.linalg.matrix_power(khat, dich.verified_power) - st.projection)
    margins.append(POWER_TARGET - resid)
    # (3) quasi-interior fixed vector and strictly positive fixed functional
    margins.append(float(min(st.x0.min(), st.x0star.min())))
    # (4) orbits stay bounded above and below; local radius is r(K)
    for _ in range(10):
        x = rng.uniform(0.0, 1.0, n) * (rng.uniform(size=n) < 0.6)
        x[int(rng.integers(n))] = 1.0
        rho = local_spectral_radius(k, x, tol).exact
        margins.append(LOCAL_RTOL - abs(rho - r) / r)
    # (5) semi-commuting partners commute
    gr, gl = commutant_equality_gap(k, tol)
    margins.append(COMMUTATOR_RTOL - max(gr, gl))
    # (6) a sampled partner has a common nonnegative eigenvalue with S^T
    s = _partner(rng, k, Side.RIGHT, tol)
    mats["S"] = s
    ce = commuting_eigenvalue(s, st, k, tol)
    margins.append(float(min(ce.value + tol.zero, ce.x.min() + tol.zero, ce.xstar.min() + tol.zero)))
    worst = float(min(margins))
    return Outcome(worst >= 0, worst)


STRUCTURE_TOL = 1e-7


def _prop_cyclic_permutation(rng, n, tol, mats):
    if rng.uniform() < 0.5:
        k = _conjugate(rng, block_cyclic(rng, n, int(rng.integers(1, min(n, 4) + 1))))
    else:
        k = np.asarray(random_irreducible(n, rng.uniform(0.0, 0.5), _sub_seed(rng)))
    mats["K"] = k
    st = peripheral_cycle_structure(k, tol)
    cycles = st.cycles()
    ok = len(cycles) == 1 and st.period == st.rank
    return Outcome(ok, None, "" if ok else f"cycles {cycles}")


def _prop_partner_commutes(rng, n, tol, mats):
    t = np.asarray(random_irreducible(n, rng.uniform(0.0, 0.6), _sub_seed(rng)))
    mats["T"] = t
    side = Side.RIGHT if rng.uniform() < 0.5 else Side.LEFT
    a = _partner(rng, t, side, tol)
    mats["A"] = a
    if not a.any() or side_violation(a, t, side) > tol.lp_eps * max(1.0, inf_norm(a) * inf_norm(t)):
        return Outcome(False, None, "sampled partner is not on the requested side")
    gap = inf_norm(t @ a - a @ t)
    margin = _bounded_margin(gap, COMMUTATOR_RTOL * inf_norm(t) * inf_norm(a))
    return Outcome(margin >= 0, margin)


def _prop_strict_comparison(rng, n, tol, mats):
    a = np.asarray(random_irreducible(n, rng.uniform(0.0, 0.7), _sub_seed(rng)))
    pos = np.argwhere(a > 0)
    pick = pos[rng.choice(len(pos), size=int(rng.integers(1, len(pos) + 1)), replace=False)]
    b = a.copy()
    for i, j in pick:
        b[i, j] -= a[i, j] * rng.uniform(0.05, 1.0)
    b = np.maximum(b, 0.0)
    mats.update({"A": a, "B": b})
    rep = comparison_check(a, b, tol)
    return Outcome(rep.holds and rep.margin > 0, rep.margin)


def _prop_commutant_eigenpair(rng, n, tol, mats):
    t = np.asarray(random_irreducible(n, rng.uniform(0.0, 0.6), _sub_seed(rng)))
    mats["T"] = t
    k = _partner(rng, t, Side.RIGHT, tol)
    mats["K"] = k
    pair = common_peripheral_eigenpair(t, k, tol)
    rt = spectral_radius(t, tol)
    margins = [pair.lambda_T, rt * (1 + LOCAL_RTOL) - pair.lambda_T,
               float(pair.x0.min()), float(pair.x0star.min())]
    # The eigenvalue at x0 is r(T) since r(T) is an eigenvalue of T.
    margins.append(RADIUS_RTOL - abs(pair.lambda_T - rt) / rt)
    s = _partner(rng, t, Side.LEFT, tol)
    mats["S"] = s
    sx = s @ pair.x0
    lam_s = float(pair.x0star @ sx)
    margins.append(RADIUS_RTOL * max(1.0, inf_norm(s)) - inf_norm(sx - lam_s * pair.x0))
    if s.any():
        margins.append(spectral_radius(s, tol) - tol.zero)
    worst = float(min(margins))
    return Outcome(worst > 0, worst)


def _prop_chain_eigenvector(rng, n, tol, mats):
    t = np.asarray(random_irreducible(n, rng.uniform(0.0, 0.6), _sub_seed(rng)))
    mats["T"] = t
    k = _partner(rng, t, Side.RIGHT, tol)
    mats["K"] = k
    tt = strongly_expanding_sum(t, tol)
    ktilde = tt @ k @ tt
    pair = common_peripheral_eigenpair(t, k, tol)
    s = _partner(rng, ktilde, Side.RIGHT if rng.uniform() < 0.5 else Side.LEFT, tol)
    mats["S"] = s
    sx = s @ pair.x0
    lam = float(pair.x0star @ sx)
    margins = [RADIUS_RTOL * max(1.0, inf_norm(s)) - inf_norm(sx - lam * pair.x0),
               RADIUS_RTOL * max(1.0, inf_norm(s)) - inf_norm(s.T @ pair.x0star - lam * pair.x0star)]
    if s.any():
        margins.append(spectral_radius(s, tol) - tol.zero)
    worst = float(min(margins))
    return Outcome(worst > 0, worst)


def _nilpotent_upper(rng, n):
    return np.triu(rng.uniform(0.0, 1.0, (n, n)) * (rng.uniform(size=(n, n)) < 0.6), 1)


def _prop_super_commutant_reducibility(rng, n, tol, mats):
    kind = int(rng.integers(3))
    if kind == 0:
        k = _nilpotent_upper(rng, n)
        k[0, n - 1] = 1.0
    elif kind == 1:
        # leading block has the smaller radius, so vectors supported there grow slowly
        m = int(rng.integers(1, n))
        k = np.zeros((n, n))
        k[:m, :m] = np.asarray(random_irreducible(m, 0.5, _sub_seed(rng))) if m > 1 else rng.uniform(0, 1)
        k[m:, m:] = np.asarray(random_irreducible(n - m, 0.5, _sub_seed(rng))) if n - m > 1 else rng.uniform(0, 1)
        k[:m, m:] = rng.uniform(0.0, 1.0, (m, n - m))
        ra, rb = spectral_radius(k[:m, :m]), spectral_radius(k[m:, m:])
        k[:m, :m] *= 0.5 * rb / max(ra, 1e-300)
    else:
        k = np.diag(rng.uniform(0.5, 2.0, n))
        k[0, 0] = 2.5
    k = _conjugate(rng, k)
    mats.update({"K": k})
    r = spectral_radius(k, tol)
    triggered = r <= tol.zero * max(1.0, inf_norm(k))
    if not triggered:
        triggered = _local_deficit(k, r, _probe_vectors(n, rng), tol) is not None
    if not triggered:
        triggered = max(commutant_equality_gap(k, tol)) > COMMUTATOR_RTOL
    if not triggered:
        return Outcome(False, None, "generated operator meets none of the criteria")
    for side in Side:
        cert = is_super_commutant_irreducible(k, side, tol)
        if cert.irreducible:
            return Outcome(False, None, f"{side.value} super-commutant reported irreducible")
    return Outcome(True, None)


def _prop_reducibility_detectors(rng, n, tol, mats):
    irreducible = rng.uniform() < 0.5
    if irreducible:
        t = np.asarray(random_irreducible(n, rng.uniform(0.0, 0.6), _sub_seed(rng)))
    else:
        t = random_reducible(rng, n, rng.uniform(0.2, 0.7))
    mats["T"] = t
    side = Side.RIGHT if rng.uniform() < 0.5 else Side.LEFT
    k = _partner(rng, t, side, tol)
    mats["K"] = k
    hits = reducibility_detectors(t, k, tol, seed=_sub_seed(rng))
    if irreducible:
        ok = not hits
        # No quasi-nilpotent partner can exist: every sampled partner has r > 0.
        ok = ok and spectral_radius(k, tol) > tol.zero * max(1.0, inf_norm(k))
        return Outcome(ok, None, "" if ok else "criterion triggered for irreducible T")
    ok = all(h.verified for h in hits)
    return Outcome(ok, None, "" if ok else "triggered criterion without a verified ideal")


def _prop_commutator_nilpotency(rng, n, tol, mats):
    if rng.uniform() < 0.75:
        t = random_reducible(rng, n, rng.uniform(0.2, 0.7))
    else:
        t = _nilpotent_upper(rng, n) + np.diag(rng.uniform(0.0, 1.0, n))
        t = _conjugate(rng, t)
    if not t.any():
        t[0, 0] = 1.0
    mats["T"] = t
    side = Side.RIGHT if rng.uniform() < 0.5 else Side.LEFT
    k = _partner(rng, t, side, tol)
    mats["K"] = k
    cert = commutator_nilpotency(t, k, tol)
    bound = RADIUS_RTOL * max(1.0, inf_norm(cert.commutator))
    margin = _bounded_margin(cert.radius, bound)
    ok = margin >= 0 and cert.index <= n and cert.chain.maximal
    return Outcome(ok, margin, "" if ok else f"index {cert.index}")


def _prop_irreducibility_oracle(rng, n, tol, mats):
    if n > ORACLE_MAX_N:
        raise Skip(f"exhaustive enumeration is limited to n <= {ORACLE_MAX_N}")
    density = rng.uniform(0.05, 0.6)
    a = rng.uniform(0.0, 1.0, (n, n)) * (rng.uniform(size=(n, n)) < density)
    mats["A"] = a
    fast = is_ideal_irreducible([a], tol).irreducible
    slow = _brute_force_irreducible(a, tol)
    return Outcome(fast == slow, None, "" if fast == slow else f"fast={fast} brute={slow}")


@dataclass(frozen=True)
class PropertySpec:
    name: str
    alias: str
    check: object
    summary: str


PROPERTIES = (
    PropertySpec("positive_radius", "turo", _prop_positive_radius,
                 "an irreducible super-commutant forces r(K) > 0"),
    PropertySpec("shared_eigenvector_commutes", "scc", _prop_shared_eigenvector,
                 "a semi-commuting partner of U with a positive two-sided eigenpair commutes"),
    PropertySpec("local_radius_lower_bound", "locaq", _prop_local_radius_lower_bound,
                 "orbits grow at least at the rate of a positive eigenvalue"),
    PropertySpec("peripheral_structure", "hyper", _prop_peripheral_structure,
                 "peripheral projection, power limit, fixed vectors, bounded orbits, collapse, common eigenpair"),
    PropertySpec("cyclic_peripheral_permutation", "rem", _prop_cyclic_permutation,
                 "the peripheral permutation of an irreducible operator is one cycle"),
    PropertySpec("irreducible_partner_commutes", "pcu1", _prop_partner_commutes,
                 "semi-commuting partners of an irreducible operator commute"),
    PropertySpec("strict_comparison", "compa", _prop_strict_comparison,
                 "a strict reduction of an irreducible operator lowers the spectral radius"),
    PropertySpec("commutant_eigenpair", "peris", _prop_commutant_eigenpair,
                 "commuting operators share the eigenvector of the compressed compact part"),
    PropertySpec("chain_eigenvector", "perisc3", _prop_chain_eigenvector,
                 "operators commuting with the smoothed compact part share its eigenvector"),
    PropertySpec("super_commutant_reducibility", "app1", _prop_super_commutant_reducibility,
                 "each reducibility criterion makes both super-commutants reducible"),
    PropertySpec("reducibility_detectors", "sver", _prop_reducibility_detectors,
                 "triggered criteria come with a verified invariant ideal of T"),
    PropertySpec("commutator_nilpotency", "quasi", _prop_commutator_nilpotency,
                 "commutators of semi-commuting pairs are nilpotent"),
    PropertySpec("irreducibility_oracle", "oracle", _prop_irreducibility_oracle,
                 "SCC irreducibility agrees with exhaustive subset enumeration"),
)
_BY_KEY = {p.name: p for p in PROPERTIES} | {p.alias: p for p in PROPERTIES}


def resolve_property(key: str) -> PropertySpec:
    try:
        return _BY_KEY[key.strip()]
    except KeyError:
        raise ValueError(f"unknown property {key!r}") from None


# ------------------------------------------------------------------- driver

@dataclass(frozen=True)
class SuiteConfig:
    n_range: tuple = (4,)
    trials: int = 20
    seed: int = 0
    tolerances: Tolerances = DEFAULT_TOL
    properties: tuple | None = None  # names or aliases; None selects all

    def __post_init__(self):
        if isinstance(self.trials, bool) or not isinstance(self.trials, (int, np.integer)) or self.trials < 1:
            raise ValueError("trials must be a positive integer")
        if not self.n_range:
            raise ValueError("n_range must not be empty")
        for n in self.n_range:
            if not N_MIN <= int(n) <= N_MAX:
                raise ValueError(f"dimension {n} outside [{N_MIN}, {N_MAX}]")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "n_range", tuple(int(n) for n in self.n_range))
        if self.properties is not None:
            names = tuple(dict.fromkeys(resolve_property(p).name for p in self.properties))
            if not names:
                raise ValueError("property selection is empty")
            object.__setattr__(self, "properties", names)

    def selected(self) -> list[PropertySpec]:
        if self.properties is None:
            return list(PROPERTIES)
        return [resolve_property(p) for p in self.properties]


@dataclass
class PropertyResult:
    name: str
    alias: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    skip_reasons: list = field(default_factory=list)
    worst_margin: float | None = None
    counterexample: dict | None = None

    def record_margin(self, margin):
        if margin is not None and (self.worst_margin is None or margin < self.worst_margin):
            self.worst_margin = float(margin)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "alias": self.alias,
            "pass": self.passed,
            "fail": self.failed,
            "skipped": self.skipped,
            "skip_reasons": sorted(set(self.skip_reasons)),
            "worst_margin": self.worst_margin,
            "counterexample": self.counterexample,
        }


@dataclass
class SuiteReport:
    seed: int
    n_range: tuple
    trials: int
    properties: list
    wall_time: float = 0.0

    @property
    def failed(self) -> int:
        return sum(p.failed for p in self.properties)

    @property
    def all_passed(self) -> bool:
        return self.failed == 0

    def to_dict(self, include_time: bool = True) -> dict:
        out = {
            "seed": self.seed,
            "n_range": list(self.n_range),
            "trials": self.trials,
            "properties": [p.to_dict() for p in self.properties],
            "totals": {
                "pass": sum(p.passed for p in self.properties),
                "fail": self.failed,
                "skipped": sum(p.skipped for p in self.properties),
            },
        }
        if include_time:
            out["wall_time"] = self.wall_time
        return out


def trial_rng(seed: int, name: str, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), zlib.crc32(name.encode()), int(trial)])


def run_trial(spec: PropertySpec | str, seed: int, trial: int, n: int,
              tol: Tolerances = DEFAULT_TOL, matrices: dict | None = None) -> Outcome:
    """Run one trial; raises Skip when the instance misses the hypothesis. The
    generated matrices are collected into ``matrices`` as they appear."""
    spec = resolve_property(spec) if isinstance(spec, str) else spec
    mats = {} if matrices is None else matrices
    return spec.check(trial_rng(seed, spec.name, trial), n, tol, mats)


def _payload(seed, trial, n, matrices, reason, margin):
    return {
        "seed": int(seed),
        "trial": int(trial),
        "n": int(n),
        "reason": reason,
        "margin": margin,
        "matrices": {k: matrix_to_obj(v) for k, v in matrices.items()},
    }


def run_theorem_suite(config: SuiteConfig) -> SuiteReport:
    start = time.perf_counter()
    tol = config.tolerances
    results = []
    for spec in config.selected():
        res = PropertyResult(spec.name, spec.alias)
        for trial in range(config.trials):
            n = config.n_range[trial % len(config.n_range)]
            mats = {}
            try:
                out = run_trial(spec, config.seed, trial, n, tol, mats)
            except Skip as exc:
                res.skipped += 1
                res.skip_reasons.append(str(exc))
                continue
            except (LatticeError, np.linalg.LinAlgError, ValueError) as exc:
                res.failed += 1
                if res.counterexample is None:
                    reason = f"{type(exc).__name__}: {exc}"
                    res.counterexample = _payload(config.seed, trial, n, mats, reason, None)
                continue
            res.record_margin(out.margin)
            if out.ok:
                res.passed += 1
            else:
                res.failed += 1
                if res.counterexample is None:
                    res.counterexample = _payload(config.seed, trial, n, mats,
                                                  out.note or "check failed", out.margin)
        results.append(res)
    return SuiteReport(int(config.seed), config.n_range, config.trials, results,
                       wall_time=time.perf_counter() - start)
