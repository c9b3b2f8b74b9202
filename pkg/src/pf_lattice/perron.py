"""Ideal irreducibility, Perron eigendata and the peripheral cycle structure.

The peripheral structure of K (normalized to r(K) = 1) is read off the peripheral
spectral projection P. When P >= 0 and the peripheral part is semisimple, P is a
sum of rank-one terms x_i (x)* x_i with pairwise disjoint x_i and pairwise
disjoint x_i*, and K permutes the x_i. Columns of P are therefore multiples of
the x_i and rows are multiples of the x_i*; clustering them by direction
recovers both families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BandSeparationFailure,
    CertificateFailure,
    DichotomyUndetected,
    HypothesisViolated,
    PreconditionViolation,
)
from .graph import Condensation, support_digraph
from .lattice import DEFAULT_TOL, CoordinateIdeal, Tolerances, as_array, inf_norm, is_quasi_interior
from .spectral import (
    LimitKind,
    eigenvalue_projection,
    power_dichotomy,
    peripheral_projection,
    spectral_radius,
    spectrum,
)

COMMUTING_RTOL = 1e-8
STRUCTURE_RTOL = 1e-7
EIGEN_RTOL = 1e-6


@dataclass(frozen=True)
class IrreducibilityCertificate:
    irreducible: bool
    witness: CoordinateIdeal | None = None

    def to_dict(self) -> dict:
        return {
            "irreducible": self.irreducible,
            "witness": None if self.witness is None else self.witness.one_based(),
        }


def certificate_from_digraph(n: int, succ) -> IrreducibilityCertificate:
    """Irreducible iff strongly connected; otherwise the witness is the sink
    component containing the smallest coordinate (a nontrivial closed set)."""
    cond = Condensation(n, succ)
    if cond.strongly_connected:
        return IrreducibilityCertificate(True)
    sink = min(cond.sinks())
    return IrreducibilityCertificate(False, CoordinateIdeal.of(n, cond.components[sink]))


def is_ideal_irreducible(matrices, tol: Tolerances = DEFAULT_TOL) -> IrreducibilityCertificate:
    """Whether the collection has no common nontrivial invariant coordinate ideal."""
    if not isinstance(matrices, (list, tuple)):
        matrices = [matrices]
    mats = [as_array(m) for m in matrices]
    if not mats:
        raise ValueError("need at least one matrix")
    n = mats[0].shape[0]
    if any(m.shape != (n, n) for m in mats):
        raise ValueError("matrices must share one dimension")
    return certificate_from_digraph(n, support_digraph(mats, tol.zero))


def _require_irreducible(A, tol, what="input"):
    cert = is_ideal_irreducible([A], tol)
    if not cert.irreducible:
        raise PreconditionViolation(f"{what} is ideal reducible", certificate=cert.to_dict())
    return cert


def _positive_null_vector(m: np.ndarray, tol: Tolerances, what: str) -> np.ndarray:
    n = m.shape[0]
    _, s, vh = np.linalg.svd(m)
    rank_tol = tol.zero * max(inf_norm(m), 1.0) * n
    if n > 1 and s[-2] <= rank_tol:
        raise CertificateFailure(f"{what} eigenspace is not one-dimensional", singular_values=s.tolist())
    v = vh[-1]
    v = v if v.sum() >= 0 else -v
    v = v / np.abs(v).sum()
    if v.min() <= tol.zero * np.abs(v).max():
        raise CertificateFailure(f"{what} Perron vector is not strictly positive", vector=v.tolist())
    return v


def perron_pair(A, tol: Tolerances = DEFAULT_TOL):
    """(r, x0, x0star) for ideal irreducible A: A x0 = r x0, A^T x0star = r x0star,
    both strictly positive, ||x0||_1 = 1 and x0star . x0 = 1."""
    a = as_array(A)
    _require_irreducible(a, tol)
    r = spectral_radius(a)
    if r <= 0:
        raise CertificateFailure("irreducible matrix with zero spectral radius")
    shift = a - r * np.eye(a.shape[0])
    x0 = _positive_null_vector(shift, tol, "right")
    x0star = _positive_null_vector(shift.T, tol, "left")
    x0star = x0star / (x0star @ x0)
    return r, x0, x0star


def strongly_expanding_sum(T, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """sum_{k>=1} t^k for t = T / (2 r(T)), truncated after 2^8 terms.

    Summed as t (I + t)(I + t^2)(I + t^4)..., which only adds and multiplies
    nonnegative numbers, so an entry is positive exactly when some path reaches
    it (tiny entries stay positive instead of drowning in cancellation)."""
    t = as_array(T)
    _require_irreducible(t, tol)
    t = t / (2.0 * spectral_radius(t))
    out = t.copy()
    power = t.copy()
    for _ in range(8):
        out = out + out @ power
        power = power @ power
    if out.min() <= 0:
        raise CertificateFailure("expanding sum has a non-positive entry", minimum=float(out.min()))
    return out


def _check_commuting(A, B, what="matrices"):
    gap = inf_norm(A @ B - B @ A)
    bound = COMMUTING_RTOL * inf_norm(A) * inf_norm(B)
    if gap > bound:
        raise PreconditionViolation(f"{what} do not commute", commutator_norm=gap, bound=bound)


@dataclass(frozen=True)
class CommonEigenpair:
    x0: np.ndarray
    x0star: np.ndarray
    lambda_T: float
    mu_K: float


def _rayleigh(M, x, xstar):
    return float(xstar @ (M @ x) / (xstar @ x))


def _check_eigen(M, x, value, what, rtol=EIGEN_RTOL):
    err = inf_norm(M @ x - value * x)
    scale = max(inf_norm(M), abs(value), 1e-300) * inf_norm(x)
    if err > rtol * scale:
        raise CertificateFailure(f"{what} eigen-equation fails", residual=err, scale=scale)


def common_peripheral_eigenpair(T, K, tol: Tolerances = DEFAULT_TOL) -> CommonEigenpair:
    """Shared quasi-interior eigenvector of an irreducible T and a commuting K >= 0,
    taken as the Perron pair of the strictly positive T~ K T~."""
    t, k = as_array(T), as_array(K)
    _require_irreducible(t, tol, "T")
    if inf_norm(k) == 0:
        raise PreconditionViolation("K must be nonzero")
    _check_commuting(t, k, "T and K")
    tt = strongly_expanding_sum(t, tol)
    _, x0, x0star = perron_pair(tt @ k @ tt, tol)
    lam = _rayleigh(t, x0, x0star)
    mu = _rayleigh(k, x0, x0star)
    _check_eigen(t, x0, lam, "T x0")
    _check_eigen(t.T, x0star, lam, "T^T x0*")
    _check_eigen(k, x0, mu, "K x0")
    rk = spectral_radius(k)
    if abs(mu - rk) > EIGEN_RTOL * rk:
        raise CertificateFailure("eigenvalue of K at x0 differs from r(K)", mu=mu, radius=rk)
    return CommonEigenpair(x0, x0star, lam, mu)


def nonnegative_eigenvector(M, tol: Tolerances = DEFAULT_TOL):
    """(rho, v, w) with rho = r(M), M v = rho v, M^T w = rho w, v, w >= 0, for any M >= 0.

    v is the limiting direction of (M + I)^k 1, i.e. N^d P 1 where P is the spectral
    projection at rho, N = (M - rho) P and d is the largest power with N^d P 1 != 0.
    """
    m = as_array(M)
    n = m.shape[0]
    scale = max(inf_norm(m), 1.0)
    rho = spectral_radius(m)
    if rho <= tol.zero * scale:
        rho = 0.0

    def side(a):
        p = np.eye(n) if rho == 0.0 else eigenvalue_projection(a, rho, tol)
        nil = (a - rho * np.eye(n)) @ p
        u = p @ np.ones(n)
        for _ in range(n):
            nxt = nil @ u
            if inf_norm(nxt) <= 1e-9 * n * scale * inf_norm(u):
                break
            u = nxt
        u = u if u.sum() >= 0 else -u
        u[np.abs(u) <= tol.zero * inf_norm(u)] = 0.0
        if u.min() < 0:
            raise CertificateFailure("limit eigenvector has negative entries", vector=u.tolist())
        return u / u.sum()

    return rho, side(m), side(m.T)


@dataclass(frozen=True)
class PeripheralStructure:
    radius: float
    projection: np.ndarray
    vectors: tuple
    functionals: tuple
    permutation: tuple  # 0-based: K x_i = r x_{permutation[i]}
    period: int
    x0: np.ndarray
    x0star: np.ndarray
    verified_power: int | None = None
    residual: float | None = None
    quasi_interior: bool = True
    spectrum: object = field(default=None, compare=False, repr=False)

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def cycles(self) -> list[list[int]]:
        seen, out = set(), []
        for i in range(self.rank):
            if i in seen:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self.permutation[j]
            out.append(cyc)
        return out

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "projection": self.projection,
            "rank": self.rank,
            "vectors": [v for v in self.vectors],
            "functionals": [f for f in self.functionals],
            "permutation": [p + 1 for p in self.permutation],
            "cycles": [[i + 1 for i in c] for c in self.cycles()],
            "period": self.period,
            "x0": self.x0,
            "x0star": self.x0star,
            "verified_power": self.verified_power,
            "power_residual": self.residual,
            "quasi_interior": self.quasi_interior,
        }


def _cluster_directions(vectors: np.ndarray, tol: Tolerances) -> list[list[int]]:
    """Group rows of ``vectors`` (nonnegative) by direction: cosine distance below
    tol.cluster joins, above 100*tol.cluster separates, in between is ambiguous."""
    units = vectors / np.linalg.norm(vectors, axis=1, keepdims=True)
    groups: list[list[int]] = []
    reps: list[np.ndarray] = []
    for k, u in enumerate(units):
        for g, rep in enumerate(reps):
            dist = 1.0 - float(u @ rep)
            if dist < tol.cluster:
                groups[g].append(k)
                break
            if dist <= 100 * tol.cluster:
                raise HypothesisViolated("ambiguous proportionality cluster", distance=dist)
        else:
            groups.append([k])
            reps.append(u)
    return groups


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def peripheral_cycle_structure(K, tol: Tolerances = DEFAULT_TOL) -> PeripheralStructure:
    """Disjoint peripheral vectors/functionals, the permutation K induces on them,
    its period m, and the check K^(mN)/r^(mN) -> P."""
    k = as_array(K)
    n = k.shape[0]
    rep = spectrum(k, tol)
    if rep.radius <= tol.zero:
        raise HypothesisViolated("spectral radius below tolerance", radius=rep.radius)
    if not rep.peripheral_semisimple:
        raise HypothesisViolated("peripheral part is defective",
                                 clusters=[(str(c.value), c.algebraic, c.geometric) for c in rep.clusters])
    r = rep.radius
    khat = k / r
    try:
        p = peripheral_projection(k, tol)
    except BandSeparationFailure as exc:
        raise HypothesisViolated(exc.reason, **exc.diagnostics) from None
    pscale = max(inf_norm(p), 1.0)
    if p.min() < -tol.zero * pscale:
        raise HypothesisViolated("peripheral projection has a negative entry", minimum=float(p.min()))
    p_clean = np.where(np.abs(p) <= tol.zero * pscale, 0.0, p)
    rank = len(rep.peripheral)

    cols = [j for j in range(n) if p_clean[:, j].max() > 0]
    rows = [i for i in range(n) if p_clean[i, :].max() > 0]
    col_groups = _cluster_directions(p_clean[:, cols].T, tol)
    row_groups = _cluster_directions(p_clean[rows, :], tol)
    if len(col_groups) != rank or len(row_groups) != rank:
        raise HypothesisViolated("cluster count differs from the rank of P",
                                 rank=rank, column_clusters=len(col_groups), row_clusters=len(row_groups))

    xs = []
    for grp in col_groups:
        v = p_clean[:, [cols[g] for g in grp]].sum(axis=1)
        xs.append(v / v.sum())
    fs_raw = []
    for grp in row_groups:
        f = p_clean[[rows[g] for g in grp], :].sum(axis=0)
        fs_raw.append(f / f.sum())
    # Pair each x_i with the functional that sees it; under the hypothesis the
    # pairing matrix is a positive diagonal up to ordering.
    pairing = np.array([[f @ x for x in xs] for f in fs_raw])
    match = np.argmax(pairing, axis=0)
    if sorted(match.tolist()) != list(range(rank)):
        raise HypothesisViolated("vectors and functionals do not pair up")
    order = sorted(range(rank), key=lambda i: int(np.flatnonzero(xs[i] > 0)[0]))
    xs = [xs[i] for i in order]
    fs = [fs_raw[match[i]] / (fs_raw[match[i]] @ xs[j]) for j, i in enumerate(order)]
    X = np.column_stack(xs)
    F = np.column_stack(fs)

    # Permutation: K^ x_i must be a positive multiple of exactly one x_j.
    perm = []
    for i in range(rank):
        y = khat @ X[:, i]
        coef = F.T @ y
        j = int(np.argmax(np.abs(coef)))
        w = coef[j]
        if w <= 0 or inf_norm(y - w * X[:, j]) > STRUCTURE_RTOL * inf_norm(y):
            raise HypothesisViolated("K does not permute the peripheral vectors", index=i + 1)
        perm.append(j)
    if sorted(perm) != list(range(rank)):
        raise HypothesisViolated("induced map on peripheral vectors is not a permutation")

    # Rescale along each cycle so that K^ x_i = x_{pi(i)} exactly.
    seen = set()
    cycle_lengths = []
    for i0 in range(rank):
        if i0 in seen:
            continue
        i, length = i0, 0
        while True:
            seen.add(i)
            length += 1
            j = perm[i]
            if j == i0:
                break
            X[:, j] = khat @ X[:, i]
            i = j
        back = khat @ X[:, i]
        if inf_norm(back - X[:, i0]) > STRUCTURE_RTOL * inf_norm(X[:, i0]):
            raise HypothesisViolated("cycle weights do not multiply to one", cycle_start=i0 + 1)
        cycle_lengths.append(length)
    for i in range(rank):
        F[:, i] = F[:, i] / (F[:, i] @ X[:, i])
    period = _lcm(cycle_lengths)

    _validate_structure(k, r, p, X, F, tol)
    x0, x0star = X.sum(axis=1), F.sum(axis=1)
    try:
        dich = power_dichotomy(k, tol)
    except DichotomyUndetected as exc:
        raise HypothesisViolated(exc.reason, **exc.diagnostics) from None
    if dich.kind is not LimitKind.PROJECTION or dich.residual is None or dich.residual > 1e-6:
        raise HypothesisViolated("powers do not converge to the peripheral projection")
    if dich.subsequence_period != period:
        raise CertificateFailure("spectral period differs from permutation order",
                                 spectral=dich.subsequence_period, permutation=period)
    return PeripheralStructure(
        radius=r,
        projection=p,
        vectors=tuple(X[:, i].copy() for i in range(rank)),
        functionals=tuple(F[:, i].copy() for i in range(rank)),
        permutation=tuple(perm),
        period=period,
        x0=x0,
        x0star=x0star,
        verified_power=dich.verified_power,
        residual=dich.residual,
        quasi_interior=is_quasi_interior(x0 / x0.max(), tol) and is_quasi_interior(x0star / x0star.max(), tol),
        spectrum=rep,
    )


def _validate_structure(k, r, p, X, F, tol):
    rank = X.shape[1]
    bi = F.T @ X
    if np.max(np.abs(bi - np.eye(rank))) > STRUCTURE_RTOL:
        raise HypothesisViolated("biorthogonality fails")
    if np.max(np.abs(X @ F.T - p)) > STRUCTURE_RTOL * max(1.0, np.abs(p).max()):
        raise HypothesisViolated("P is not the sum of the rank-one terms")
    for M, what in ((X, "vectors"), (F, "functionals")):
        supp = np.abs(M) > tol.zero * np.abs(M).max()
        if np.any(supp.sum(axis=1) > 1):
            raise HypothesisViolated(f"peripheral {what} are not disjoint")
    x0, x0star = X.sum(axis=1), F.sum(axis=1)
    if inf_norm(k @ x0 - r * x0) > STRUCTURE_RTOL * r * inf_norm(x0):
        raise HypothesisViolated("K x0 != r x0")
    if inf_norm(k.T @ x0star - r * x0star) > STRUCTURE_RTOL * r * inf_norm(x0star):
        raise HypothesisViolated("K^T x0* != r x0*")


@dataclass(frozen=True)
class CommutingEigen:
    value: float
    x: np.ndarray
    xstar: np.ndarray
    compressed: np.ndarray


def commuting_eigenvalue(S, structure: PeripheralStructure, K, tol: Tolerances = DEFAULT_TOL) -> CommutingEigen:
    """Common nonnegative eigenvalue of S and S^T for S commuting with K, found on
    the peripheral range of K through M_ij = x_i*(S x_j)."""
    s, k = as_array(S), as_array(K)
    _check_commuting(s, k, "S and K")
    X = np.column_stack(structure.vectors)
    F = np.column_stack(structure.functionals)
    m = F.T @ s @ X
    m = np.where(m < 0, 0.0, m)
    lam, v, w = nonnegative_eigenvector(m, tol)
    x = X @ v
    xstar = F @ w
    _check_eigen(s, x, lam, "S x")
    _check_eigen(s.T, xstar, lam, "S^T x*")
    return CommutingEigen(lam, x, xstar, m)
