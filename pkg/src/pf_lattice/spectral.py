"""Spectra, spectral projections, local spectral radii and the limit behaviour of powers.

Eigenvalues are computed per diagonal block of the exact-zero block triangular
form (the spectrum of a block triangular matrix is the union of its diagonal
block spectra), with LAPACK's balanced Hessenberg-QR on each block. This keeps
nilpotent and reducible inputs from picking up the eps**(1/k) scatter a full
dense solve would give a size-k Jordan block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg

from .errors import (
    BandSeparationFailure,
    DichotomyUndetected,
    EigensolverFailure,
    QuasiNilpotentInput,
)
from .graph import Condensation, support_digraph
from .lattice import DEFAULT_TOL, Tolerances, as_array, inf_norm

PERIOD_CAP = 2520
LOCAL_POWER = 64
_CLUSTER_FACTOR = 100.0


@dataclass(frozen=True)
class EigenCluster:
    value: complex
    algebraic: int
    geometric: int

    @property
    def semisimple(self) -> bool:
        return self.algebraic == self.geometric


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    radius: float
    peripheral: np.ndarray
    peripheral_semisimple: bool
    clusters: tuple = ()

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "radius": float(self.radius),
            "peripheral": [[float(z.real), float(z.imag)] for z in self.peripheral],
            "peripheral_semisimple": bool(self.peripheral_semisimple),
        }


class LimitKind(str, Enum):
    PROJECTION = "ProjectionLimit"
    NILPOTENT = "NilpotentLimit"


@dataclass(frozen=True)
class DichotomyResult:
    kind: LimitKind
    limit: np.ndarray
    subsequence_period: int | None = None
    scaling_exponent: int | None = None
    verified_power: int | None = None
    residual: float | None = None


@dataclass(frozen=True)
class LocalRadius:
    exact: float
    empirical: float


def _sort_eigenvalues(ev: np.ndarray) -> np.ndarray:
    ev = np.asarray(ev, dtype=complex)
    # Rounding the keys keeps the order stable across roundoff-level differences.
    mod = np.round(np.abs(ev), 12)
    arg = np.round(np.angle(ev), 12)
    arg[np.isclose(mod, 0.0)] = 0.0
    order = np.lexsort((arg, -mod))
    return ev[order]


def eigenvalues(A) -> np.ndarray:
    """All n eigenvalues (with multiplicity), ordered by modulus desc then argument asc."""
    a = as_array(A)
    n = a.shape[0]
    cond = Condensation(n, support_digraph([a], 0.0))
    out = []
    try:
        for comp in cond.components:
            block = a[np.ix_(comp, comp)]
            if len(comp) == 1:
                out.append(complex(block[0, 0]))
            else:
                out.extend(scipy.linalg.eigvals(block, check_finite=True))
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(f"eigensolver did not converge: {exc}", n=n) from None
    return _sort_eigenvalues(np.array(out, dtype=complex))


def _cluster(values: np.ndarray, radius_scale: float) -> list[list[int]]:
    """Greedy grouping of nearby eigenvalues (indices into values)."""
    groups: list[list[int]] = []
    centers: list[complex] = []
    for k, z in enumerate(values):
        for g, c in enumerate(centers):
            if abs(z - c) <= radius_scale:
                groups[g].append(k)
                centers[g] = complex(np.mean(values[groups[g]]))
                break
        else:
            groups.append([k])
            centers.append(complex(z))
    return groups


def _rank(m: np.ndarray, tol: float) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol))


def geometric_multiplicity(A, value: complex, tol: Tolerances = DEFAULT_TOL) -> int:
    a = as_array(A)
    n = a.shape[0]
    rank_tol = tol.zero * max(inf_norm(a), 1e-300) * n
    return n - _rank(a - value * np.eye(n), rank_tol)


def spectrum(A, tol: Tolerances = DEFAULT_TOL) -> SpectrumReport:
    a = as_array(A)
    ev = eigenvalues(a)
    radius = float(np.max(np.abs(ev))) if ev.size else 0.0
    if radius <= 0.0:
        return SpectrumReport(ev, 0.0, ev[:0], True, ())
    per = ev[np.abs(ev) >= radius * (1.0 - tol.peripheral_band)]
    clusters = []
    for grp in _cluster(per, _CLUSTER_FACTOR * tol.peripheral_band * radius):
        value = complex(np.mean(per[grp]))
        if abs(value.imag) <= tol.zero * radius:
            value = complex(value.real, 0.0)
        clusters.append(EigenCluster(value, len(grp), geometric_multiplicity(a, value, tol)))
    semisimple = all(c.semisimple for c in clusters)
    return SpectrumReport(ev, radius, per, semisimple, tuple(clusters))


def spectral_radius(A, tol: Tolerances = DEFAULT_TOL) -> float:
    ev = eigenvalues(A)
    return float(np.max(np.abs(ev))) if ev.size else 0.0


def spectral_projector(A, select, expected: int | None = None) -> np.ndarray:
    """Real spectral projection onto the eigenvalues z with ``select(z)`` true.

    Ordered real Schur form A = Z T Z^T with the selected eigenvalues leading,
    then the Sylvester equation T11 X - X T22 = -T12 splits off the complementary
    invariant subspace: P = Z [[I, -X], [0, 0]] Z^T. ``select`` must treat complex
    conjugates alike.
    """
    a = as_array(A)
    n = a.shape[0]

    def pick(re, im=0.0):
        return bool(select(complex(re, im)))

    try:
        t, z, k = scipy.linalg.schur(a, output="real", sort=pick)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(f"ordered Schur decomposition failed: {exc}") from None
    if expected is not None and k != expected:
        raise BandSeparationFailure(
            "Schur reordering selected a different eigenvalue count",
            selected=int(k),
            expected=int(expected),
        )
    if k == 0:
        return np.zeros((n, n))
    if k == n:
        return np.eye(n)
    t11, t12, t22 = t[:k, :k], t[:k, k:], t[k:, k:]
    x = scipy.linalg.solve_sylvester(t11, -t22, -t12)
    zk = z[:, :k]
    return zk @ (zk.T - x @ z[:, k:].T)


def _modulus_threshold(ev: np.ndarray, radius: float, tol: Tolerances):
    """Split point between the peripheral band and the rest, or None if nothing is excluded."""
    mods = np.abs(ev)
    inside = mods >= radius * (1.0 - tol.peripheral_band)
    if inside.all():
        return None, int(inside.sum())
    low_in = mods[inside].min()
    high_out = mods[~inside].max()
    if (low_in - high_out) / radius < tol.peripheral_band:
        raise BandSeparationFailure(
            "peripheral band not separated from the rest of the spectrum",
            smallest_peripheral=float(low_in),
            largest_excluded=float(high_out),
            radius=float(radius),
        )
    return 0.5 * (low_in + high_out), int(inside.sum())


def peripheral_projection(A, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Spectral projection for the peripheral spectrum (eigenvalues of modulus r(A))."""
    a = as_array(A)
    ev = eigenvalues(a)
    radius = float(np.max(np.abs(ev)))
    if radius <= tol.zero:
        raise QuasiNilpotentInput("spectral radius below tolerance", radius=radius)
    threshold, count = _modulus_threshold(ev, radius, tol)
    if threshold is None:
        return np.eye(a.shape[0])
    return spectral_projector(a, lambda z: abs(z) >= threshold, expected=count)


def eigenvalue_projection(A, value: complex, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Spectral projection for the eigenvalues clustered at ``value`` (conjugate included)."""
    a = as_array(A)
    ev = eigenvalues(a)
    scale = max(inf_norm(a), 1e-300)
    width = _CLUSTER_FACTOR * tol.peripheral_band * scale

    def near(z):
        return abs(z - value) <= width or abs(z - np.conj(value)) <= width

    count = int(sum(near(z) for z in ev))
    if count == len(ev):
        return np.eye(a.shape[0])
    return spectral_projector(a, near, expected=count)


def _modulus_bands(ev: np.ndarray, radius: float, tol: Tolerances):
    """(band modulus, lower threshold) pairs from the top band down. Moduli below
    tol.zero form one zero band; the last threshold is 0 (identity projector)."""
    zero_cut = tol.zero * max(radius, 1.0)
    mods = np.sort(np.abs(ev))[::-1]
    live = mods[mods > zero_cut]
    groups: list[list[float]] = []
    for v in live:
        if groups and groups[-1][-1] - v <= tol.peripheral_band * radius:
            groups[-1].append(float(v))
        else:
            groups.append([float(v)])
    bands = []
    for k, grp in enumerate(groups):
        below = groups[k + 1][0] if k + 1 < len(groups) else float(mods[mods <= zero_cut].max(initial=0.0))
        bands.append((grp[0], 0.5 * (grp[-1] + below)))
    if live.size < mods.size:
        bands.append((0.0, 0.0))
    bands[-1] = (bands[-1][0], 0.0)
    return bands


def local_spectral_radius(A, x, tol: Tolerances = DEFAULT_TOL, dual: bool = False,
                          power: int = LOCAL_POWER) -> LocalRadius:
    """Local spectral radius lim ||A^N x||^(1/N), for a functional when ``dual``.

    The exact value is the largest modulus band whose spectral projection does not
    annihilate x; the empirical value is ||A^power x||^(1/power).
    """
    a = as_array(A)
    if dual:
        a = a.T
    x = np.asarray(x, dtype=float)
    xn = float(np.max(np.abs(x)))
    if xn == 0.0:
        raise ValueError("local spectral radius needs a nonzero vector")
    ev = eigenvalues(a)
    radius = float(np.max(np.abs(ev)))
    exact = 0.0
    for value, threshold in _modulus_bands(ev, radius, tol):
        if threshold == 0.0:
            exact = value
            break
        proj = spectral_projector(a, lambda z, t=threshold: abs(z) >= t,
                                  expected=int(np.sum(np.abs(ev) >= threshold)))
        comp = float(np.max(np.abs(proj @ x)))
        if comp > 1e3 * np.finfo(float).eps * max(inf_norm(proj), 1.0) * xn * a.shape[0]:
            exact = value
            break
    scale = radius if radius > 0 else 1.0
    y = np.linalg.matrix_power(a / scale, power) @ (x / xn)
    norm = float(np.max(np.abs(y)))
    empirical = scale * norm ** (1.0 / power) if norm > 0 else 0.0
    return LocalRadius(exact=exact, empirical=empirical)


def peripheral_period(peripheral: np.ndarray, radius: float, tol: Tolerances = DEFAULT_TOL,
                      cap: int = PERIOD_CAP) -> int | None:
    """Smallest m <= cap with (z/r)^m = 1 for every peripheral z, else None."""
    phases = np.asarray(peripheral, dtype=complex) / radius
    phases = phases / np.abs(phases)
    for m in range(1, cap + 1):
        if np.max(np.abs(phases ** m - 1.0)) < tol.peripheral_band:
            return m
    return None


def _power_residual(ahat, p, power):
    return float(np.max(np.sum(np.abs(np.linalg.matrix_power(ahat, power) - p), axis=1)))


def power_dichotomy(A, tol: Tolerances = DEFAULT_TOL, target: float = 1e-6,
                    max_doublings: int = 40) -> DichotomyResult:
    """Limit behaviour of the powers of A / r(A).

    Semisimple peripheral part: A^(km)/r^(km) converges to the peripheral projection.
    Otherwise A^(n_j)/||A^(n_j)|| converges along n_j = m 2^j to a nonzero nilpotent.
    """
    a = as_array(A)
    n = a.shape[0]
    rep = spectrum(a, tol)
    if rep.radius <= tol.zero:
        raise QuasiNilpotentInput("spectral radius below tolerance", radius=rep.radius)
    ahat = a / rep.radius
    m = peripheral_period(rep.peripheral, rep.radius, tol)

    if rep.peripheral_semisimple:
        p = peripheral_projection(a, tol)
        if m is None:
            return DichotomyResult(LimitKind.PROJECTION, p, None)
        rest = np.abs(rep.eigenvalues[np.abs(rep.eigenvalues) < rep.radius * (1 - tol.peripheral_band)])
        sub = float(rest.max()) / rep.radius if rest.size else 0.0
        cond = max(1.0, inf_norm(p), inf_norm(np.eye(n) - p)) * n
        if sub <= 0.0:
            k = 1
        else:
            k = max(1, math.ceil(math.log(1e-8 / cond) / (m * math.log(sub))))
        history = []
        for _ in range(max_doublings):
            res_k = _power_residual(ahat, p, k * m)
            res_2k = _power_residual(ahat, p, 2 * k * m)
            history.append((k * m, res_k, res_2k))
            if res_k <= target and res_2k <= target:
                return DichotomyResult(LimitKind.PROJECTION, p, m, verified_power=k * m,
                                       residual=max(res_k, res_2k))
            k *= 2
        raise DichotomyUndetected("powers did not approach the peripheral projection",
                                  history=history)

    step = m if m is not None else 1
    b = np.linalg.matrix_power(ahat, step)
    log_norm = math.log(inf_norm(b))
    b = b / inf_norm(b)
    prev = b
    prev_log = log_norm
    growth = []
    for j in range(1, max_doublings + 1):
        sq = b @ b
        s = inf_norm(sq)
        if s == 0.0:
            break
        log_norm = 2 * log_norm + math.log(s)
        b = sq / s
        diff = inf_norm(b - prev)
        rate = (log_norm - prev_log) / math.log(2.0)
        growth.append((step * 2 ** j, rate, diff))
        if diff <= 1e-7 and m is not None:
            limit = b
            tiny = np.linalg.matrix_power(limit, n)
            if inf_norm(limit) > 0 and inf_norm(tiny) <= 1e-5:
                return DichotomyResult(LimitKind.NILPOTENT, limit, m,
                                       scaling_exponent=int(round(rate)),
                                       verified_power=step * 2 ** j, residual=diff)
        prev, prev_log = b, log_norm
    raise DichotomyUndetected("no convergent normalized subsequence within the power cap",
                              growth=growth)
