"""Ideal-triangularizing chains and nilpotency certificates for commutators.

For positive T and K that semi-commute, S = TK - KT is nilpotent. Build the chain
of (T + K)-invariant coordinate ideals from the component DAG of the support
digraph; every consecutive quotient block of S vanishes, so the chain can be
refined one coordinate at a time and S becomes strictly upper triangular in the
resulting coordinate order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CertificateFailure, PreconditionViolation, QuotientNotScalarZero
from .graph import Condensation, support_digraph
from .lattice import DEFAULT_TOL, CoordinateIdeal, Tolerances, as_array, inf_norm, is_invariant_ideal
from .perron import is_ideal_irreducible
from .spectral import spectral_radius

RADIUS_RTOL = 1e-6
INDEX_RTOL = 1e-7


@dataclass(frozen=True)
class IdealChain:
    links: tuple  # CoordinateIdeals, strictly increasing from empty to full

    def __post_init__(self):
        links = self.links
        if not links or links[0].support or len(links[-1]) != links[-1].n:
            raise ValueError("a chain runs from the empty ideal to the full space")
        for a, b in zip(links, links[1:]):
            if not a < b:
                raise ValueError("chain links must be strictly nested")

    @property
    def n(self) -> int:
        return self.links[0].n

    @property
    def maximal(self) -> bool:
        return len(self.links) == self.n + 1

    def gaps(self):
        """Coordinates added at each step, sorted."""
        return [sorted(b.support - a.support) for a, b in zip(self.links, self.links[1:])]

    def to_list(self) -> list:
        return [link.one_based() for link in self.links]

    def to_dict(self) -> dict:
        return {"links": self.to_list(), "maximal": self.maximal}


def _chain_from_steps(n: int, steps) -> IdealChain:
    links = [CoordinateIdeal.of(n, ())]
    acc: set[int] = set()
    for step in steps:
        acc |= set(step)
        links.append(CoordinateIdeal.of(n, acc))
    return IdealChain(tuple(links))


def invariant_ideal_chain(T, tol: Tolerances = DEFAULT_TOL) -> IdealChain:
    """Chain of T-invariant coordinate ideals with irreducible consecutive quotients.
    Components are added smallest-coordinate-first among those whose successors
    are already in place."""
    t = as_array(T)
    n = t.shape[0]
    cond = Condensation(n, support_digraph([t], tol.zero))
    steps = [cond.components[k] for k in cond.closed_order()]
    for comp in steps:
        if len(comp) > 1 and not is_ideal_irreducible([t[np.ix_(comp, comp)]], tol).irreducible:
            raise CertificateFailure("quotient block is reducible", block=[c + 1 for c in comp])
    chain = _chain_from_steps(n, steps)
    for link in chain.links:
        if not is_invariant_ideal(t, link, tol):
            raise CertificateFailure("chain link is not invariant", link=link.one_based())
    return chain


def _block_scale(S, tol, scale):
    return tol.zero * (scale if scale is not None else max(inf_norm(S), 1.0))


def refine_to_maximal_chain(chain: IdealChain, S, tol: Tolerances = DEFAULT_TOL,
                            scale: float | None = None) -> IdealChain:
    """Insert single-coordinate steps, in increasing order, into every gap whose
    quotient block of S vanishes. ``scale`` sets the absolute size below which an
    entry of S counts as zero (tol.zero times it); by default ||S|| is used."""
    s = as_array(S)
    thresh = _block_scale(s, tol, scale)
    steps = []
    for gap in chain.gaps():
        block = s[np.ix_(gap, gap)]
        if np.abs(block).max() > thresh:
            raise QuotientNotScalarZero("quotient block of S is not zero",
                                        block=[c + 1 for c in gap], size=float(np.abs(block).max()))
        steps.extend([c] for c in gap)
    refined = _chain_from_steps(chain.n, steps)
    check = Tolerances(zero=thresh)
    for link in refined.links:
        if not is_invariant_ideal(s, link, check):
            raise QuotientNotScalarZero("refined link is not S-invariant", link=link.one_based())
    return refined


@dataclass
class NilpotencyCertificate:
    commutator: np.ndarray
    chain: IdealChain
    permuted_form: list  # 0-based coordinate order making S strictly upper triangular
    radius: float
    index: int

    def to_dict(self) -> dict:
        return {
            "commutator": self.commutator.tolist(),
            "chain": self.chain.to_list(),
            "maximal": self.chain.maximal,
            "permuted_form": [p + 1 for p in self.permuted_form],
            "radius": self.radius,
            "index": self.index,
        }


def semi_commuting_sign(T, K, tol: Tolerances = DEFAULT_TOL) -> int:
    """+1 if TK >= KT, -1 if TK <= KT, 0 if both (commuting); raises otherwise."""
    t, k = as_array(T), as_array(K)
    s = t @ k - k @ t
    slack = tol.zero * max(inf_norm(t) * inf_norm(k), 1.0)
    up, down = s.min() >= -slack, s.max() <= slack
    if up and down:
        return 0
    if up:
        return 1
    if down:
        return -1
    raise PreconditionViolation("T and K do not semi-commute",
                                most_negative=float(s.min()), most_positive=float(s.max()))


def nilpotency_index(S, n: int) -> int:
    """Smallest p <= n with ||S^p|| <= 1e-7 ||S||^p (1 when S vanishes)."""
    s = as_array(S)
    norm = inf_norm(s)
    if norm == 0.0:
        return 1
    power = np.eye(s.shape[0])
    for p in range(1, n + 1):
        power = power @ s
        if inf_norm(power) <= INDEX_RTOL * norm ** p:
            return p
    raise CertificateFailure("commutator is not nilpotent within n powers", n=n)


def commutator_nilpotency(T, K, tol: Tolerances = DEFAULT_TOL) -> NilpotencyCertificate:
    t, k = as_array(T), as_array(K)
    if t.shape != k.shape:
        raise PreconditionViolation("T and K differ in size")
    if t.min() < -tol.zero or k.min() < -tol.zero or not t.any() or not k.any():
        raise PreconditionViolation("T and K must be nonzero positive matrices")
    semi_commuting_sign(t, k, tol)
    n = t.shape[0]
    s = t @ k - k @ t
    scale = max(inf_norm(t) * inf_norm(k), 1.0)
    if inf_norm(s) <= tol.zero * scale:
        s_eff = np.zeros_like(s)
    else:
        s_eff = s
    base = invariant_ideal_chain(t + k, tol)
    try:
        chain = refine_to_maximal_chain(base, s_eff, tol, scale=scale)
    except QuotientNotScalarZero as exc:
        raise CertificateFailure("commutator has a nonzero quotient block", **exc.diagnostics) from exc
    order = [g[0] for g in chain.gaps()]
    permuted = s_eff[np.ix_(order, order)]
    if np.abs(np.tril(permuted)).max() > tol.zero * scale:
        raise CertificateFailure("permuted commutator is not strictly upper triangular")
    radius = spectral_radius(s_eff, tol)
    if radius > RADIUS_RTOL * max(1.0, inf_norm(s_eff)):
        raise CertificateFailure("commutator spectral radius is not small", radius=radius)
    index = nilpotency_index(s_eff, n)
    return NilpotencyCertificate(s, chain, order, radius, index)
