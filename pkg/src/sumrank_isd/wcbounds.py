"""Worst-case work factors of support-guessing generic decoding."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from .counting import (
    count_compositions,
    gamma_q,
    gauss_binom,
    log2,
    partitions,
    perm_count,
    profile_count_bound,
    subspace_prob,
)

Profile = Tuple[int, ...]

COST_MODELS = {
    "gen_n3m3": "n^3 m^3",
    "erasure_nk3m3": "(n-k)^3 m^3",
    "erasure_nk3m3_logq": "(n-k)^3 m^3 log2(q)",
    "rand_n3m2": "n^3 m^2",
    "ee_m2n2": "m^2 n^2",
}


@dataclass(frozen=True)
class IterCost:
    """Per-iteration cost model; `log2` is the log2 of one iteration's cost."""

    tag: str
    log2: float

    @classmethod
    def of(cls, tag: str, q: int, m: int, n: int, k: int) -> "IterCost":
        r = n - k
        values = {
            "gen_n3m3": n**3 * m**3,
            "erasure_nk3m3": r**3 * m**3,
            "erasure_nk3m3_logq": r**3 * m**3 * math.log2(q),
            "rand_n3m2": n**3 * m**2,
            "ee_m2n2": m**2 * n**2,
        }
        if tag.startswith("custom:"):
            return cls(tag, float(tag.split(":", 1)[1]))
        if tag not in values:
            raise ValueError(f"unknown cost model {tag!r}")
        return cls(tag, math.log2(values[tag]))


@dataclass
class BoundReport:
    """log2 work factors keyed by bound name, with the cost model used."""

    cost: IterCost
    values: Dict[str, float] = field(default_factory=dict)
    notes: str = ""

    def __getitem__(self, key: str) -> float:
        return self.values[key]


def v_max(m: int, eta: int, n: int, k: int) -> int:
    """Largest guessed support dimension erasure decoding can use."""
    return min(n - k, (m * (n - k)) // eta)


def phi(q: int, mu: int, v: Sequence[int], w: Sequence[int]) -> Fraction:
    """Probability that a support of profile w lies in a random one of profile v."""
    if len(v) != len(w):
        raise ValueError("profiles must have equal length")
    out = Fraction(1)
    for vi, wi in zip(v, w):
        if wi > vi:
            return Fraction(0)
        out *= subspace_prob(q, mu, wi, vi)
    return out


def scomp(q: int, mu: int, w: Sequence[int], v: int) -> Profile:
    """Profile of total v maximising phi(., w); greedy on exact marginal gains.

    Raising v_i by one multiplies phi by [v_i+1, w_i]/[v_i, w_i], a ratio
    that shrinks as v_i grows, so taking the best ratio each step is optimal.
    """
    ell = len(w)
    if v < sum(w) or v > ell * mu:
        raise ValueError(f"no profile of total {v} can cover {tuple(w)} with mu={mu}")
    cur = list(w)
    for _ in range(v - sum(w)):
        best, best_gain = -1, None
        for i in range(ell):
            if cur[i] < mu:
                g = Fraction(gauss_binom(cur[i] + 1, w[i], q), gauss_binom(cur[i], w[i], q))
                if best_gain is None or g > best_gain:
                    best, best_gain = i, g
        cur[best] += 1
    return tuple(cur)


def phi_max(q: int, mu: int, w: Sequence[int], v: int) -> Fraction:
    return phi(q, mu, scomp(q, mu, w, v), w)


def q_factor(q: int, ell: int, mu: int, w: int, v: int) -> Fraction:
    """Sum over all weight-w profiles of 1/phi_max, summed over sorted profiles."""
    if v < w:
        raise ValueError("need w <= v")
    total = Fraction(0)
    for prof in partitions(w, ell, mu):
        total += perm_count(prof) / phi_max(q, mu, prof, v)
    return total


def wc_bounds(q: int, m: int, n: int, k: int, ell: int, w: int, v: int,
              cost: str = "gen_n3m3") -> BoundReport:
    """The four worst-case work factors (log2) for block count ell."""
    if n % ell:
        raise ValueError("ell must divide n")
    eta = n // ell
    mu = min(m, eta)
    if not w <= v <= v_max(m, eta, n, k):
        raise ValueError(f"need w <= v <= v_max={v_max(m, eta, n, k)}")
    c = IterCost.of(cost, q, m, n, k)
    Q = q_factor(q, ell, mu, w, v)
    n_profiles = count_compositions(w, ell, mu)
    simple_core = log2(profile_count_bound(w, ell, mu)) + w * (mu - v / ell) * math.log2(q)
    g_ell = ell * math.log2(gamma_q(q))
    tighter = w * math.log2((1 - q ** -mu) / (1 - 1 / q))
    return BoundReport(c, {
        "lb": c.log2 + log2(Q) - log2(n_profiles),
        "ub": c.log2 + log2(Q),
        "ub_simple": c.log2 + simple_core + g_ell,
        "ub_improved": c.log2 + simple_core + min(g_ell, tighter),
    })


def prange_reference(q: int, m: int, n: int, k: int, w: int, v: int,
                     cost: str = "erasure_nk3m3_logq") -> float:
    """log2 of the Hamming-metric Prange estimate cost * C(n, w) / C(v, w)."""
    c = IterCost.of(cost, q, m, n, k)
    return c.log2 + log2(Fraction(math.comb(n, w), math.comb(v, w)))
