"""Randomized sub-support decoding of linearized Reed-Solomon codes.

An iteration guesses a sub-support U of sum dimension u and hands it to an
error-erasure decoder.  Decoding succeeds when the part of U inside the error
support is large enough: with eps = sum_dim(U n E), the decoder needs
2(w - eps) + u <= n - k.  The real decoder sits behind `DecoderPort`; the
shipped `GenieOracle` applies exactly that condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .counting import (
    count_compositions,
    intersect_prob,
    log2,
    partitions,
    perm_count,
    subspace_prob,
)
from .sumrank import Support, guess_side, intersect, random_support, sum_dim
from .wcbounds import BoundReport, IterCost

Profile = Tuple[int, ...]


@dataclass(frozen=True)
class LrsParams:
    q: int
    m: int
    eta: int
    ell: int
    k: int

    def __post_init__(self):
        if self.ell > self.q - 1:
            raise ValueError(f"need ell <= q-1 (ell={self.ell}, q={self.q})")
        if self.eta > self.m:
            raise ValueError(f"need eta <= m (eta={self.eta}, m={self.m})")
        if not 0 < self.k <= self.n:
            raise ValueError("need 0 < k <= n")

    @property
    def n(self) -> int:
        return self.ell * self.eta

    @property
    def mu(self) -> int:
        return min(self.m, self.eta)

    @property
    def d_min(self) -> int:
        return self.n - self.k + 1

    @property
    def tau(self) -> int:
        return (self.n - self.k) // 2

    def excess(self, w: int) -> int:
        return w - self.tau


def eps_min(w: int, u: int, n: int, k: int) -> Fraction:
    """Smallest intersection dimension that lets the decoder succeed."""
    return Fraction(2 * w + u - (n - k), 2)


def decodable(w: int, u: int, eps: int, n: int, k: int) -> bool:
    return 2 * (w - eps) + u <= n - k


def success_prob_profiles(q: int, mu: int, w: Sequence[int], u: Sequence[int], n: int, k: int) -> Fraction:
    """Pr[sum_dim(U n E) >= eps_min] for fixed E of profile w and uniform U of profile u."""
    if len(w) != len(u):
        raise ValueError("profiles must have equal length")
    poly = [Fraction(1)]
    for a, b in zip(w, u):
        kern = [intersect_prob(q, mu, a, b, j) for j in range(min(a, b) + 1)]
        nxt = [Fraction(0)] * (len(poly) + len(kern) - 1)
        for i, x in enumerate(poly):
            if x:
                for j, y in enumerate(kern):
                    nxt[i + j] += x * y
        poly = nxt
    start = max(0, math.ceil(eps_min(sum(w), sum(u), n, k)))
    return sum(poly[start:], Fraction(0))


def phi_sub(q: int, mu: int, u: Sequence[int], w: Sequence[int]) -> Fraction:
    """Probability that a random support of profile u lies inside a fixed one of profile w."""
    out = Fraction(1)
    for ui, wi in zip(u, w):
        if ui > wi:
            return Fraction(0)
        out *= subspace_prob(q, mu, ui, wi)
    return out


def _drop_gain(q: int, mu: int, wi: int, ui: int) -> Fraction:
    # factor by which phi_sub grows when u_i drops by one
    return Fraction(q ** (mu - ui + 1) - 1, q ** (wi - ui + 1) - 1)


def ucomp(q: int, mu: int, w: Sequence[int], u: int, rng: Optional[np.random.Generator] = None) -> Profile:
    """Profile of total u, entrywise <= w, maximising phi_sub(., w).

    Starts from w and repeatedly lowers an entry with the largest gain; the
    gains shrink as an entry is lowered, so this is optimal.  Ties are broken
    uniformly at random when `rng` is given, else by lowest index.
    """
    if u > sum(w) or u < 0:
        raise ValueError(f"cannot shrink {tuple(w)} to total {u}")
    cur = list(w)
    for _ in range(sum(w) - u):
        best: List[int] = []
        best_gain = None
        for i, ui in enumerate(cur):
            if ui == 0:
                continue
            g = _drop_gain(q, mu, w[i], ui)
            if best_gain is None or g > best_gain:
                best, best_gain = [i], g
            elif g == best_gain:
                best.append(i)
        pick = best[int(rng.integers(0, len(best)))] if rng is not None else best[0]
        cur[pick] -= 1
    return tuple(cur)


def qtilde(q: int, ell: int, mu: int, w: int, u: int) -> Fraction:
    """Sum over weight-w profiles of 1 / phi_sub(ucomp(w, u), w).

    Groups blocks by their error rank, smallest first.  The optimal shrink
    empties groups of small rank before touching larger ones and levels the
    kept dimensions inside a group, so each group contributes a closed-form
    factor.  The table is keyed by (weight left, blocks left, smallest rank
    allowed, kept dimension left); the result is ell! times the table root.
    """
    if u > w:
        raise ValueError("need u <= w")

    def group_factor(r: int, size: int, keep: int) -> Fraction:
        base, extra = divmod(keep, size) if size else (0, 0)
        f = Fraction(1)
        for i in range(size):
            ui = base + (1 if i < extra else 0)
            f /= subspace_prob(q, mu, ui, r)
        return f / math.factorial(size)

    @lru_cache(maxsize=None)
    def table(w_: int, l_: int, r: int, u_: int) -> Fraction:
        if r > mu:
            return Fraction(1) if w_ == 0 and l_ == 0 else Fraction(0)
        if w_ > l_ * mu:
            return Fraction(0)
        acc = Fraction(0)
        for size in range(l_ + 1):
            if size * r > w_:
                break
            keep = max(u_ - (w_ - size * r), 0)
            rest = table(w_ - size * r, l_ - size, r + 1, u_ - keep)
            if rest:
                acc += group_factor(r, size, keep) * rest
        return acc

    return math.factorial(ell) * table(w, ell, 0, u)


def design_distribution(q: int, ell: int, mu: int, w: int, u: int) -> List[Tuple[Profile, Fraction]]:
    """Design weights beta over sorted profiles, already multiplied by the number
    of rearrangements (beta is permutation invariant)."""
    Qt = qtilde(q, ell, mu, w, u)
    out = []
    for prof in partitions(w, ell, mu):
        val = Fraction(perm_count(prof)) / (phi_sub(q, mu, ucomp(q, mu, prof, u), prof) * Qt)
        out.append((prof, val))
    return out


def draw_random_support(q: int, mu: int, ell: int, w: int, u: int, side: str,
                        rng: np.random.Generator) -> Support:
    """Sub-support of sum dimension u drawn through the design distribution."""
    prof = draw_design_profile(q, mu, ell, w, u, rng)
    return random_support(q, mu, side, prof, rng)


def draw_design_profile(q: int, mu: int, ell: int, w: int, u: int, rng: np.random.Generator) -> Profile:
    dist = _design_cdf(q, ell, mu, w, u)
    r = Fraction(float(rng.random()))
    prof = dist[-1][0]
    for p, c in dist:
        if r < c:
            prof = p
            break
    shuffled = list(prof)
    rng.shuffle(shuffled)
    return ucomp(q, mu, shuffled, u, rng)


@lru_cache(maxsize=64)
def _design_cdf(q: int, ell: int, mu: int, w: int, u: int) -> Tuple[Tuple[Profile, Fraction], ...]:
    acc = Fraction(0)
    out = []
    for prof, p in design_distribution(q, ell, mu, w, u):
        acc += p
        out.append((prof, acc))
    return tuple(out)


def wc_bounds_randomized(q: int, m: int, n: int, k: int, ell: int, w: int, u: int,
                         cost: str = "rand_n3m2") -> BoundReport:
    """log2 lower/upper worst-case work of the genie-aided randomized decoder.

    As stated by the source bound, the lower bound carries no per-iteration
    cost factor.
    """
    p = LrsParams(q, m, n // ell, ell, k)
    xi = p.excess(w)
    if u != 2 * xi or u > w:
        raise ValueError(f"bounds hold for u = 2*(w - tau) = {2 * xi} <= w")
    c = IterCost.of(cost, q, m, n, k)
    Qt = qtilde(q, ell, p.mu, w, u)
    return BoundReport(c, {
        "lb": log2(Qt) - log2(count_compositions(w, ell, p.mu)),
        "ub": c.log2 + log2(Qt),
    })


# decoding loop

class DecoderPort:
    """Error-erasure decoder contract: return a codeword or None."""

    def decode(self, y: Sequence[int], guess: Support) -> Optional[List[int]]:
        raise NotImplementedError


class GenieOracle(DecoderPort):
    """Knows the planted (codeword, error support) and applies the success condition."""

    def __init__(self, codeword: Sequence[int], error_support: Support, n: int, k: int):
        self.codeword = list(codeword)
        self.E = error_support
        self.w = sum_dim(error_support)
        self.n, self.k = n, k
        self.last_eps: Optional[int] = None

    def decode(self, y, guess):
        eps = sum_dim(intersect(guess, self.E))
        self.last_eps = eps
        return list(self.codeword) if decodable(self.w, sum_dim(guess), eps, self.n, self.k) else None


@dataclass
class RandDecodeResult:
    codeword: Optional[List[int]]
    iterations: int
    success: bool


def randomized_decode(params: LrsParams, y: Sequence[int], w: int, u: int, port: DecoderPort,
                      rng: np.random.Generator, max_iters: int = 10**6,
                      profile: Optional[Sequence[int]] = None,
                      weight_of=None) -> RandDecodeResult:
    """Guess sub-supports until the port returns a codeword at distance w.

    Guesses come from the design distribution, or are uniform permutations of
    a fixed `profile` when one is given.  `weight_of(y, c)` checks the
    distance; without it any returned codeword is accepted.
    """
    side = guess_side(params.m, params.eta)
    mu = params.mu
    for it in range(1, max_iters + 1):
        if profile is None:
            prof = draw_design_profile(params.q, mu, params.ell, w, u, rng)
        else:
            prof = list(profile)
            rng.shuffle(prof)
        U = random_support(params.q, mu, side, prof, rng)
        c = port.decode(y, U)
        if c is not None and (weight_of is None or weight_of(y, c) == w):
            return RandDecodeResult(c, it, True)
    return RandDecodeResult(None, max_iters, False)
