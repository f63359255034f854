"""Exact counting over F_q: Gaussian binomials, rank counts, profile sets.

Counts are Python ints and probabilities are `fractions.Fraction`; floats
only appear through `log2` and `gamma_q`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple, Union

Number = Union[int, Fraction]
Profile = Tuple[int, ...]


@lru_cache(maxsize=None)
def gauss_binom(a: int, b: int, q: int) -> int:
    """Number of b-dimensional subspaces of F_q^a (0 when b > a or b < 0)."""
    if b < 0 or b > a:
        return 0
    b = min(b, a - b)
    num = den = 1
    for i in range(b):
        num *= q ** (a - i) - 1
        den *= q ** (b - i) - 1
    return num // den


def gamma_q(q: int, tol: float = 1e-12) -> float:
    """The infinite product prod_{i>=1} (1 - q^-i)^-1."""
    acc, i = 1.0, 1
    while True:
        f = 1.0 / (1.0 - float(q) ** -i)
        acc *= f
        if f - 1.0 < tol * 1e-3:
            return acc
        i += 1


@lru_cache(maxsize=None)
def nm_q(q: int, m: int, eta: int, w: int) -> int:
    """Number of m x eta matrices over F_q of rank exactly w."""
    if w < 0 or w > min(m, eta):
        return 0
    out = 1
    for j in range(w):
        out *= (q**m - q**j) * (q**eta - q**j)
    for j in range(w):
        out //= q**w - q**j
    return out


@lru_cache(maxsize=None)
def error_set_sizes(q: int, m: int, eta: int, ell: int) -> Tuple[int, ...]:
    """|E(w)| for w = 0..ell*mu: coefficients of (sum_j NM(j) x^j)^ell."""
    mu = min(m, eta)
    block = [nm_q(q, m, eta, j) for j in range(mu + 1)]
    result = [1]
    power = block
    e = ell
    while e:
        if e & 1:
            result = _polymul(result, power)
        e >>= 1
        if e:
            power = _polymul(power, power)
    return tuple(result)


def _polymul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def mean_rank(q: int, m: int, eta: int) -> Fraction:
    """Mean rank of a uniformly random m x eta matrix over F_q."""
    mu = min(m, eta)
    return Fraction(sum(j * nm_q(q, m, eta, j) for j in range(mu + 1)), q ** (m * eta))


def error_set_size(q: int, m: int, eta: int, ell: int, w: int) -> int:
    """Number of vectors in F_{q^m}^{ell*eta} of sum-rank weight exactly w."""
    sizes = error_set_sizes(q, m, eta, ell)
    return sizes[w] if 0 <= w < len(sizes) else 0


def profile_prob(q: int, m: int, eta: int, profile: Sequence[int]) -> Fraction:
    """Probability that a uniform weight-w error has the given rank profile."""
    num = 1
    for wi in profile:
        num *= nm_q(q, m, eta, wi)
    return Fraction(num, error_set_size(q, m, eta, len(profile), sum(profile)))


# rank-profile sets

def compositions(t: int, ell: int, mu: int) -> Iterator[Profile]:
    """All length-ell vectors in [0, mu]^ell summing to t, in decreasing lex order."""
    if ell == 0:
        if t == 0:
            yield ()
        return
    for first in range(min(t, mu), -1, -1):
        rest = t - first
        if rest > (ell - 1) * mu:
            break
        for tail in compositions(rest, ell - 1, mu):
            yield (first,) + tail


def partitions(t: int, ell: int, mu: int, cap: int | None = None) -> Iterator[Profile]:
    """Non-increasing length-ell vectors in [0, mu]^ell summing to t."""
    top = mu if cap is None else min(mu, cap)
    if ell == 0:
        if t == 0:
            yield ()
        return
    for first in range(min(t, top), -1, -1):
        rest = t - first
        if rest > (ell - 1) * first:
            break
        for tail in partitions(rest, ell - 1, mu, first):
            yield (first,) + tail


@lru_cache(maxsize=None)
def count_compositions(t: int, ell: int, mu: int) -> int:
    """|W_{t,ell,mu}| by inclusion-exclusion."""
    if t < 0 or t > ell * mu:
        return 0
    total = 0
    for j in range(ell + 1):
        r = t - j * (mu + 1)
        if r < 0:
            break
        total += (-1) ** j * math.comb(ell, j) * math.comb(r + ell - 1, ell - 1)
    return total


def profile_count_bound(w: int, ell: int, mu: int) -> int:
    return math.comb(ell + w - 1, ell - 1)


def perm_count(profile: Sequence[int]) -> int:
    """Number of distinct rearrangements of a profile."""
    out = math.factorial(len(profile))
    for c in _multiplicities(profile):
        out //= math.factorial(c)
    return out


def _multiplicities(profile: Sequence[int]) -> List[int]:
    counts: dict = {}
    for x in profile:
        counts[x] = counts.get(x, 0) + 1
    return list(counts.values())


def ordered(profile: Sequence[int]) -> Profile:
    return tuple(sorted(profile, reverse=True))


# subspace kernels

@lru_cache(maxsize=None)
def subspace_prob(q: int, mu: int, a: int, b: int) -> Fraction:
    """Pr[a fixed a-dim subspace of F_q^mu lies in a uniform b-dim one]."""
    if a < 0 or b < 0 or a > mu or b > mu:
        return Fraction(0)
    return Fraction(gauss_binom(b, a, q), gauss_binom(mu, a, q))


@lru_cache(maxsize=None)
def intersect_prob(q: int, mu: int, a: int, b: int, j: int) -> Fraction:
    """Pr[dim(A n B) = j] for fixed A of dim a and uniform B of dim b in F_q^mu."""
    if j < 0 or j > min(a, b) or a > mu or b > mu:
        return Fraction(0)
    num = gauss_binom(mu - a, b - j, q) * gauss_binom(a, j, q) * q ** ((a - j) * (b - j))
    return Fraction(num, gauss_binom(mu, b, q))


def log2(x: Number) -> float:
    """log2 of a positive int or Fraction without float overflow."""
    if isinstance(x, Fraction):
        return _log2_int(x.numerator) - _log2_int(x.denominator)
    return _log2_int(int(x))


def _log2_int(n: int) -> float:
    if n <= 0:
        return -math.inf if n == 0 else math.nan
    return math.log2(n)
