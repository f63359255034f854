"""Prange-style decoding for large sum-rank weights, and the easy/hard regions.

The decoder fixes the error on an information set of kappa blocks to a
random vector of chosen partial weight and solves for the remaining blocks.
Those come out uniformly random, so the total weight concentrates around
w1 + abar * (ell - kappa), which makes a whole interval of weights reachable
in expected polynomial time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import galois as gf
from .counting import error_set_sizes, mean_rank
from .sumrank import rank_profile, sample_error


def abar(q: int, m: int, eta: int) -> Fraction:
    """Mean rank of one uniformly random block."""
    return mean_rank(q, m, eta)


def easy_interval(q: int, m: int, eta: int, R: Fraction) -> Tuple[Fraction, Fraction]:
    """Relative weights reachable by the Prange-style decoder at rate R."""
    R = Fraction(R)
    if not 0 <= R <= 1:
        raise ValueError("rate must lie in [0, 1]")
    lo = (1 - R) * abar(q, m, eta) / eta
    return lo, lo + R * min(m, eta) / eta


def gv_radius(q: int, m: int, eta: int, ell: int, k: int) -> int:
    """Smallest w whose sum-rank ball volume reaches q^(m(n-k))."""
    n = ell * eta
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    target = q ** (m * (n - k))
    ball = 0
    for w, size in enumerate(error_set_sizes(q, m, eta, ell)):
        ball += size
        if ball >= target:
            return w
    raise AssertionError("ball of full radius is the whole space")


@dataclass(frozen=True)
class RegionRow:
    R: Fraction
    w_gv: Fraction
    w_easy_minus: Fraction
    w_easy_plus: Fraction


def region_report(q: int, m: int, eta: int, grid: float = 0.01, ell: int = 100) -> List[RegionRow]:
    """Relative GV radius and easy interval at rates kappa/ell on a grid.

    Rates are snapped to the nearest kappa/ell so that k = kappa * eta is an
    integer; the GV column uses exact ball volumes at length ell * eta.
    """
    steps = round(1 / grid)
    n = ell * eta
    rows = []
    seen = set()
    for i in range(steps + 1):
        kappa = round(Fraction(i, steps) * ell)
        if kappa in seen:
            continue
        seen.add(kappa)
        R = Fraction(kappa, ell)
        lo, hi = easy_interval(q, m, eta, R)
        rows.append(RegionRow(R, Fraction(gv_radius(q, m, eta, ell, kappa * eta), n), lo, hi))
    return rows


@dataclass
class PrangeResult:
    error: Optional[List[int]]
    iterations: int
    weights: List[int]

    @property
    def success(self) -> bool:
        return self.error is not None


def prange_decode(F, H: gf.Matrix, s: Sequence[int], w: int, eta: int, rng: np.random.Generator,
                  max_iters: int = 10_000, mode: str = "uniform",
                  trace: Optional[Callable[[List[int]], None]] = None) -> PrangeResult:
    """Search for e with e H^T = s and sum-rank weight exactly w.

    mode "uniform" draws the partial weight w1 uniformly from 0..kappa*mu;
    "concentrated" fixes it to w - abar*(ell - kappa), rounded and clipped.
    `trace` is called with every candidate error.
    """
    m = F.degree
    q = F.base.order
    r, n = len(H), len(H[0])
    if n % eta or r % eta:
        raise ValueError("n and n-k must be multiples of eta")
    ell, kappa = n // eta, (n - r) // eta
    mu = min(m, eta)
    target_w1 = w - abar(q, m, eta) * (ell - kappa)
    if w == 0 and not any(s):
        return PrangeResult([0] * n, 1, [0])
    weights = []
    for it in range(1, max_iters + 1):
        while True:
            perm = [int(b) for b in rng.permutation(ell)]
            cols = [b * eta + j for b in perm for j in range(eta)]
            A = [[row[c] for c in cols[:r]] for row in H]
            A_inv = gf.inverse(F, A) if r else []
            if A_inv is not None:
                break
        B = [[row[c] for c in cols[r:]] for row in H]
        if mode == "uniform":
            w1 = int(rng.integers(0, kappa * mu + 1))
        elif mode == "concentrated":
            w1 = min(max(round(target_w1), 0), kappa * mu)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        e_info = sample_error(q, m, eta, kappa, w1, rng) if kappa else []
        rhs = [F.sub(a, b) for a, b in zip(s, gf.vecmat(F, e_info, gf.transpose(B)))] if B and kappa else list(s)
        e_red = gf.vecmat(F, rhs, gf.transpose(A_inv)) if r else []
        e = [0] * n
        for c, val in zip(cols, e_red + e_info):
            e[c] = val
        if trace is not None:
            trace(e)
        wt = sum(rank_profile(F, e, eta))
        weights.append(wt)
        if wt == w:
            return PrangeResult(e, it, weights)
    return PrangeResult(None, max_iters, weights)
