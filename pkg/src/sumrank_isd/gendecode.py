"""Generic support-guessing decoder for sum-rank-metric codes.

Each iteration guesses a super-support F of sum dimension v, solves the
syndrome equations for an error living in F, and accepts the candidate when
its sum-rank weight is exactly w.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import galois as gf
from .avgbounds import optimize_marginal
from .counting import ordered, partitions, perm_count
from .sumrank import (
    ROW,
    Code,
    Support,
    guess_side,
    random_support,
    rank_profile,
)
from .wcbounds import phi, q_factor, scomp


class Outcome(enum.Enum):
    DECODED = "decoded"
    RANK_DEFICIENT = "rank_deficient"
    INCONSISTENT = "inconsistent"
    WRONG_WEIGHT = "wrong_weight"


@dataclass
class GuessConfig:
    """How super-support profiles are drawn.

    mode "profile": uniform permutation of `profile` (default: heuristic
    profile for total v); "marginal": blockwise i.i.d. from `marginal`;
    "design": worst-case design law over error profiles mapped through scomp.
    """

    v: int
    mode: str = "profile"
    profile: Optional[Tuple[int, ...]] = None
    marginal: Optional[Tuple[Fraction, ...]] = None
    w: Optional[int] = None

    def draw(self, q: int, mu: int, ell: int, rng: np.random.Generator) -> List[int]:
        if self.mode == "profile":
            prof = list(self.profile)
            rng.shuffle(prof)
            return prof
        if self.mode == "marginal":
            p = np.array([float(x) for x in self.marginal])
            return [int(x) for x in rng.choice(len(p), size=ell, p=p / p.sum())]
        if self.mode == "design":
            laws = design_law(q, mu, ell, self.w, self.v)
            r = float(rng.random())
            prof = laws[-1][0]
            for p, c in _cumulative(laws):
                if r < c:
                    prof = p
                    break
            prof = list(prof)
            rng.shuffle(prof)
            return prof
        raise ValueError(f"unknown guess mode {self.mode!r}")


@lru_cache(maxsize=64)
def design_law(q: int, mu: int, ell: int, w: int, v: int) -> Tuple[Tuple[Tuple[int, ...], Fraction], ...]:
    """Worst-case design law, pushed through scomp to sorted guess profiles.

    Error profile p gets weight proportional to 1/phi_max(p); the guess is
    scomp(p, v).  Weights already include the number of rearrangements.
    """
    Q = q_factor(q, ell, mu, w, v)
    out = []
    for prof in partitions(w, ell, mu):
        guess = scomp(q, mu, prof, v)
        out.append((ordered(guess), perm_count(prof) / (phi(q, mu, guess, prof) * Q)))
    return tuple(out)


def _cumulative(law):
    acc = 0.0
    for p, x in law:
        acc += float(x)
        yield p, acc


def make_guess(q: int, m: int, eta: int, ell: int, w: int, v: int) -> GuessConfig:
    """Heuristic fixed-profile guessing for total v."""
    return GuessConfig(v, "profile", optimize_marginal(q, m, eta, ell, w, v).profile)


def _element(F, coords: Sequence[int]) -> int:
    return F.from_coeffs(list(coords))


def erasure_decode(code: Code, syndrome: Sequence[int], F_sup: Support) -> Tuple[Outcome, Optional[List[int]]]:
    """Find the unique error inside the guessed support with the given syndrome."""
    F = code.field
    n, eta, r = code.n, code.eta, code.n - code.k
    if F_sup.side == ROW:
        # e = a B with B block-diagonal over F_q, unknown a in F_{q^m}^v
        B_rows = []
        for i, basis in enumerate(F_sup.bases):
            for row in basis:
                full = [0] * n
                full[i * eta : (i + 1) * eta] = row
                B_rows.append(full)
        if not B_rows:
            return (Outcome.DECODED, [0] * n) if not any(syndrome) else (Outcome.INCONSISTENT, None)
        M = gf.matmul(F, B_rows, gf.transpose(code.H))  # v x (n-k)
        sol = gf.solve(F, gf.transpose(M), list(syndrome))
        if sol is None:
            return Outcome.INCONSISTENT, None
        a, ker = sol
        if ker:
            return Outcome.RANK_DEFICIENT, None
        return Outcome.DECODED, gf.vecmat(F, a, B_rows)
    # column side: block i is sum_t g_t X_i[t, :] with g_t in F_{q^m} from the
    # basis of the guessed column space and X_i over F_q unknown
    base = F.base
    m = F.degree
    unknowns = []  # (position j, element g)
    for i, basis in enumerate(F_sup.bases):
        gs = [_element(F, row) for row in basis]
        for g in gs:
            for j in range(eta):
                unknowns.append((i * eta + j, g))
    if not unknowns:
        return (Outcome.DECODED, [0] * n) if not any(syndrome) else (Outcome.INCONSISTENT, None)
    A = [[0] * len(unknowns) for _ in range(r * m)]
    for col, (j, g) in enumerate(unknowns):
        for row_idx in range(r):
            coeffs = F.expand(F.mul(g, code.H[row_idx][j]))
            for c, val in enumerate(coeffs):
                A[row_idx * m + c][col] = val
    rhs = [c for s in syndrome for c in F.expand(s)]
    sol = gf.solve(base, A, rhs)
    if sol is None:
        return Outcome.INCONSISTENT, None
    x, ker = sol
    if ker:
        return Outcome.RANK_DEFICIENT, None
    e = [0] * n
    for xv, (j, g) in zip(x, unknowns):
        if xv:
            e[j] = F.add(e[j], F.mul(g, xv))
    return Outcome.DECODED, e


@dataclass
class DecodeResult:
    codeword: Optional[List[int]]
    error: Optional[List[int]]
    iterations: int
    rank_deficient: int = 0
    outcomes: dict = field(default_factory=dict)

    @property
    def success(self) -> bool:
        return self.codeword is not None


def generic_decode(code: Code, y: Sequence[int], w: int, guess: GuessConfig,
                   rng: np.random.Generator, max_iters: int = 100_000) -> DecodeResult:
    """Guess super-supports until erasure decoding yields an error of weight exactly w."""
    F = code.field
    side = guess_side(code.m, code.eta)
    mu = code.mu
    s = code.syndrome(y)
    counts = {o: 0 for o in Outcome}
    for it in range(1, max_iters + 1):
        prof = guess.draw(code.q, mu, code.ell, rng)
        sup = random_support(code.q, mu, side, prof, rng)
        outcome, e = erasure_decode(code, s, sup)
        if outcome is Outcome.DECODED and sum(rank_profile(F, e, code.eta)) != w:
            outcome = Outcome.WRONG_WEIGHT
        counts[outcome] += 1
        if outcome is Outcome.DECODED:
            c = [F.sub(a, b) for a, b in zip(y, e)]
            return DecodeResult(c, e, it, counts[Outcome.RANK_DEFICIENT], {o.value: k for o, k in counts.items()})
    return DecodeResult(None, None, max_iters, counts[Outcome.RANK_DEFICIENT],
                        {o.value: k for o, k in counts.items()})
