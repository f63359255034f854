"""Average-case (random-coding-union) analysis of support guessing.

The B recursions count, over all weight-w errors, the chance that a guessed
super-support contains the error support; the C recursions count the chance
that a guessed sub-support meets the error support in enough dimensions.
Both are exact rationals.  Guessing distributions come from a small integer
program over per-block rank counts x_0..x_mu.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .counting import (
    error_set_size,
    intersect_prob,
    log2,
    mean_rank,
    nm_q,
    partitions,
    subspace_prob,
)
from .wcbounds import BoundReport, IterCost, v_max

Profile = Tuple[int, ...]


def _check_marginal(marginal: Sequence, mu: int) -> None:
    if len(marginal) != mu + 1:
        raise ValueError(f"marginal must have {mu + 1} entries")
    if any(p < 0 for p in marginal) or sum(marginal) != 1:
        raise ValueError("marginal must be a probability vector")


def dp_B(q: int, m: int, eta: int, ell: int, w: int, v: int, marginal: Sequence[Fraction]) -> Fraction:
    """Sum over weight-w error profiles and total-v guess profiles of
    prod_i p[v_i] * NM(w_i) * lambda(w_i, v_i)."""
    mu = min(m, eta)
    _check_marginal(marginal, mu)
    memo: Dict[Tuple[int, int, int], Fraction] = {}

    def rec(w_: int, v_: int, l_: int) -> Fraction:
        if v_ < w_ or w_ > l_ * mu or v_ > l_ * mu:
            return Fraction(0)
        if l_ == 1:
            return marginal[v_] * nm_q(q, m, eta, w_) * subspace_prob(q, mu, w_, v_)
        key = (w_, v_, l_)
        if key not in memo:
            acc = Fraction(0)
            for a in range(min(mu, w_) + 1):
                for b in range(a, min(mu, v_) + 1):
                    if marginal[b]:
                        acc += marginal[b] * nm_q(q, m, eta, a) * subspace_prob(q, mu, a, b) * rec(w_ - a, v_ - b, l_ - 1)
            memo[key] = acc
        return memo[key]

    return rec(w, v, ell)


def dp_B_fixed_profile(q: int, m: int, eta: int, w: int, vhat: Sequence[int]) -> Fraction:
    """Sum over weight-w error profiles of prod_i NM(w_i) * lambda(w_i, vhat_i)."""
    mu = min(m, eta)
    row: Dict[int, Fraction] = {0: Fraction(1)}
    for vi in vhat:
        nxt: Dict[int, Fraction] = {}
        for done, val in row.items():
            for a in range(min(vi, w - done) + 1):
                nxt[done + a] = nxt.get(done + a, 0) + val * nm_q(q, m, eta, a) * subspace_prob(q, mu, a, vi)
        row = nxt
    return Fraction(row.get(w, 0))


# Boltzmann approximation of the per-block error rank law

@dataclass(frozen=True)
class BoltzmannParams:
    lam: float
    target: float
    residual: float


def _boltzmann(q: int, m: int, eta: int, lam: float) -> List[float]:
    mu = min(m, eta)
    logs = [math.log(nm_q(q, m, eta, j)) - lam * j for j in range(mu + 1)]
    top = max(logs)
    ws = [math.exp(x - top) for x in logs]
    s = sum(ws)
    return [x / s for x in ws]


def _mean(p: Sequence[float]) -> float:
    return sum(j * pj for j, pj in enumerate(p))


def boltzmann_marginal(q: int, m: int, eta: int, target: float, tol: float = 1e-9
                       ) -> Tuple[List[float], BoltzmannParams]:
    """Per-block rank law proportional to NM(j) exp(-lam j) with mean `target`."""
    mu = min(m, eta)
    if not 0 <= target <= mu:
        raise ValueError(f"target mean {target} outside [0, {mu}]")
    if target == 0:
        return [1.0] + [0.0] * mu, BoltzmannParams(math.inf, 0.0, 0.0)
    if target == mu:
        return [0.0] * mu + [1.0], BoltzmannParams(-math.inf, float(mu), 0.0)
    if Fraction(target) == mean_rank(q, m, eta):
        p = _boltzmann(q, m, eta, 0.0)
        return p, BoltzmannParams(0.0, float(target), _mean(p) - target)
    lo, hi = -1.0, 1.0
    while _mean(_boltzmann(q, m, eta, lo)) < target:
        lo *= 2
    while _mean(_boltzmann(q, m, eta, hi)) > target:
        hi *= 2
    assert _mean(_boltzmann(q, m, eta, lo)) >= _mean(_boltzmann(q, m, eta, hi))
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if _mean(_boltzmann(q, m, eta, mid)) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 * max(1.0, abs(mid)):
            break
    lam = 0.5 * (lo + hi)
    p = _boltzmann(q, m, eta, lam)
    res = _mean(p) - target
    if abs(res) > tol:
        raise ArithmeticError(f"bisection residual {res} above {tol}")
    return p, BoltzmannParams(lam, float(target), res)


# per-block objectives

def containment_gain(q: int, m: int, eta: int, error_law: Sequence[float]) -> List[float]:
    """g[v] = Pr[an error block (rank ~ error_law) lies in a random v-dim space]."""
    mu = min(m, eta)
    return [sum(pw * float(subspace_prob(q, mu, a, v)) for a, pw in enumerate(error_law)) for v in range(mu + 1)]


def intersection_gain(q: int, m: int, eta: int, error_law: Sequence[float]) -> List[float]:
    """g[u] = expected intersection dimension of an error block with a random u-dim space."""
    mu = min(m, eta)
    return [
        sum(pw * j * float(intersect_prob(q, mu, a, u, j)) for a, pw in enumerate(error_law) for j in range(min(a, u) + 1))
        for u in range(mu + 1)
    ]


@dataclass(frozen=True)
class MarginalSolution:
    x: Tuple[int, ...]
    objective: float
    boltzmann: BoltzmannParams

    @property
    def marginal(self) -> Tuple[Fraction, ...]:
        ell = sum(self.x)
        return tuple(Fraction(xi, ell) for xi in self.x)

    @property
    def profile(self) -> Profile:
        """Sorted profile listing value i exactly x_i times."""
        return tuple(i for i in range(len(self.x) - 1, -1, -1) for _ in range(self.x[i]))


def best_counts(gain: Sequence[float], ell: int, total: int) -> Tuple[Tuple[int, ...], float]:
    """max sum x_i gain_i over integers x >= 0 with sum x = ell, sum i x_i = total."""
    mu = len(gain) - 1
    if not 0 <= total <= ell * mu:
        raise ValueError(f"total {total} infeasible for {ell} blocks of size <= {mu}")
    # table[(count, weight)] = (value, x) after processing values 0..i
    table: Dict[Tuple[int, int], Tuple[float, Tuple[int, ...]]] = {(0, 0): (0.0, ())}
    for i in range(mu + 1):
        nxt: Dict[Tuple[int, int], Tuple[float, Tuple[int, ...]]] = {}
        for (c, s), (val, x) in table.items():
            for xi in range(ell - c + 1):
                if s + i * xi > total:
                    break
                key = (c + xi, s + i * xi)
                cand = (val + xi * gain[i], x + (xi,))
                if key not in nxt or cand[0] > nxt[key][0]:
                    nxt[key] = cand
        table = nxt
    val, x = table[(ell, total)]
    return x, val


def optimize_marginal(q: int, m: int, eta: int, ell: int, w: int, v: int,
                      objective: str = "containment") -> MarginalSolution:
    """Integer counts x_i maximising the per-block objective under the
    Boltzmann error law of mean w/ell."""
    law, params = boltzmann_marginal(q, m, eta, w / ell)
    if objective == "containment":
        gain = containment_gain(q, m, eta, law)
    elif objective == "intersection":
        gain = intersection_gain(q, m, eta, law)
    else:
        raise ValueError(f"unknown objective {objective!r}")
    x, val = best_counts(gain, ell, v)
    return MarginalSolution(x, val, params)


def optimize_profile_exact(q: int, m: int, eta: int, ell: int, w: int, v: int,
                           max_profiles: int = 200_000) -> Profile:
    """Sorted guess profile maximising the exact one-shot containment count.

    The objective is linear in the guessing distribution, so a point mass on a
    single sorted profile (a vertex of the simplex) is optimal.
    """
    mu = min(m, eta)
    best, best_val, seen = None, Fraction(-1), 0
    for prof in partitions(v, ell, mu):
        seen += 1
        if seen > max_profiles:
            raise ValueError(f"more than {max_profiles} candidate profiles")
        val = dp_B_fixed_profile(q, m, eta, w, prof)
        if val > best_val:
            best, best_val = prof, val
    if best is None:
        raise ValueError("no feasible guess profile")
    return best


def _report(cost: IterCost, success: Fraction, E: int, q: int, m: int, n: int, k: int, notes: str) -> BoundReport:
    if success == 0:
        return BoundReport(cost, {"lb": math.inf, "ub": math.inf}, notes)
    ub = cost.log2 - log2(success / E)
    # lb = cost - log2((1/E + q^-m(n-k)) success), written as ub minus a
    # nonnegative correction so rounding cannot push it above ub
    ratio = Fraction(E, q ** (m * (n - k)))
    lb = ub - (math.log1p(ratio) / math.log(2) if ratio < 1 else log2(1 + ratio))
    return BoundReport(cost, {"lb": lb, "ub": ub}, notes)


def rcu_bounds_generic(q: int, m: int, n: int, k: int, ell: int, w: int, v: Optional[int] = None,
                       profile: Optional[Sequence[int]] = None,
                       marginal: Optional[Sequence[Fraction]] = None,
                       cost: str = "erasure_nk3m3") -> BoundReport:
    """RCU work-factor bounds of generic decoding (log2 'lb' and 'ub').

    The guess distribution is a uniformly permuted fixed profile (default: the
    heuristic profile for total v) or a product marginal.
    """
    eta = n // ell
    vm = v_max(m, eta, n, k)
    v = vm if v is None else v
    if not w <= v <= vm:
        raise ValueError(f"need w <= v <= v_max={vm}")
    c = IterCost.of(cost, q, m, n, k)
    E = error_set_size(q, m, eta, ell, w)
    if marginal is not None:
        success = sum((dp_B(q, m, eta, ell, w, t, marginal) for t in range(w, vm + 1)), Fraction(0))
        note = "product marginal"
    else:
        if profile is None:
            profile = optimize_marginal(q, m, eta, ell, w, v).profile
        success = dp_B_fixed_profile(q, m, eta, w, profile)
        note = "profile " + ",".join(map(str, profile))
    return _report(c, success, E, q, m, n, k, note)


# sub-support guessing (randomized decoder)

def _eps_start(eps_min: Fraction) -> int:
    return max(0, math.ceil(eps_min))


def _add_conv(acc: List[Fraction], kernel: Sequence[Fraction], poly: Sequence[Fraction], scale: Fraction) -> None:
    for i, a in enumerate(kernel):
        if a:
            for j, b in enumerate(poly):
                if b:
                    acc[i + j] += scale * a * b


def dp_C(q: int, m: int, eta: int, ell: int, w: int, u: int, marginal: Sequence[Fraction],
         eps_min: Fraction) -> Fraction:
    """Sum over error profiles (total w), guess profiles (total u) and
    intersection profiles (total >= eps_min) of prod_i p[u_i] zeta NM."""
    mu = min(m, eta)
    _check_marginal(marginal, mu)
    top = min(u, w)
    memo: Dict[Tuple[int, int, int], List[Fraction]] = {}

    def rec(w_: int, u_: int, l_: int) -> List[Fraction]:
        # coefficient list indexed by total intersection dimension
        if l_ == 0:
            return [Fraction(1)] if w_ == 0 and u_ == 0 else []
        if w_ > l_ * mu or u_ > l_ * mu:
            return []
        key = (w_, u_, l_)
        if key not in memo:
            acc = [Fraction(0)] * (top + 1)
            for a in range(min(mu, w_) + 1):
                for b in range(min(mu, u_) + 1):
                    if not marginal[b]:
                        continue
                    tail = rec(w_ - a, u_ - b, l_ - 1)
                    if not tail:
                        continue
                    kern = [intersect_prob(q, mu, a, b, j) for j in range(min(a, b) + 1)]
                    _add_conv(acc, kern, tail[: top + 1], marginal[b] * nm_q(q, m, eta, a))
            memo[key] = acc[: top + 1]
        return memo[key]

    poly = rec(w, u, ell)
    return sum(poly[_eps_start(eps_min):], Fraction(0))


def dp_C_fixed_profile(q: int, m: int, eta: int, w: int, uhat: Sequence[int], eps_min: Fraction) -> Fraction:
    """As dp_C, for a point mass on the guess profile uhat."""
    mu = min(m, eta)
    top = min(sum(uhat), w)
    # state: (error weight so far) -> intersection-dimension polynomial
    row: Dict[int, List[Fraction]] = {0: [Fraction(1)]}
    for ui in uhat:
        nxt: Dict[int, List[Fraction]] = {}
        for done, poly in row.items():
            for a in range(min(mu, w - done) + 1):
                kern = [intersect_prob(q, mu, a, ui, j) for j in range(min(a, ui) + 1)]
                acc = nxt.setdefault(done + a, [Fraction(0)] * (top + 1))
                _add_conv(acc, kern, poly[: top + 1], Fraction(nm_q(q, m, eta, a)))
        row = {d: p[: top + 1] for d, p in nxt.items()}
    poly = row.get(w, [])
    return sum(poly[_eps_start(eps_min):], Fraction(0))


def rcu_bounds_randomized(q: int, m: int, n: int, k: int, ell: int, w: int, u: int,
                          profile: Optional[Sequence[int]] = None,
                          marginal: Optional[Sequence[Fraction]] = None,
                          cost: str = "ee_m2n2") -> BoundReport:
    """RCU-style work-factor estimates of randomized sub-support decoding.

    These are approximations: the random-coding argument does not strictly
    apply to structured codes.  With a product marginal the guessed total is
    random, so every total in [0, n-k] is summed (infeasible ones add zero).
    """
    eta = n // ell
    mu = min(m, eta)
    c = IterCost.of(cost, q, m, n, k)
    E = error_set_size(q, m, eta, ell, w)

    def emin(t: int) -> Fraction:
        return Fraction(2 * w + t - (n - k), 2)

    if marginal is not None:
        success = sum((dp_C(q, m, eta, ell, w, t, marginal, emin(t)) for t in range(0, min(n - k, ell * mu) + 1)),
                      Fraction(0))
        note = "approximation; product marginal"
    else:
        if profile is None:
            profile = optimize_marginal(q, m, eta, ell, w, u, objective="intersection").profile
        success = dp_C_fixed_profile(q, m, eta, w, profile, emin(sum(profile)))
        note = "approximation; profile " + ",".join(map(str, profile))
    return _report(c, success, E, q, m, n, k, note)
