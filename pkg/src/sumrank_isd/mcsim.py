"""Monte-Carlo checks of the closed-form success probabilities.

Both estimators sample per-block subspaces of F_q^mu as random matrices,
reject rank-deficient draws, and decide the event with batched ranks.  They
never call the recursions they are compared against: the theoretical value
is computed separately and only used for the z-score.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import galois as gf
from .avgbounds import dp_B, dp_B_fixed_profile
from .counting import compositions, error_set_size, ordered, profile_prob
from .gendecode import GuessConfig, design_law
from .randlrs import design_distribution, eps_min, success_prob_profiles, ucomp

Z99 = NormalDist().inv_cdf(0.995)


@dataclass
class EstimateReport:
    trials: int
    successes: int
    estimate: float
    interval: Tuple[float, float]
    theory: float
    z: float
    strata: Dict[str, List[int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def wilson(successes: int, trials: int, z: float = Z99) -> Tuple[float, float]:
    p = successes / trials
    denom = 1 + z * z / trials
    mid = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, mid - half), min(1.0, mid + half)


def _report(hits: np.ndarray, theory: float, err_profiles: np.ndarray) -> EstimateReport:
    trials = int(hits.size)
    succ = int(hits.sum())
    est = succ / trials
    sd = math.sqrt(theory * (1 - theory) / trials)
    if sd > 0:
        z = (est - theory) / sd
    else:
        z = 0.0 if est == theory else math.inf
    strata: Dict[str, List[int]] = {}
    keys = [",".join(map(str, ordered(p))) for p in err_profiles.tolist()]
    for key, h in zip(keys, hits.tolist()):
        cell = strata.setdefault(key, [0, 0])
        cell[0] += 1
        cell[1] += int(h)
    return EstimateReport(trials, succ, est, wilson(succ, trials), theory, z, dict(sorted(strata.items())))


def _sample_error_profiles(q, m, eta, ell, w, trials, rng) -> np.ndarray:
    profs = list(compositions(w, ell, min(m, eta)))
    p = np.array([float(profile_prob(q, m, eta, x)) for x in profs])
    idx = rng.choice(len(profs), size=trials, p=p / p.sum())
    return np.array(profs, dtype=np.int64)[idx]


def _sample_from_law(law: Sequence[Tuple[Sequence[int], Fraction]], trials: int, rng) -> np.ndarray:
    """Sorted profiles drawn from `law`, each then uniformly permuted."""
    p = np.array([float(x) for _, x in law])
    idx = rng.choice(len(law), size=trials, p=p / p.sum())
    out = np.array([list(g) for g, _ in law], dtype=np.int64)[idx]
    return rng.permuted(out, axis=1)


def _sample_guess(guess: GuessConfig, q: int, mu: int, ell: int, trials: int, rng) -> np.ndarray:
    if guess.mode == "profile":
        return _sample_from_law([(guess.profile, Fraction(1))], trials, rng)
    if guess.mode == "marginal":
        p = np.array([float(x) for x in guess.marginal])
        return rng.choice(mu + 1, size=(trials, ell), p=p / p.sum())
    if guess.mode == "design":
        return _sample_from_law(design_law(q, mu, ell, guess.w, guess.v), trials, rng)
    raise ValueError(f"unknown guess mode {guess.mode!r}")


def random_subspaces(F, dims: np.ndarray, mu: int, rng) -> np.ndarray:
    """Basis matrices (rows padded with zeros to mu) of uniform subspaces of F^mu."""
    flat = dims.reshape(-1)
    out = np.zeros((flat.size, mu, mu), dtype=np.int64)
    mask = (np.arange(mu)[None, :] < flat[:, None])[:, :, None]
    todo = np.arange(flat.size)
    while todo.size:
        draw = rng.integers(0, F.order, size=(todo.size, mu, mu)) * mask[todo]
        out[todo] = draw
        bad = gf.batch_rank(F, draw) != flat[todo]
        todo = todo[bad]
    return out.reshape(dims.shape + (mu, mu))


def _intersection_dims(F, a: np.ndarray, b: np.ndarray, mu: int, rng) -> np.ndarray:
    A = random_subspaces(F, a, mu, rng)
    B = random_subspaces(F, b, mu, rng)
    stacked = np.concatenate([A, B], axis=-2).reshape(-1, 2 * mu, mu)
    joint = gf.batch_rank(F, stacked).reshape(a.shape)
    return a + b - joint


def containment_theory(q: int, m: int, eta: int, ell: int, w: int, guess: GuessConfig) -> Fraction:
    """Pr[error support inside the guess] for a uniform weight-w error."""
    mu = min(m, eta)
    E = error_set_size(q, m, eta, ell, w)
    if guess.mode == "marginal":
        return sum((dp_B(q, m, eta, ell, w, v, guess.marginal) for v in range(ell * mu + 1)), Fraction(0)) / E
    if guess.mode == "profile":
        law = [(guess.profile, Fraction(1))]
    else:
        law = design_law(q, mu, ell, guess.w, guess.v)
    return sum((p * dp_B_fixed_profile(q, m, eta, w, g) for g, p in law), Fraction(0)) / E


def estimate_containment(q: int, m: int, eta: int, ell: int, w: int, guess: GuessConfig,
                         trials: int, rng: np.random.Generator) -> EstimateReport:
    if trials < 1:
        raise ValueError("need at least one trial")
    mu = min(m, eta)
    F = gf.gf(q)
    err = _sample_error_profiles(q, m, eta, ell, w, trials, rng)
    gss = _sample_guess(guess, q, mu, ell, trials, rng)
    inside = _intersection_dims(F, err, gss, mu, rng) == err
    hits = inside.all(axis=1)
    return _report(hits, float(containment_theory(q, m, eta, ell, w, guess)), err)


def intersection_theory(q: int, m: int, eta: int, ell: int, n: int, k: int, w: int, u: int,
                        law: Optional[Sequence[Tuple[Sequence[int], Fraction]]] = None) -> Fraction:
    """Success probability of one sub-support guess against a uniform weight-w error.

    `law` maps sorted guess profiles to probabilities; by default it is the
    design distribution followed by ucomp.
    """
    mu = min(m, eta)
    if law is None:
        law = [(ucomp(q, mu, prof, u), beta) for prof, beta in design_distribution(q, ell, mu, w, u)]
    total = Fraction(0)
    for g, beta in law:
        inner = Fraction(0)
        for prof in compositions(w, ell, mu):
            inner += profile_prob(q, m, eta, prof) * success_prob_profiles(q, mu, prof, g, n, k)
        total += beta * inner
    return total


def estimate_intersection(q: int, m: int, eta: int, ell: int, n: int, k: int, w: int, u: int,
                          trials: int, rng: np.random.Generator,
                          profile: Optional[Sequence[int]] = None) -> EstimateReport:
    """Sample eps = sum_dim(U n E) and count eps >= eps_min.

    Guesses follow the design distribution unless a fixed `profile` is given.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    mu = min(m, eta)
    F = gf.gf(q)
    if profile is None:
        law = [(ucomp(q, mu, prof, u), beta) for prof, beta in design_distribution(q, ell, mu, w, u)]
    else:
        law = [(tuple(profile), Fraction(1))]
    err = _sample_error_profiles(q, m, eta, ell, w, trials, rng)
    gss = _sample_from_law(law, trials, rng)
    eps = _intersection_dims(F, err, gss, mu, rng).sum(axis=1)
    hits = eps >= math.ceil(eps_min(w, u, n, k))
    return _report(hits, float(intersection_theory(q, m, eta, ell, n, k, w, u, law)), err)
