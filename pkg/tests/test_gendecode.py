from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from sumrank_isd import galois as gf
from sumrank_isd import gendecode as gd
from sumrank_isd import sumrank as sr
from sumrank_isd.counting import perm_count
from sumrank_isd.wcbounds import phi, q_factor, scomp


def _plant(code, w, rng):
    F = code.field
    msg = [F.random(rng) for _ in range(code.k)]
    c = gf.vecmat(F, msg, code.G)
    e = sr.sample_error(code.q, code.m, code.eta, code.ell, w, rng)
    return c, e, [F.add(a, b) for a, b in zip(c, e)]


def _extend(S, v, rng):
    """A random super-support of total dimension v containing S."""
    F = gf.gf(S.q)
    bases = [list(map(list, B)) for B in S.bases]
    while sum(len(B) for B in bases) < v:
        i = int(rng.integers(0, len(bases)))
        if len(bases[i]) == S.dim:
            continue
        cand = bases[i] + [list(rng.integers(0, S.q, S.dim))]
        if gf.rank(F, cand) == len(cand):
            bases[i] = cand
    return sr.Support.from_bases(S.q, S.dim, S.side, bases)


def test_zero_syndrome_decodes_to_zero():
    rng = np.random.default_rng(0)
    code = sr.random_code(2, 6, 3, 4, 6, rng)
    for prof in [(0, 0, 0, 0), (1, 2, 0, 3)]:
        S = sr.random_support(2, 3, sr.ROW, prof, rng)
        outcome, e = gd.erasure_decode(code, [0] * 6, S)
        assert outcome is gd.Outcome.DECODED and e == [0] * 12


def test_weight_zero_returns_codeword_in_one_iteration():
    rng = np.random.default_rng(1)
    code = sr.random_code(2, 4, 2, 4, 4, rng)
    c = gf.vecmat(code.field, [1, 2, 3, 4], code.G)
    res = gd.generic_decode(code, c, 0, gd.GuessConfig(0, profile=(0, 0, 0, 0)), rng)
    assert res.success and res.iterations == 1 and res.codeword == c
    y = list(c)
    y[0] ^= 1
    res = gd.generic_decode(code, y, 0, gd.GuessConfig(0, profile=(0, 0, 0, 0)), rng, max_iters=5)
    assert not res.success and res.outcomes["inconsistent"] == 5


@pytest.mark.parametrize("q,m,eta,ell,k,w,v", [(2, 6, 3, 4, 6, 2, 4), (3, 3, 2, 4, 4, 2, 3)])
def test_plant_and_recover_row_side(q, m, eta, ell, k, w, v):
    rng = np.random.default_rng(q)
    code = sr.random_code(q, m, eta, ell, k, rng)
    assert sr.guess_side(m, eta) == sr.ROW
    for _ in range(15):
        c, e, y = _plant(code, w, rng)
        S = _extend(sr.support_of(code.field, e, eta, sr.ROW), v, rng)
        outcome, got = gd.erasure_decode(code, code.syndrome(y), S)
        assert outcome is gd.Outcome.DECODED and got == e


def test_plant_and_recover_column_side():
    # 4 unknowns over F_2 against 16 equations; tiny binary systems are occasionally singular
    rng = np.random.default_rng(5)
    code = sr.random_code(2, 2, 4, 3, 4, rng)
    assert sr.guess_side(2, 4) == sr.COL
    solved = 0
    for _ in range(20):
        c, e, y = _plant(code, 1, rng)
        S = sr.support_of(code.field, e, 4, sr.COL)
        outcome, got = gd.erasure_decode(code, code.syndrome(y), S)
        assert outcome in (gd.Outcome.DECODED, gd.Outcome.RANK_DEFICIENT)
        if outcome is gd.Outcome.DECODED:
            assert got == e
            solved += 1
    assert solved >= 15


def test_wrong_guess_is_rejected():
    rng = np.random.default_rng(9)
    code = sr.random_code(2, 6, 3, 4, 6, rng)
    c, e, y = _plant(code, 2, rng)
    E = sr.support_of(code.field, e, 3, sr.ROW)
    outcomes = Counter()
    for _ in range(50):
        S = sr.random_support(2, 3, sr.ROW, (1, 1, 1, 1), rng)
        if sr.contains(S, E):
            continue
        outcome, got = gd.erasure_decode(code, code.syndrome(y), S)
        outcomes[outcome] += 1
        if outcome is gd.Outcome.DECODED:
            assert sum(sr.rank_profile(code.field, got, 3)) != 2
    assert outcomes[gd.Outcome.INCONSISTENT] > 40


def test_generic_decode_recovers_planted_codeword():
    rng = np.random.default_rng(3)
    code = sr.random_code(2, 6, 3, 4, 6, rng)
    guess = gd.make_guess(2, 6, 3, 4, 2, 4)
    assert sum(guess.profile) == 4
    for _ in range(5):
        c, e, y = _plant(code, 2, rng)
        res = gd.generic_decode(code, y, 2, guess, rng)
        assert res.success and res.codeword == c and res.error == e
        assert sum(res.outcomes.values()) == res.iterations


def test_generic_decode_timeout_reports_counts():
    rng = np.random.default_rng(4)
    code = sr.random_code(2, 6, 3, 4, 6, rng)
    c, e, y = _plant(code, 2, rng)
    res = gd.generic_decode(code, y, 2, gd.GuessConfig(1, profile=(1, 0, 0, 0)), rng, max_iters=30)
    assert not res.success and res.iterations == 30
    assert sum(res.outcomes.values()) == 30


def test_guess_config_modes():
    rng = np.random.default_rng(6)
    g = gd.GuessConfig(3, profile=(2, 1, 0))
    assert Counter(tuple(sorted(g.draw(2, 2, 3, rng))) for _ in range(20)) == Counter({(0, 1, 2): 20})
    marg = gd.GuessConfig(0, mode="marginal", marginal=(Fraction(1), Fraction(0), Fraction(0)))
    assert marg.draw(2, 2, 4, rng) == [0, 0, 0, 0]
    design = gd.GuessConfig(4, mode="design", w=2)
    assert all(sum(design.draw(2, 2, 3, rng)) == 4 for _ in range(20))
    with pytest.raises(ValueError):
        gd.GuessConfig(1, mode="other").draw(2, 2, 3, rng)


def test_design_law_weights():
    law = gd.design_law(2, 2, 3, 2, 3)
    assert sum(p for _, p in law) == 1
    Q = q_factor(2, 3, 2, 2, 3)
    # both error profiles (1,1,0) and (2,0,0) are best covered by a (2,1,0) guess
    assert scomp(2, 2, (1, 1, 0), 3) == (2, 1, 0)
    assert scomp(2, 2, (2, 0, 0), 3) == (2, 1, 0)
    weights = {}
    for g, p in law:
        weights[g] = weights.get(g, 0) + p
    assert weights == {(2, 1, 0): 1}
    assert [p for _, p in law] == [
        perm_count(prof) / (phi(2, 2, scomp(2, 2, prof, 3), prof) * Q) for prof in [(2, 0, 0), (1, 1, 0)]
    ]
