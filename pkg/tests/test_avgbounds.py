import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sumrank_isd import avgbounds as ab
from sumrank_isd.counting import error_set_size, mean_rank, nm_q, subspace_prob, intersect_prob, partitions
from sumrank_isd.wcbounds import prange_reference, v_max, wc_bounds
import oracles as orc

UNIFORM3 = (Fraction(1, 3),) * 3


def test_dp_B_base_case_and_early_zero():
    p = (Fraction(1, 6), Fraction(1, 2), Fraction(1, 3))
    for w, v in itertools.product(range(3), repeat=2):
        expected = p[v] * nm_q(2, 3, 2, w) * subspace_prob(2, 2, w, v)
        assert ab.dp_B(2, 3, 2, 1, w, v, p) == expected
    assert ab.dp_B(2, 2, 2, 3, 3, 2, p) == 0


def test_dp_B_small_brute_force():
    assert ab.dp_B(2, 2, 2, 2, 1, 1, UNIFORM3) == orc.dp_B(2, 2, 2, 2, 1, 1, UNIFORM3)


def test_dp_B_rejects_bad_marginal():
    with pytest.raises(ValueError):
        ab.dp_B(2, 2, 2, 2, 1, 1, (Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(ValueError):
        ab.dp_B(2, 2, 2, 2, 1, 1, (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)))


def test_dp_B_fixed_profile_full_guess_counts_all_errors():
    for w in range(7):
        assert ab.dp_B_fixed_profile(2, 3, 2, w, (2, 2, 2)) == error_set_size(2, 3, 2, 3, w)
    assert ab.dp_B_fixed_profile(3, 2, 2, 2, (2,)) == nm_q(3, 2, 2, 2)


@pytest.mark.parametrize("vhat", [(1, 0, 2), (2, 1), (1, 1, 1), (0,)])
def test_dp_B_fixed_profile_brute_force(vhat):
    for w in range(sum(vhat) + 1):
        assert ab.dp_B_fixed_profile(2, 2, 3, w, vhat) == orc.dp_B_fixed(2, 2, 3, w, vhat)


@settings(max_examples=30, deadline=None)
@given(st.permutations([2, 1, 0, 1]), st.integers(0, 4))
def test_dp_B_fixed_profile_permutation_invariant(perm, w):
    assert ab.dp_B_fixed_profile(2, 3, 2, w, perm) == ab.dp_B_fixed_profile(2, 3, 2, w, (2, 1, 1, 0))


def test_boltzmann_uniform_mean_gives_zero_exponent():
    target = float(mean_rank(2, 2, 2))
    p, params = ab.boltzmann_marginal(2, 2, 2, target)
    assert params.lam == 0
    expected = [nm_q(2, 2, 2, j) / 16 for j in range(3)]
    assert p == pytest.approx(expected, abs=1e-15)


def test_boltzmann_limits():
    p, params = ab.boltzmann_marginal(2, 2, 2, 0.0)
    assert p == [1.0, 0.0, 0.0] and params.lam == math.inf
    p, _ = ab.boltzmann_marginal(2, 4, 3, 3.0)
    assert p[-1] == 1.0
    with pytest.raises(ValueError):
        ab.boltzmann_marginal(2, 2, 2, 2.5)


@pytest.mark.parametrize("q,m,eta,target", [(2, 2, 2, 1.0), (2, 20, 6, 1.5), (8, 6, 3, 0.2), (2, 20, 1, 0.15)])
def test_boltzmann_hits_target_mean(q, m, eta, target):
    p, params = ab.boltzmann_marginal(q, m, eta, target)
    assert sum(j * x for j, x in enumerate(p)) == pytest.approx(target, abs=1e-9)
    assert sum(p) == pytest.approx(1)
    assert abs(params.residual) <= 1e-9


def _exhaustive_counts(gain, ell, total):
    mu = len(gain) - 1
    best = None
    for x in itertools.product(range(ell + 1), repeat=mu + 1):
        if sum(x) == ell and sum(i * xi for i, xi in enumerate(x)) == total:
            val = sum(xi * g for xi, g in zip(x, gain))
            if best is None or val > best[1] + 1e-15:
                best = (x, val)
    return best


def test_best_counts_forced_points():
    assert ab.best_counts([0.1, 0.9], 5, 3) == ((2, 3), pytest.approx(2.9))
    x, _ = ab.best_counts([0.0, 0.3, 0.4, 1.0], 4, 12)
    assert x == (0, 0, 0, 4)
    with pytest.raises(ValueError):
        ab.best_counts([0.0, 1.0], 3, 4)


def test_best_counts_desk_instance_exhaustive():
    law, _ = ab.boltzmann_marginal(2, 4, 2, 2 / 4)
    gain = ab.containment_gain(2, 4, 2, law)
    for v in range(2, 9):
        x, val = ab.best_counts(gain, 4, v)
        ex, exval = _exhaustive_counts(gain, 4, v)
        assert val == pytest.approx(exval, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=2, max_size=4), st.integers(1, 5), st.data())
def test_best_counts_random_gains(gain, ell, data):
    total = data.draw(st.integers(0, ell * (len(gain) - 1)))
    x, val = ab.best_counts(gain, ell, total)
    assert sum(x) == ell and sum(i * xi for i, xi in enumerate(x)) == total
    assert val == pytest.approx(_exhaustive_counts(gain, ell, total)[1], abs=1e-12)


def test_marginal_solution_shapes():
    sol = ab.optimize_marginal(2, 20, 6, 10, 9, 10)
    assert sum(sol.x) == 10 and sum(sol.marginal) == 1
    assert sum(sol.profile) == 10 and list(sol.profile) == sorted(sol.profile, reverse=True)
    with pytest.raises(ValueError):
        ab.optimize_marginal(2, 20, 6, 10, 9, 10, objective="nope")


def test_intersection_gain_keeps_dimension_factor():
    g = ab.intersection_gain(2, 2, 2, [0.0, 1.0, 0.0])
    assert g[0] == 0 and g[2] == 1
    assert g[1] == pytest.approx(float(intersect_prob(2, 2, 1, 1, 1)))


def test_optimize_profile_exact_single_block():
    assert ab.optimize_profile_exact(2, 5, 4, 1, 2, 3) == (3,)


@pytest.mark.parametrize("q,m,eta,ell,w,v", [(2, 2, 2, 3, 2, 3), (3, 3, 2, 3, 2, 4), (2, 4, 3, 2, 2, 4)])
def test_optimize_profile_exact_vs_simplex_grid(q, m, eta, ell, w, v):
    mu = min(m, eta)
    profs = list(partitions(v, ell, mu))
    vals = [orc.dp_B_fixed(q, m, eta, w, p) for p in profs]
    grid_best = Fraction(-1)
    steps = 4
    for weights in itertools.product(range(steps + 1), repeat=len(profs)):
        if sum(weights) == steps:
            grid_best = max(grid_best, sum(Fraction(c, steps) * x for c, x in zip(weights, vals)))
    got = ab.optimize_profile_exact(q, m, eta, ell, w, v)
    assert orc.dp_B_fixed(q, m, eta, w, got) == grid_best


def test_dp_C_empty_range_and_base_case():
    p = (Fraction(1, 6), Fraction(1, 2), Fraction(1, 3))
    assert ab.dp_C(2, 2, 2, 2, 1, 1, p, Fraction(2)) == 0
    for w, u in itertools.product(range(3), repeat=2):
        expected = sum(p[u] * intersect_prob(2, 2, w, u, j) * nm_q(2, 2, 2, w) for j in range(min(w, u) + 1))
        assert ab.dp_C(2, 2, 2, 1, w, u, p, Fraction(0)) == expected


def test_dp_C_small_brute_force():
    for w, u in [(1, 1), (2, 1), (2, 2), (3, 2)]:
        for e in range(0, 3):
            assert ab.dp_C(2, 2, 2, 2, w, u, UNIFORM3, Fraction(e)) == orc.dp_C(2, 2, 2, 2, w, u, UNIFORM3, e)


def test_dp_C_fixed_profile_matches_point_mass_sum():
    for uhat in [(1, 1), (2, 0), (2, 1)]:
        for w in range(5):
            for e in range(3):
                direct = Fraction(0)
                for wp in orc.compositions(w, 2, 2):
                    for eps in itertools.product(*[range(min(a, b) + 1) for a, b in zip(wp, uhat)]):
                        if sum(eps) >= e:
                            direct += orc.prod(orc.zeta(2, 2, a, b, j) * nm_q(2, 2, 2, a)
                                               for a, b, j in zip(wp, uhat, eps))
                assert ab.dp_C_fixed_profile(2, 2, 2, w, uhat, Fraction(e)) == direct


@pytest.mark.parametrize("ell", [2, 3, 5, 10, 12, 20])
def test_rcu_lb_below_ub(ell):
    r = ab.rcu_bounds_generic(2, 20, 60, 30, ell, 9, 10)
    assert r["lb"] <= r["ub"]
    # far inside the unique-decoding radius the two agree
    assert r["ub"] - r["lb"] < 1e-9


def test_rcu_hamming_extreme_matches_prange_formula():
    r = ab.rcu_bounds_generic(2, 20, 60, 30, 60, 9, 10)
    assert r["ub"] == pytest.approx(prange_reference(2, 20, 60, 30, 9, 10), abs=1e-9)


def test_rcu_marginal_guess_runs():
    r = ab.rcu_bounds_generic(2, 4, 8, 4, 4, 2, 4, marginal=UNIFORM3)
    assert r["lb"] <= r["ub"] and "marginal" in r.notes


def test_rcu_falls_below_worst_case_somewhere():
    below = []
    for ell in (1, 2, 3, 4, 5, 6, 10):
        eta = 60 // ell
        vm = v_max(20, eta, 60, 30)
        rcu = ab.rcu_bounds_generic(2, 20, 60, 30, ell, 9, vm)
        below.append(rcu["lb"] < wc_bounds(2, 20, 60, 30, ell, 9, vm)["lb"])
    assert any(below)


def test_rcu_randomized_bounds_ordered():
    r = ab.rcu_bounds_randomized(8, 6, 12, 4, 4, 5, 2)
    assert r["lb"] <= r["ub"] and r.notes.startswith("approximation")
    rm = ab.rcu_bounds_randomized(2, 2, 4, 2, 2, 1, 1, marginal=UNIFORM3)
    assert rm["lb"] <= rm["ub"]
