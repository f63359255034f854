import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sumrank_isd import counting as ct
import oracles as orc


def test_gauss_binom_examples():
    assert ct.gauss_binom(5, 0, 3) == 1
    assert ct.gauss_binom(2, 1, 2) == orc.gauss_binom_enum(2, 2, 1) == 3
    assert ct.gauss_binom(4, 2, 2) == orc.gauss_binom_enum(2, 4, 2) == 35
    assert ct.gauss_binom(2, 3, 2) == 0


@pytest.mark.parametrize("p,a", [(2, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_gauss_binom_matches_enumeration(p, a):
    for b in range(a + 1):
        assert ct.gauss_binom(a, b, p) == orc.count_subspaces(p, a, b)


@settings(max_examples=80)
@given(st.sampled_from([2, 3, 4, 5, 7, 8]), st.integers(0, 12), st.integers(0, 12))
def test_gauss_binom_sandwich_and_symmetry(q, a, b):
    b = min(a, b)
    g = ct.gauss_binom(a, b, q)
    assert g == ct.gauss_binom(a, a - b, q)
    e = b * (a - b)
    assert q**e <= g <= ct.gamma_q(q) * q**e * (1 + 1e-12)


def test_gamma_examples():
    assert abs(ct.gamma_q(2) - 3.462746619455) < 1e-9
    assert 1 < ct.gamma_q(2**20) < 1 + 1e-5
    vals = [ct.gamma_q(q) for q in (2, 3, 4, 5, 7, 8, 16)]
    assert vals == sorted(vals, reverse=True)


def test_nm_examples():
    assert ct.nm_q(3, 4, 2, 0) == 1
    assert ct.nm_q(2, 2, 2, 1) == orc.nm(2, 2, 2, 1) == 9
    assert ct.nm_q(2, 2, 2, 2) == orc.nm(2, 2, 2, 2) == 6
    assert ct.nm_q(2, 2, 2, 3) == 0


@pytest.mark.parametrize("p,m,eta", [(2, 1, 1), (2, 2, 3), (2, 3, 2), (3, 2, 2), (2, 1, 3)])
def test_nm_matches_enumeration(p, m, eta):
    for r in range(min(m, eta) + 1):
        assert ct.nm_q(p, m, eta, r) == orc.nm(p, m, eta, r)
    assert sum(ct.nm_q(p, m, eta, r) for r in range(min(m, eta) + 1)) == p ** (m * eta)


def test_error_set_size_examples():
    assert ct.error_set_size(2, 3, 2, 1, 2) == ct.nm_q(2, 3, 2, 2)
    assert ct.error_set_size(2, 1, 1, 2, 1) == 2
    assert ct.error_set_size(2, 2, 2, 2, 1) == 18
    assert ct.error_set_size(2, 2, 2, 2, 5) == 0


@pytest.mark.parametrize("q,m,eta,ell", [(2, 2, 2, 3), (3, 1, 2, 4), (2, 3, 2, 2), (4, 2, 3, 3)])
def test_error_set_sizes_partition_space(q, m, eta, ell):
    assert sum(ct.error_set_sizes(q, m, eta, ell)) == q ** (m * eta * ell)


def test_mean_rank_examples():
    assert ct.mean_rank(2, 1, 1) == Fraction(1, 2)
    assert ct.mean_rank(2, 2, 2) == Fraction(21, 16)
    assert 3.9 < float(ct.mean_rank(2, 10, 4)) <= 4


def test_profile_prob_examples():
    assert ct.profile_prob(2, 2, 2, (1, 0)) == Fraction(9, 18)
    assert ct.profile_prob(2, 1, 1, (0, 1)) == Fraction(1, 2)
    total = sum(ct.profile_prob(3, 2, 2, p) for p in ct.compositions(3, 3, 2))
    assert total == 1


def test_composition_examples():
    assert set(ct.compositions(1, 2, 1)) == {(1, 0), (0, 1)}
    assert list(ct.partitions(1, 2, 1)) == [(1, 0)]
    assert list(ct.compositions(0, 4, 3)) == [(0, 0, 0, 0)]
    assert len(list(ct.compositions(2, 2, 2))) == 3 == ct.profile_count_bound(2, 2, 2)


@settings(max_examples=60)
@given(st.integers(0, 8), st.integers(1, 5), st.integers(1, 3))
def test_compositions_agree_with_enumeration(t, ell, mu):
    comps = list(ct.compositions(t, ell, mu))
    assert sorted(comps) == sorted(orc.compositions(t, ell, mu))
    assert len(comps) == len(set(comps)) == ct.count_compositions(t, ell, mu)
    assert len(comps) <= ct.profile_count_bound(t, ell, mu)
    parts = list(ct.partitions(t, ell, mu))
    assert sorted(parts) == sorted({ct.ordered(c) for c in comps})
    assert sum(ct.perm_count(p) for p in parts) == len(comps)


def test_lambda_examples():
    assert ct.subspace_prob(2, 3, 0, 2) == 1
    assert ct.subspace_prob(2, 2, 1, 1) == Fraction(1, 3)
    assert ct.subspace_prob(3, 3, 3, 3) == 1
    assert ct.subspace_prob(2, 3, 2, 1) == 0


def test_zeta_examples():
    assert ct.intersect_prob(2, 3, 2, 0, 0) == 1
    assert ct.intersect_prob(2, 2, 1, 1, 1) == Fraction(1, 3)
    assert ct.intersect_prob(2, 2, 1, 1, 0) == Fraction(2, 3)


@pytest.mark.parametrize("p,mu", [(2, 2), (2, 3), (3, 2)])
def test_kernels_match_enumeration(p, mu):
    for a, b in itertools.product(range(mu + 1), repeat=2):
        assert ct.subspace_prob(p, mu, a, b) == orc.lam(p, mu, a, b)
        for j in range(min(a, b) + 1):
            assert ct.intersect_prob(p, mu, a, b, j) == orc.zeta(p, mu, a, b, j)
            assert ct.intersect_prob(p, mu, a, b, j) == ct.intersect_prob(p, mu, b, a, j)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_zeta_sums_to_one_and_contains_lambda(q):
    for mu in range(5):
        for a, b in itertools.product(range(mu + 1), repeat=2):
            probs = [ct.intersect_prob(q, mu, a, b, j) for j in range(min(a, b) + 1)]
            assert sum(probs) == 1
            assert ct.intersect_prob(q, mu, a, b, a) == ct.subspace_prob(q, mu, a, b)


def test_log2_big_values():
    assert ct.log2(1024) == 10
    assert ct.log2(Fraction(1, 8)) == -3
    assert abs(ct.log2(2**5000 * 3) - (5000 + math.log2(3))) < 1e-9
    assert ct.log2(0) == -math.inf
