from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from kkextremal.errors import InvalidInput
from kkextremal.numeric import (
    Decomposition,
    Kind,
    binom,
    eval_decomposition,
    full_k_binomial_decomposition,
    k_binomial_decomposition,
    kk_lower_bound,
)


def _falling_binom(n: int, k: int) -> int:
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= n - i
    return num // math.factorial(k)


@pytest.mark.parametrize(
    "n,k,expected",
    [(5, 3, 10), (7, 0, 1), (3, -1, 0), (-2, 2, 3), (0, 0, 1), (2, 5, 0), (-1, 3, -1)],
)
def test_binom_examples(n, k, expected):
    assert binom(n, k) == expected


@given(st.integers(-30, 30), st.integers(-3, 12))
def test_binom_matches_product_formula(n, k):
    assert binom(n, k) == _falling_binom(n, k)


@given(st.integers(-40, 40), st.integers(1, 15))
def test_pascal(n, k):
    assert binom(n, k) == binom(n - 1, k) + binom(n - 1, k - 1)


def test_binom_agrees_with_math_comb_on_naturals():
    for n in range(30):
        for k in range(n + 3):
            assert binom(n, k) == math.comb(n, k)


def test_eval_examples():
    assert eval_decomposition(Decomposition(Kind.KBINOMIAL, 3, (5,))) == 10
    assert eval_decomposition(Decomposition(Kind.KBINOMIAL, 3, (5, 2, 1))) == 12
    assert eval_decomposition(Decomposition(Kind.FULL, 3, (4, 3, 3))) == 10


@pytest.mark.parametrize("m,k,coeffs", [(10, 3, (5,)), (12, 3, (5, 2, 1)), (9, 3, (4, 3, 2))])
def test_k_binomial_examples(m, k, coeffs):
    assert k_binomial_decomposition(m, k).coeffs == coeffs


@pytest.mark.parametrize("m,k,coeffs", [(10, 3, (4, 3, 3)), (12, 3, (5, 2, 1))])
def test_full_examples(m, k, coeffs):
    assert full_k_binomial_decomposition(m, k).coeffs == coeffs


def _full_valid(c) -> bool:
    body_ok = all(a > b for a, b in zip(c[:-1], c[1:-1]))
    return body_ok and c[-2] >= c[-1] >= 1


def test_full_decomposition_of_one_by_search():
    # every Full-valid pair with small entries, then keep the ones evaluating to 1
    hits = [c for c in itertools.product(range(0, 8), repeat=2) if _full_valid(c) and binom(c[0], 2) + binom(c[1], 1) == 1]
    assert hits == [(1, 1)]
    assert full_k_binomial_decomposition(1, 2).coeffs == (1, 1)


def test_full_decomposition_unique_by_search():
    # small m, k = 3: exhaustive search over valid triples finds exactly our answer
    for m in range(1, 60):
        hits = [
            c
            for c in itertools.product(range(0, 12), repeat=3)
            if _full_valid(c) and sum(binom(a, 3 - i) for i, a in enumerate(c)) == m
        ]
        assert hits == [full_k_binomial_decomposition(m, 3).coeffs], m


def test_roundtrip_exhaustive_small():
    for k in range(1, 9):
        for m in range(1, 3000):
            d = k_binomial_decomposition(m, k)
            assert eval_decomposition(d) == m
            f = full_k_binomial_decomposition(m, k)
            assert eval_decomposition(f) == m and len(f) == k
            if len(d) == k:
                assert f.coeffs == d.coeffs


@pytest.mark.slow
def test_roundtrip_exhaustive_to_1e5():
    for k in range(1, 9):
        for m in range(3000, 10**5 + 1):
            assert eval_decomposition(k_binomial_decomposition(m, k)) == m


@given(st.integers(1, 10**40), st.integers(1, 12))
def test_roundtrip_big(m, k):
    d = k_binomial_decomposition(m, k)
    assert eval_decomposition(d) == m
    assert eval_decomposition(full_k_binomial_decomposition(m, k)) == m


@given(st.integers(1, 8).flatmap(lambda k: st.tuples(st.just(k), st.lists(st.integers(0, 40), min_size=1, max_size=k, unique=True))))
def test_decomposition_of_eval_is_identity(args):
    k, raw = args
    coeffs = sorted(raw, reverse=True)
    # shift so the last entry meets the lower bound k - t
    t = len(coeffs) - 1
    lift = max(0, (k - t) - coeffs[-1])
    coeffs = tuple(c + lift for c in coeffs)
    d = Decomposition(Kind.KBINOMIAL, k, coeffs)
    assert k_binomial_decomposition(eval_decomposition(d), k).coeffs == coeffs


def test_kk_lower_bound_examples():
    assert kk_lower_bound(12, 3, 1) == 13
    assert kk_lower_bound(10, 3, 1) == 10
    for m in (1, 7, 100):
        assert kk_lower_bound(m, 4, 0) == m


def test_kk_lower_bound_monotone():
    for k in range(2, 6):
        for i in range(k):
            prev = 0
            for m in range(1, 10**4 + 1):
                cur = kk_lower_bound(m, k, i)
                assert cur >= prev
                prev = cur


@pytest.mark.parametrize(
    "call",
    [
        lambda: k_binomial_decomposition(0, 3),
        lambda: full_k_binomial_decomposition(-5, 2),
        lambda: kk_lower_bound(0, 3, 1),
        lambda: kk_lower_bound(5, 3, 3),
        lambda: Decomposition(Kind.KBINOMIAL, 3, (2, 3)),
        lambda: Decomposition(Kind.FULL, 3, (4, 3)),
        lambda: Decomposition(Kind.SHADOW, 2, (1,)),
    ],
)
def test_invalid_inputs(call):
    with pytest.raises(InvalidInput):
        call()


def test_shadow_kind_allows_non_positive():
    assert Decomposition(Kind.SHADOW, 3, (4, -1, -3)).coeffs == (4, -1, -3)
