from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kkextremal.errors import CapacityError, InvalidInput, ParseError
from kkextremal.numeric import binom, kk_lower_bound
from kkextremal.setfam import (
    MAX_N,
    KSet,
    KSetFamily,
    canonical_form,
    colex_compare,
    find_isomorphism,
    format_family,
    initial_segment,
    is_initial_segment,
    iterated_shadow,
    ksets_colex,
    mask_of,
    parse_family,
    shadow,
    shadow_sizes,
)


def fam(n, k, *sets):
    return KSetFamily.of(n, k, sets)


@st.composite
def families(draw, max_n=12, max_k=4):
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, min(max_k, n)))
    pool = list(itertools.combinations(range(1, n + 1), k))
    chosen = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=min(len(pool), 40), unique=True))
    return KSetFamily.of(n, k, chosen)


def _colex_by_rule(x, y) -> int:
    diff = set(x) ^ set(y)
    if not diff:
        return 0
    return -1 if max(diff) in y else 1


def test_colex_examples():
    assert colex_compare(KSet.of(5, [1, 2, 3]), KSet.of(5, [1, 2, 4])) == -1
    assert colex_compare(KSet.of(5, [2, 3, 4]), KSet.of(5, [1, 2, 5])) == -1
    assert colex_compare(KSet.of(5, [2, 4]), KSet.of(5, [2, 4])) == 0
    with pytest.raises(InvalidInput):
        colex_compare(KSet.of(5, [1]), KSet.of(6, [1]))


def test_colex_matches_symmetric_difference_rule():
    sets = list(itertools.combinations(range(1, 7), 3))
    for x, y in itertools.product(sets, repeat=2):
        assert colex_compare(KSet.of(6, x), KSet.of(6, y)) == _colex_by_rule(x, y)


def test_ksets_colex_is_sorted_and_complete():
    for n in range(1, 8):
        for k in range(0, n + 1):
            listed = list(ksets_colex(n, k))
            assert len(listed) == binom(n, k) == len(set(listed))
            assert listed == sorted(listed)


def test_initial_segment_examples():
    assert initial_segment(5, 3, 10).sets() == [tuple(c) for c in sorted(itertools.combinations(range(1, 6), 3), key=lambda c: mask_of(c))]
    S = initial_segment(6, 3, 12)
    block = set(itertools.combinations(range(1, 6), 3)) | {(1, 2, 6), (1, 3, 6)}
    assert set(S.sets()) == block
    assert initial_segment(7, 4, 1).sets() == [(1, 2, 3, 4)]
    with pytest.raises(InvalidInput):
        initial_segment(5, 3, 11)


def test_shadow_examples():
    assert shadow(fam(3, 3, (1, 2, 3))).sets() == [(1, 2), (1, 3), (2, 3)]
    assert shadow(initial_segment(5, 3, 10)) == initial_segment(5, 2, 10)
    got = shadow(fam(5, 3, (1, 2, 3), (1, 4, 5)))
    assert set(got.sets()) == {(1, 2), (1, 3), (2, 3), (1, 4), (1, 5), (4, 5)}


def test_iterated_shadow_examples():
    S = fam(5, 3, (1, 2, 3), (1, 4, 5))
    assert iterated_shadow(S, 0) == S
    assert iterated_shadow(S, 2).sets() == [(1,), (2,), (3,), (4,), (5,)]
    with pytest.raises(InvalidInput):
        iterated_shadow(S, 4)


def test_iterated_shadow_of_initial_segments():
    for n in range(3, 8):
        for k in range(1, n + 1):
            for m in range(1, binom(n, k) + 1):
                S = initial_segment(n, k, m)
                for i in range(k):
                    assert iterated_shadow(S, i) == initial_segment(n, k - i, kk_lower_bound(m, k, i))


def test_is_initial_segment_examples():
    assert is_initial_segment(initial_segment(6, 3, 7))
    assert is_initial_segment(initial_segment(6, 3, 7), up_to_iso=True)
    single = fam(4, 3, (1, 2, 4))
    assert not is_initial_segment(single)
    assert is_initial_segment(single, up_to_iso=True)
    S = fam(5, 3, (1, 2, 3), (1, 4, 5))
    assert not is_initial_segment(S)
    assert not is_initial_segment(S, up_to_iso=True)


def test_is_initial_segment_matches_permutation_search():
    # every family of 2-subsets of [5] of size <= 4, against all 120 relabelings
    pool = list(itertools.combinations(range(1, 6), 2))
    perms = list(itertools.permutations(range(1, 6)))
    for m in range(1, 5):
        target = set(initial_segment(5, 2, m).sets())
        for combo in itertools.combinations(pool, m):
            brute = any({tuple(sorted(p[v - 1] for v in s)) for s in combo} == target for p in perms)
            assert is_initial_segment(KSetFamily.of(5, 2, combo), up_to_iso=True) == brute


def test_canonical_form_examples():
    a = fam(5, 3, (2, 3, 5))
    b = fam(5, 3, (1, 2, 4))
    assert canonical_form(a) == canonical_form(b)
    S = fam(6, 3, (1, 2, 3), (3, 4, 5), (1, 5, 6))
    assert canonical_form(canonical_form(S)) == canonical_form(S)


def _relabel(S: KSetFamily, perm) -> KSetFamily:
    return KSetFamily.of(S.n, S.k, [[perm[v - 1] for v in s] for s in S.sets()])


@settings(max_examples=60, deadline=None)
@given(families(max_n=7, max_k=3), st.randoms(use_true_random=False))
def test_canonical_form_is_an_isomorphism_invariant(S, rng):
    perm = list(range(1, S.n + 1))
    rng.shuffle(perm)
    T = _relabel(S, perm)
    assert canonical_form(S) == canonical_form(T)
    assert find_isomorphism(S.n, S.masks, T.masks) is not None
    if S.k >= 2:
        assert canonical_form(shadow(S)) == canonical_form(shadow(T))


def test_canonical_form_separates_non_isomorphic():
    # both 2-regular on six vertices: two triangles against a hexagon
    triangle = fam(6, 2, (1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6))
    hexagon = fam(6, 2, (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6))
    assert canonical_form(triangle) != canonical_form(hexagon)
    assert find_isomorphism(6, triangle.masks, hexagon.masks) is None


def test_canonical_form_guard():
    big = KSetFamily.of(20, 1, [[i] for i in range(1, 21)])
    with pytest.raises(CapacityError):
        canonical_form(big)


@settings(max_examples=200, deadline=None)
@given(families())
def test_shadow_at_least_kk_bound(S):
    sizes = shadow_sizes(S)
    for i, size in enumerate(sizes):
        assert size >= kk_lower_bound(len(S), S.k, i)
    if S.k >= 2 and sizes[1] == kk_lower_bound(len(S), S.k, 1):
        assert all(sizes[i] == kk_lower_bound(len(S), S.k, i) for i in range(S.k))


@settings(max_examples=100, deadline=None)
@given(families(), st.data())
def test_iterated_shadow_composes(S, data):
    i = data.draw(st.integers(0, S.k))
    j = data.draw(st.integers(0, S.k - i))
    assert iterated_shadow(S, i + j) == iterated_shadow(iterated_shadow(S, i), j)


def test_shadow_members_are_contained_in_members():
    S = fam(6, 3, (1, 2, 3), (2, 4, 6), (3, 5, 6))
    expected = {tuple(sorted(set(s) - {x})) for s in S.sets() for x in s}
    assert set(shadow(S).sets()) == expected
    with pytest.raises(InvalidInput):
        shadow(KSetFamily(3, 0, [0]))


@settings(max_examples=100, deadline=None)
@given(families())
def test_format_parse_roundtrip(S):
    assert parse_family(format_family(S)) == S


def test_parse_accepts_comments_and_spaces():
    text = "# a family\n5 3\n1, 2, 3  # first\n\n1,4,5\n"
    assert parse_family(text).sets() == [(1, 2, 3), (1, 4, 5)]


@pytest.mark.parametrize(
    "text",
    ["", "5\n1,2,3\n", "5 3\n1,2\n", "5 3\n1,2,9\n", "5 3\n1,1,2\n", "5 3\n", "5 3\n1,x,3\n"],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_family(text)


def test_family_validation():
    with pytest.raises(InvalidInput):
        KSetFamily(5, 3, [])
    with pytest.raises(InvalidInput):
        KSetFamily.of(5, 3, [(1, 2)])
    with pytest.raises(CapacityError):
        KSetFamily(MAX_N + 1, 1, [1])
    with pytest.raises(CapacityError):
        parse_family("64 1\n1\n")
    S = KSetFamily.of(6, 2, [(5, 6), (1, 2), (5, 6)])
    assert S.sets() == [(1, 2), (5, 6)]
