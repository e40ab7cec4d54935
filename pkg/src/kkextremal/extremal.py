"""Extremality tests, depth and the predicates built on them."""

from __future__ import annotations

import enum
import itertools

from kkextremal.bbw import hypotenusal_numbers, init_from_hypergraph, shadow_decomposition_direct, walls_of_config
from kkextremal.errors import CapacityError, InvalidInput
from kkextremal.hypergraph import comfortable_order, hypergraph_of_family, is_colex_hypergraph, truncate
from kkextremal.numeric import binom, k_binomial_decomposition, kk_lower_bound
from kkextremal.setfam import (
    MAX_N,
    KSetFamily,
    elements_of,
    is_initial_segment,
    iterated_shadow,
    mask_of,
    shadow,
    shadow_masks,
)


class Verdict(enum.Enum):
    STAYS_EXTREMAL = "stays-extremal"
    BREAKS_EXTREMAL = "breaks-extremal"


def is_extremal_direct(S: KSetFamily) -> bool:
    """Shadow size equals the Kruskal-Katona bound."""
    if S.k < 1:
        raise InvalidInput("k must be positive")
    if S.k == 1:
        return True
    return len(shadow_masks(S.masks)) == kk_lower_bound(len(S), S.k, 1)


def is_extremal_beta(S: KSetFamily) -> bool:
    return shadow_decomposition_direct(S).coeffs[-1] >= 1


def family_walls(S: KSetFamily) -> tuple[tuple[int, ...], bool]:
    """Walls after iterations 1..k of the process seeded by the trees of H(S)."""
    H = hypergraph_of_family(S)
    config = init_from_hypergraph(H, comfortable_order(H))
    walls, _, abrupt = walls_of_config(config, S.k)
    return walls, abrupt


def is_extremal_wall(S: KSetFamily) -> bool:
    walls, _ = family_walls(S)
    return walls[S.k - 1] <= S.n - S.k


def depth(S: KSetFamily) -> int:
    """Least j such that the j-th shadow is isomorphic to a colex initial segment."""
    masks = set(S.masks)
    for j in range(S.k):
        fam = KSetFamily(S.n, S.k - j, masks)
        if is_initial_segment(fam, up_to_iso=True):
            return j
        masks = shadow_masks(masks)
    return S.k - 1  # not reached: singletons are always initial up to relabeling


def depth_bound(n: int) -> int:
    """floor(max(log2(log2 n) + 4, 5)), with exact integer logarithms."""
    if n < 2:
        raise InvalidInput("n must be at least 2")
    # floor(log2(log2 n)) is the largest e with 2**(2**e) <= n
    e = 0
    while 2 ** (2 ** (e + 1)) <= n:
        e += 1
    return max(e + 4, 5)


def hypotenusal_with_minus_one(count: int) -> list[int]:
    """[a[-1], a[0], ..., a[count-1]] with a[-1] = 1."""
    return [1] + list(hypotenusal_numbers(max(count, 1)))[:count]


def hn_necessary(S: KSetFamily, t: int) -> bool:
    """Gap conditions on the k-binomial decomposition forced by a non-initial t-th shadow."""
    k = S.k
    if not 0 <= t <= k - 1:
        raise InvalidInput(f"t must lie in [0, {k - 1}]")
    if not is_extremal_direct(S):
        raise InvalidInput("family is not extremal")
    if is_initial_segment(iterated_shadow(S, t), up_to_iso=True):
        raise InvalidInput(f"shadow {t} is an initial segment")
    a = k_binomial_decomposition(len(S), k).coeffs
    if len(a) < k:
        raise InvalidInput("decomposition shorter than k for a non-initial family")
    hyp = hypotenusal_with_minus_one(t + 1)  # hyp[i + 1] = a[i]
    for i in range(1, t):
        if a[k - 2 - t + i] - a[k - 1 - t + i] < hyp[i] + 1:
            return False
    return a[k - 2] - a[k - 1] >= hyp[t]


def depth_gaps(S: KSetFamily) -> list[tuple[int, int, int]]:
    """Consecutive shadow-decomposition gaps and their lower bounds for a family of depth j >= 1.

    Returns (i, gap, bound) for i in [0, j-1], where gap = b_{k-1-j+i} - b_{k-j+i}
    and bound is a[i-1] + 1 below the last index and a[i-1] at it (a[-1] = 1).
    """
    k = S.k
    j = depth(S)
    if j == 0:
        return []
    beta = shadow_decomposition_direct(S).coeffs
    hyp = hypotenusal_with_minus_one(j)
    out = []
    for i in range(j):
        gap = beta[k - 1 - j + i] - beta[k - j + i]
        bound = hyp[i] + (1 if i < j - 1 else 0)
        out.append((i, gap, bound))
    return out


def unique_colex_predicate(m: int, k: int, n: int) -> bool:
    """Whether the colex segment is the only extremal family of size m (up to relabeling)."""
    if not 1 <= m <= binom(n, k):
        raise InvalidInput(f"m must lie in [1, binom({n},{k})]")
    # the complete layer is unique; for k >= 2 the length test already says so
    if m == binom(n, k) or len(k_binomial_decomposition(m, k)) < k:
        return True
    return any(m == binom(q, k) - 1 for q in range(k + 1, n + 1))


def embedding_union(S: KSetFamily, r: int) -> KSetFamily:
    """Union over i = 0..k of (i-th shadow of S) joined with the i-subsets of [n+1, n+r]."""
    n, k = S.n, S.k
    if n + r > MAX_N:
        raise CapacityError(f"n + r = {n + r} exceeds the ground-set cap {MAX_N}")
    fresh = list(range(n + 1, n + r + 1))
    out = set()
    layer = set(S.masks)
    for i in range(k + 1):
        if i > 0:
            layer = shadow_masks(layer) if i < k else {0}
        for extra in itertools.combinations(fresh, i):
            em = mask_of(extra)
            out.update(low | em for low in layer)
    return KSetFamily(n + r, k, out)


def embed_extremal(S: KSetFamily) -> tuple[int, KSetFamily]:
    """Smallest r0 >= 0 making the padded family extremal, and the family built at max(r0, 1)."""
    beta = shadow_decomposition_direct(S).coeffs
    r0 = max(0, 1 - beta[-1])
    r = max(r0, 1)
    if S.n + r > MAX_N:
        raise CapacityError(f"embedding needs n + r = {S.n + r} > {MAX_N}")
    padded = embedding_union(S, r)
    if not is_extremal_direct(padded):
        raise AssertionError(f"embedded family at r={r} failed the direct extremality test")
    return r0, padded


def _require_extremal(S: KSetFamily) -> None:
    if not is_extremal_direct(S):
        raise InvalidInput("family is not extremal")


def add_set_verdict(S: KSetFamily, s) -> Verdict:
    """Whether S plus one more k-set stays extremal, read off the hypergraph of S."""
    _require_extremal(S)
    bits = s if isinstance(s, int) else mask_of(s)
    if bits.bit_count() != S.k or bits >> S.n:
        raise InvalidInput(f"{elements_of(bits)} is not a {S.k}-subset of [{S.n}]")
    if bits in S.mask_set:
        raise InvalidInput(f"{elements_of(bits)} already belongs to the family")
    H = hypergraph_of_family(S)
    inside = [e for e in H.edges if e & bits == e]
    if any(e.bit_count() == S.k for e in inside):
        return Verdict.STAYS_EXTREMAL
    grown = KSetFamily(S.n, S.k, S.masks + (bits,))
    ok = (
        len(inside) == 1
        and inside[0].bit_count() == H.max_edge_size()
        and is_initial_segment(S, up_to_iso=True)
        and is_initial_segment(grown, up_to_iso=True)
    )
    return Verdict.STAYS_EXTREMAL if ok else Verdict.BREAKS_EXTREMAL


def remove_set_verdict(S: KSetFamily, s) -> Verdict:
    """Whether S minus one member stays extremal.

    Only the (k-1)-subsets of s that no other member covers leave the shadow,
    so the test compares the shrunken shadow with the bound for m-1.
    """
    _require_extremal(S)
    bits = s if isinstance(s, int) else mask_of(s)
    if bits not in S.mask_set:
        raise InvalidInput(f"{elements_of(bits)} is not a member")
    m = len(S)
    if m == 1:
        raise InvalidInput("removing the only member leaves an empty family")
    if S.k == 1:
        return Verdict.STAYS_EXTREMAL
    others = shadow_masks(b for b in S.masks if b != bits)
    lost = sum(1 for f in shadow_masks([bits]) if f not in others)
    size = len(shadow_masks(S.masks)) - lost
    return Verdict.STAYS_EXTREMAL if size == kk_lower_bound(m - 1, S.k, 1) else Verdict.BREAKS_EXTREMAL


def maximal_chain_up(S: KSetFamily) -> bool:
    """Whether the complement can be added one set at a time keeping every step extremal."""
    _require_extremal(S)
    if S.k == 1:
        return True
    return is_initial_segment(shadow(S), up_to_iso=True)


def maximal_chain_up_by_hypergraph(S: KSetFamily) -> bool:
    _require_extremal(S)
    if S.k == 1:
        return True
    return is_colex_hypergraph(truncate(hypergraph_of_family(S), S.k - 1))
