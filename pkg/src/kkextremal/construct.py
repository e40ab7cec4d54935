"""Near-colex hypergraph constructions and the extremal-family decision procedure.

All constructions start from the colex hypergraph H_C(n_1, ..., n_k) (edges in
comfortable order, e_l has private vertex u_l and shared vertices v_1..v_{|e_l|-1})
and modify one edge of size j+1.  Their ball profiles have closed forms, which
is what lets the decision procedure run in O(nk) without building any tree.
"""

from __future__ import annotations

import collections
from typing import Sequence

from kkextremal.bbw import BbwConfig, step
from kkextremal.errors import CapacityError, InvalidCounts, InvalidInput, Unsupported
from kkextremal.hypergraph import (
    BallSpec,
    Hypergraph,
    Recipe,
    colex_counts,
    colex_layout,
    family_of_hypergraph,
)
from kkextremal.numeric import binom, full_k_binomial_decomposition
from kkextremal.setfam import MAX_N, KSetFamily, mask_of

# decide_extremal_with_depth materializes families up to this many k-sets
MATERIALIZE_LIMIT = 200_000

KINDS = ("A", "B", "Aprime", "Bprime")


def _prefix_sums(counts: Sequence[int]) -> list[int]:
    """[N_0, N_1, ..., N_k] with N_i = n_1 + ... + n_i."""
    out = [0]
    for c in counts:
        out.append(out[-1] + c)
    return out


def _shared_index(prefix: Sequence[int], last: int, j: int) -> int:
    """Largest s in [1, j] such that v_s lies in at least two of e_1..e_last."""
    for s in range(j, 0, -1):
        if last - prefix[s] >= 2:
            return s
    raise InvalidCounts(f"no shared vertex v_1..v_{j} has degree >= 2 among the first {last} edges")


def _check_j(j: int, counts: Sequence[int]) -> None:
    k = len(counts)
    if not 1 <= j <= k - 1:
        raise InvalidCounts(f"j must lie in [1, {k - 1}], got {j}")
    if counts[j] < 1:
        raise InvalidCounts(f"n_{j + 1} must be at least 1")


def _shared_vertex(n: int, tops: Sequence[int], i: int) -> int:
    """v_i = a_{i-1} + 1, defined for every i in [1, k]."""
    v = tops[i - 1] + 1
    if not 1 <= v <= n:
        raise InvalidCounts(f"no room for the shared vertex v_{i}")
    return v


def _build(kind: str, j: int, counts: Sequence[int], n: int, r: int | None) -> Hypergraph:
    counts = tuple(int(c) for c in counts)
    lay = colex_layout(n, counts)
    _check_j(j, counts)
    prefix = _prefix_sums(counts)
    N = prefix[j + 1]
    if r is None:
        r = N - 1
    elif not prefix[j] <= r <= N - 1:
        raise InvalidInput(f"r + 1 must lie in [{prefix[j] + 1}, {N}], got r = {r}")
    target = r + 1  # 1-based index of the modified edge
    t = _shared_index(prefix, target, j)
    if lay.tops[-1] < 0:
        raise InvalidCounts(f"n_1 + ... + n_k = {prefix[-1]} leaves no vertex of degree 0 (needs <= {n - len(counts)})")
    if kind in ("A", "Aprime") and target == N and target - prefix[t] < 3:
        # only e_{N-1} and e_N pass v_t; after the swap they form a colex pair
        raise InvalidCounts("A needs at least three edges through v_t up to the modified edge")
    v = (None,) + tuple(_shared_vertex(n, lay.tops, i) for i in range(1, j + 2))
    edges = []
    for idx, size in enumerate(lay.sizes):
        edges.append(set((lay.u[idx],) + lay.v[: size - 1]))
    e = edges[target - 1]
    e.discard(v[t])
    e.add(v[j + 1])
    if kind in ("A", "Aprime"):
        if lay.sizes[target - 2] < 2:
            raise InvalidCounts(f"e_{target - 1} is a single vertex, so A cannot borrow its private vertex")
        e.add(lay.u[target - 2])
        e.discard(lay.u[target - 1])
    return Hypergraph(n, tuple(mask_of(x) for x in edges), Recipe(kind, counts, j, r))


def construction_B(j: int, counts: Sequence[int], n: int) -> Hypergraph:
    """H_C with v_t swapped for v_{j+1} in the last edge of size j+1."""
    return _build("B", j, counts, n, None)


def construction_A(j: int, counts: Sequence[int], n: int) -> Hypergraph:
    """H_C with v_t -> u_{N-1} and u_N -> v_{j+1} in e_N, N = n_1 + ... + n_{j+1}."""
    return _build("A", j, counts, n, None)


def construction_A_prime(j: int, r: int, counts: Sequence[int], n: int) -> Hypergraph:
    return _build("Aprime", j, counts, n, r)


def construction_B_prime(j: int, r: int, counts: Sequence[int], n: int) -> Hypergraph:
    return _build("Bprime", j, counts, n, r)


def construction_balls(kind: str, counts: Sequence[int], j: int | None = None, r: int | None = None) -> list[BallSpec]:
    """Closed-form balls (one or two per edge) of a colex or modified colex hypergraph."""
    counts = tuple(counts)
    sizes = [i + 1 for i, c in enumerate(counts) for _ in range(c)]
    if kind == "colex":
        return sorted(BallSpec(l - 1, s) for l, s in enumerate(sizes, start=1))
    if kind not in KINDS:
        raise Unsupported(f"unknown construction {kind!r}")
    _check_j(j, counts)
    prefix = _prefix_sums(counts)
    N = prefix[j + 1]
    if r is None:
        r = N - 1
    target = r + 1
    t = _shared_index(prefix, target, j)
    first = BallSpec(prefix[t] + 1, j + 1)
    out = []
    for l, s in enumerate(sizes, start=1):
        if l < target:
            out.append(BallSpec(l - 1, s))
        elif l == target:
            out.append(first)
            if kind in ("B", "Bprime"):
                out.append(BallSpec(target - 1, j + 2))
        elif kind in ("A", "Aprime"):
            out.append(BallSpec(l - 2, s))
        elif l <= N:
            out.extend((BallSpec(l - 1, j + 1), BallSpec(l - 1, j + 2)))
        else:
            out.append(BallSpec(l - 1, s))
    return sorted(out)


def ball_profile_of_construction(H: Hypergraph) -> list[BallSpec]:
    recipe = H.recipe
    if recipe is None:
        raise Unsupported("hypergraph does not come from a known construction")
    return construction_balls(recipe.kind, recipe.counts, recipe.j, recipe.r)


def target_walls(n: int, k: int, m: int) -> list[int]:
    """[W_0, W_1, ..., W_k]: the walls an extremal family of size m must produce."""
    alpha = full_k_binomial_decomposition(m, k).coeffs
    walls = [0]
    for i in range(1, k):
        walls.append(n - alpha[i - 1] - i)
    walls.append(n - alpha[k - 1] - (k - 1))
    return walls


def _forced_counts(kind: str, n: int, k: int, j: int, walls: Sequence[int]) -> tuple[int, ...] | None:
    """Edge counts making construction `kind` hit every target wall, or None.

    In iteration i the process handles exactly the balls of delay i, so the
    number of size-i edges is forced by W_i - W_{i-1} minus the balls already
    waiting.  Ball positions follow the closed-form profile, so each iteration
    costs O(n).
    """
    config, _ = step(BbwConfig({}, 0, 0))
    counts: list[int] = []
    prefix = [0]
    t = None
    for i in range(1, k + 1):
        waiting = sum(c for (_, d), c in config.balls.items() if d == i)
        c = walls[i] - walls[i - 1] - waiting
        if c < 0 or prefix[-1] + c > n - i + 1:
            return None
        counts.append(c)
        prefix.append(prefix[-1] + c)
        new: list[BallSpec] = []
        start = prefix[i - 1]
        if i < j + 1:
            new = [BallSpec(l - 1, i) for l in range(start + 1, prefix[i] + 1)]
        elif i == j + 1:
            if c < 1:
                return None
            N = prefix[i]
            t = next((s for s in range(j, 0, -1) if N - prefix[s] >= 2), None)
            if t is None:
                return None
            if kind == "A" and N - prefix[t] < 3:
                return None
            new = [BallSpec(l - 1, i) for l in range(start + 1, N)]
            new.append(BallSpec(prefix[t] + 1, j + 1))
            if kind == "B":
                new.append(BallSpec(N - 1, j + 2))
        else:
            shift = 2 if kind == "A" else 1
            new = [BallSpec(l - shift, i) for l in range(start + 1, prefix[i] + 1)]
        balls = collections.Counter(config.balls)
        for b in new:
            balls[(b.position, b.delay)] += 1
        config, abrupt = step(BbwConfig(balls, config.wall, config.iteration))
        if abrupt or config.wall != walls[i]:
            return None
    return tuple(counts)


def _vertex_room(n: int, counts: Sequence[int], j: int) -> bool:
    try:
        lay = colex_layout(n, counts)
    except InvalidCounts:
        return False
    return lay.tops[j] >= 0


def decide_hypergraph(n: int, k: int, m: int, t: int) -> Hypergraph | None:
    """Hypergraph of an extremal family of m k-subsets of [n] with depth t, or None.

    Tries construction A, then B, with the counts forced by the target walls.
    """
    if not 1 <= k <= n:
        raise InvalidInput(f"k must lie in [1, {n}]")
    if not 1 <= m <= binom(n, k):
        raise InvalidInput(f"m must lie in [1, binom({n},{k})]")
    if t < 0:
        raise InvalidInput("depth must be non-negative")
    if t == 0:
        from kkextremal.hypergraph import colex_hypergraph

        return colex_hypergraph(n, colex_counts(n, k, m))
    j = k - t
    if j < 1:
        return None
    walls = target_walls(n, k, m)
    for kind in ("A", "B"):
        counts = _forced_counts(kind, n, k, j, walls)
        if counts is None or not _vertex_room(n, counts, j):
            continue
        try:
            H = construction_A(j, counts, n) if kind == "A" else construction_B(j, counts, n)
        except (InvalidCounts, InvalidInput):
            continue
        if _walls_match(H, k, walls):
            return H
    return None


def _walls_match(H: Hypergraph, k: int, walls: Sequence[int]) -> bool:
    """Re-run the whole closed-form profile in one go and compare every wall."""
    from kkextremal.bbw import init_from_balls, walls_of_config

    config = init_from_balls((b.position, b.delay) for b in ball_profile_of_construction(H))
    try:
        got, _, abrupt = walls_of_config(config, k, max_wall=walls[-1])
    except CapacityError:
        return False
    return not abrupt and list(got) == list(walls[1:])


def decide_extremal_with_depth(n: int, k: int, m: int, t: int) -> KSetFamily | None:
    """Materialized version of decide_hypergraph, verified directly before returning."""
    from kkextremal.extremal import depth, is_extremal_direct

    if n > MAX_N or binom(n, k) > MATERIALIZE_LIMIT:
        raise CapacityError(f"binom({n},{k}) sets is too many to materialize; use decide_hypergraph")
    H = decide_hypergraph(n, k, m, t)
    if H is None:
        return None
    S = family_of_hypergraph(H, k)
    if len(S) != m or not is_extremal_direct(S) or depth(S) != t:
        raise AssertionError(f"decision produced a family failing verification: {H}")
    return S
