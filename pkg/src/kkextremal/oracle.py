"""Exhaustive ground truth at desk scale.

Families of k-subsets of [n] are indexed by bit codes over the colex list of
k-sets.  For the sweeps, a family is represented by its simplicial complex as
a bitset over all 2^n subsets of [n]; shadows, minimal non-faces and blocking
sets then reduce to a handful of shifts and masks per family.  Extension trees
and process runs are memoised, since only a few thousand distinct ones occur.
"""

from __future__ import annotations

import collections
import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from kkextremal.bbw import beta_from_sizes, beta_from_walls, init_from_balls, walls_of_config
from kkextremal.errors import CapacityError, InvalidInput, NoTree
from kkextremal.hypergraph import balls_of_leaves, grow_extension_tree, _blocking_key
from kkextremal.numeric import binom, kk_lower_bound
from kkextremal.setfam import (
    KSetFamily,
    _degrees,
    elements_of,
    find_isomorphism,
    format_family,
    initial_segment,
    ksets_colex,
    shadow_masks,
)

DEFAULT_BUDGET = 20_000_000
# exhaustive sweeps are limited to ground sets whose subset bitsets stay small
SWEEP_MAX_N = 8
# counterexamples kept per check
MAX_COUNTEREXAMPLES = 5


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class Universe:
    """Subset bitsets over 2^n positions: bit x stands for the vertex set with mask x."""

    def __init__(self, n: int, k: int):
        if not 1 <= n <= SWEEP_MAX_N:
            raise CapacityError(f"exhaustive sweeps support n <= {SWEEP_MAX_N}")
        if not 1 <= k <= n:
            raise InvalidInput(f"k must lie in [1, {n}]")
        self.n = n
        self.k = k
        size = 1 << n
        self.full = (1 << size) - 1
        self.without = []
        for i in range(n):
            acc = 0
            for x in range(size):
                if not x >> i & 1:
                    acc |= 1 << x
            self.without.append(acc)
        self.layer = [0] * (n + 1)
        for x in range(size):
            self.layer[x.bit_count()] |= 1 << x
        self.at_most_k = 0
        for r in range(1, k + 1):
            self.at_most_k |= self.layer[r]
        self.down = [self._down(x) for x in range(size)]
        self.disjoint = [self.down[(size - 1) ^ x] for x in range(size)]
        self.up = [self._up(x) for x in range(size)]
        self.ksets = list(ksets_colex(n, k))

    def _down(self, s: int) -> int:
        acc = 0
        sub = s
        while True:
            acc |= 1 << sub
            if sub == 0:
                return acc
            sub = (sub - 1) & s

    def _up(self, s: int) -> int:
        acc = 0
        rest = ((1 << self.n) - 1) ^ s
        sub = rest
        while True:
            acc |= 1 << (s | sub)
            if sub == 0:
                return acc
            sub = (sub - 1) & rest

    def minimal(self, family: int) -> int:
        """Members of an up-closed (within some down-set) bitset with no member one element smaller."""
        covered = 0
        for i in range(self.n):
            covered |= (family & self.without[i]) << (1 << i)
        return family & ~covered

    def non_face_edges(self, complex_bits: int) -> list[int]:
        """Minimal non-faces of size <= k, in comfortable order."""
        acc = self.at_most_k & ~complex_bits
        for i in range(self.n):
            acc &= ((complex_bits & self.without[i]) << (1 << i)) | self.without[i]
        return sorted(_bits(acc), key=lambda e: (e.bit_count(), e))

    def blocking(self, edges: list[int]) -> list[int]:
        """Per edge, the bitset of its blocking sets B_j (comfortable order)."""
        out = []
        hitting = self.full
        for e in edges:
            out.append(self.minimal(hitting & self.disjoint[e]))
            hitting &= ~self.disjoint[e]
        return out


@lru_cache(maxsize=None)
def _tree_balls(edge: int, blocking_bits: int) -> tuple[tuple[int, int], ...]:
    sets = sorted(_bits(blocking_bits), key=_blocking_key)
    if not sets:
        raise NoTree(f"no blocking set avoids edge {elements_of(edge)}")
    tree = grow_extension_tree(edge, sets)
    return tuple((b.position, b.delay) for b in balls_of_leaves(edge.bit_count(), tree.leaf_pairs()))


@lru_cache(maxsize=200_000)
def _walls(balls: tuple[tuple[int, int], ...], k: int) -> tuple[tuple[int, ...], bool]:
    walls, _, abrupt = walls_of_config(init_from_balls(balls), k)
    return walls, abrupt


@dataclass
class FamilyView:
    """Everything the sweep checks need about one family."""

    code: int
    m: int
    complex_bits: int
    sizes: list[int]
    _edges: list[int] | None = None
    _balls: tuple[tuple[int, int], ...] | None = None

    def edges(self, U: Universe) -> list[int]:
        if self._edges is None:
            self._edges = U.non_face_edges(self.complex_bits)
        return self._edges

    def balls(self, U: Universe) -> tuple[tuple[int, int], ...]:
        if self._balls is None:
            edges = self.edges(U)
            acc: list[tuple[int, int]] = []
            for e, b in zip(edges, U.blocking(edges)):
                acc.extend(_tree_balls(e, b))
            self._balls = tuple(sorted(acc))
        return self._balls

    def family(self, U: Universe) -> KSetFamily:
        return KSetFamily(U.n, U.k, (U.ksets[i] for i in _bits(self.code)))


def family_count(n: int, k: int) -> int:
    return (1 << binom(n, k)) - 1


def _check_budget(count: int, budget: int) -> None:
    if count > budget:
        raise CapacityError(f"{count} families exceed the budget of {budget}")


def sweep(U: Universe, start: int = 1, stop: int | None = None) -> Iterator[FamilyView]:
    """Every non-empty family with code in [start, stop), with complex and shadow sizes."""
    N = len(U.ksets)
    stop = (1 << N) if stop is None else stop
    half = N // 2
    low_table = [0] * (1 << half)
    for code in range(1, 1 << half):
        low = code & -code
        low_table[code] = low_table[code ^ low] | U.down[U.ksets[low.bit_length() - 1]]
    high_table = [0] * (1 << (N - half))
    for code in range(1, 1 << (N - half)):
        low = code & -code
        high_table[code] = high_table[code ^ low] | U.down[U.ksets[half + low.bit_length() - 1]]
    mask = (1 << half) - 1
    layers = [U.layer[U.k - i] for i in range(U.k)]
    for code in range(max(start, 1), stop):
        c = low_table[code & mask] | high_table[code >> half]
        sizes = [(c & layer).bit_count() for layer in layers]
        yield FamilyView(code, sizes[0], c, sizes)


def _code_of(U: Universe, S: KSetFamily) -> int:
    index = {b: i for i, b in enumerate(U.ksets)}
    return sum(1 << index[b] for b in S.masks)


def enumerate_families(n: int, k: int, m: int, budget: int = DEFAULT_BUDGET) -> Iterator[KSetFamily]:
    """Every family of m k-subsets of [n], each exactly once, in lexicographic order of colex indices."""
    ksets = list(ksets_colex(n, k))
    if not 1 <= m <= len(ksets):
        raise InvalidInput(f"m must lie in [1, {len(ksets)}]")
    _check_budget(binom(len(ksets), m), budget)
    for combo in itertools.combinations(ksets, m):
        yield KSetFamily(n, k, combo)


def _is_extremal_sizes(m: int, k: int, shadow_size: int) -> bool:
    return k == 1 or shadow_size == kk_lower_bound(m, k, 1)


def _iso_key(S: KSetFamily) -> tuple:
    return (tuple(sorted(_degrees(S.n, S.masks))), tuple(len(x) for x in _shadow_chain(S)))


def _shadow_chain(S: KSetFamily) -> list[set[int]]:
    chain = [set(S.masks)]
    for _ in range(S.k - 1):
        chain.append(shadow_masks(chain[-1]))
    return chain


def dedupe_up_to_iso(families: list[KSetFamily]) -> list[KSetFamily]:
    """One representative per isomorphism class (exact pairwise tests inside invariant buckets)."""
    buckets: dict[tuple, list[KSetFamily]] = collections.defaultdict(list)
    reps = []
    for S in families:
        bucket = buckets[_iso_key(S)]
        if any(find_isomorphism(S.n, S.masks, R.masks) is not None for R in bucket):
            continue
        bucket.append(S)
        reps.append(S)
    return reps


def enumerate_extremal(n: int, k: int, m: int, up_to_iso: bool = False, budget: int = DEFAULT_BUDGET) -> list[KSetFamily]:
    bound = kk_lower_bound(m, k, 1) if k > 1 else None
    out = []
    for S in enumerate_families(n, k, m, budget):
        if k == 1 or len(shadow_masks(S.masks)) == bound:
            out.append(S)
    return dedupe_up_to_iso(out) if up_to_iso else out


@dataclass
class LabelledCount:
    total: int
    colex_shadow: int

    @property
    def ratio(self) -> float:
        return self.total / self.colex_shadow if self.colex_shadow else float("inf")


def count_extremal_labelled(n: int, k: int, budget: int = DEFAULT_BUDGET) -> LabelledCount:
    """|E| and |E_0|: extremal families, and those whose shadow is the labelled colex segment."""
    if k < 2:
        raise InvalidInput("shadow of singletons is not a k-1 family; need k >= 2")
    _check_budget(family_count(n, k), budget)
    U = Universe(n, k)
    # labelled colex segment of each length, as a complex-layer bitset
    colex_layer = {}
    lower = list(ksets_colex(n, k - 1))
    acc = 0
    for i, b in enumerate(lower, start=1):
        acc |= 1 << b
        colex_layer[i] = acc
    total = colex = 0
    layer = U.layer[k - 1]
    for view in sweep(U):
        if not _is_extremal_sizes(view.m, k, view.sizes[1]):
            continue
        total += 1
        if view.complex_bits & layer == colex_layer[view.sizes[1]]:
            colex += 1
    return LabelledCount(total, colex)


@dataclass
class DepthCensus:
    by_depth: dict[int, int]
    total: int
    fraction_depth_le3: float
    fraction_depth_le4: float
    max_depth_by_m: dict[int, int] = field(default_factory=dict)


def _depth_from_chain(n: int, chain: list[set[int]], k: int) -> int:
    for j, layer in enumerate(chain):
        target = initial_segment(n, k - j, len(layer)).masks
        if find_isomorphism(n, layer, target) is not None:
            return j
    return k - 1


def depth_census(n: int, k: int, budget: int = DEFAULT_BUDGET) -> DepthCensus:
    _check_budget(family_count(n, k), budget)
    U = Universe(n, k)
    by_depth: collections.Counter[int] = collections.Counter()
    worst: dict[int, int] = {}
    for view in sweep(U):
        if not _is_extremal_sizes(view.m, k, view.sizes[1] if k > 1 else 0):
            continue
        d = _depth_from_chain(n, _shadow_chain(view.family(U)), k)
        by_depth[d] += 1
        worst[view.m] = max(worst.get(view.m, 0), d)
    N = len(U.ksets)
    le3 = sum(1 for m in range(1, N + 1) if worst.get(m, 0) <= 3) / N
    le4 = sum(1 for m in range(1, N + 1) if worst.get(m, 0) <= 4) / N
    return DepthCensus(dict(sorted(by_depth.items())), sum(by_depth.values()), le3, le4, dict(sorted(worst.items())))


class _Check:
    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.failures = 0
        self.examples: list[str] = []
        self.seconds = 0.0

    def record(self, ok: bool, witness=None) -> None:
        self.checked += 1
        if not ok:
            self.failures += 1
            if len(self.examples) < MAX_COUNTEREXAMPLES and witness is not None:
                self.examples.append(witness if isinstance(witness, str) else format_family(witness))

    def merge(self, other: "_Check") -> None:
        self.checked += other.checked
        self.failures += other.failures
        self.examples.extend(other.examples[: MAX_COUNTEREXAMPLES - len(self.examples)])
        self.seconds += other.seconds

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.failures == 0,
            "checked": self.checked,
            "failures": self.failures,
            "counterexamples": self.examples,
            "seconds": round(self.seconds, 3),
        }


SWEEP_CHECKS = (
    "kk_bound",
    "kk_equality_propagates",
    "three_way_extremality",
    "walls_match_beta",
    "hypergraph_roundtrip",
    "tree_partition",
    "monotonicity",
    "extremal_beta_is_full_decomposition",
)


def _sweep_chunk(n: int, k: int, start: int, stop: int) -> tuple[dict[str, _Check], dict[int, list[int]]]:
    """Family-local checks on codes [start, stop); also returns extremal codes by size."""
    U = Universe(n, k)
    checks = {name: _Check(name) for name in SWEEP_CHECKS}
    extremal: dict[int, list[int]] = collections.defaultdict(list)
    N = len(U.ksets)
    bounds = {m: [kk_lower_bound(m, k, i) for i in range(k)] for m in range(1, N + 1)}
    full_dec = {}
    from kkextremal.numeric import full_k_binomial_decomposition

    for m in range(1, N + 1):
        full_dec[m] = list(full_k_binomial_decomposition(m, k).coeffs)
    t0 = time.perf_counter()
    for view in sweep(U, start, stop):
        m = view.m
        sizes = view.sizes
        bound = bounds[m]
        witness = lambda: view.family(U)  # noqa: E731
        ok = all(sizes[i] >= bound[i] for i in range(k))
        checks["kk_bound"].record(ok, None if ok else witness())
        direct = k == 1 or sizes[1] == bound[1]
        if direct:
            ok = all(sizes[i] == bound[i] for i in range(k))
            checks["kk_equality_propagates"].record(ok, None if ok else witness())
        beta = beta_from_sizes(sizes)
        balls = view.balls(U)
        walls, abrupt = _walls(balls, k)
        via_walls = list(beta_from_walls(n, k, walls).coeffs) if len(walls) == k else None
        ok = via_walls == beta and not abrupt
        checks["walls_match_beta"].record(ok, None if ok else witness())
        by_beta = beta[-1] >= 1
        by_wall = len(walls) == k and walls[k - 1] <= n - k
        ok = direct == by_beta == by_wall
        checks["three_way_extremality"].record(ok, None if ok else witness())
        ok = all(beta[i] > beta[i + 1] for i in range(k - 2)) and (k < 2 or beta[k - 2] >= beta[k - 1])
        checks["monotonicity"].record(ok, None if ok else witness())
        members = 0
        for i in _bits(view.code):
            members |= 1 << U.ksets[i]
        avoiding = U.layer[k]
        for e in view.edges(U):
            avoiding &= ~U.up[e]
        ok = avoiding == members
        checks["hypergraph_roundtrip"].record(ok, None if ok else witness())
        missing = sum(binom(n - pos - delay, k - delay) for pos, delay in balls)
        ok = missing == N - m
        checks["tree_partition"].record(ok, None if ok else witness())
        if direct:
            extremal[m].append(view.code)
            ok = beta == full_dec[m]
            checks["extremal_beta_is_full_decomposition"].record(ok, None if ok else witness())
    elapsed = time.perf_counter() - t0
    for c in checks.values():
        c.seconds = elapsed / len(checks)
    return checks, dict(extremal)


def run_sweep(n: int, k: int, threads: int = 1, budget: int = DEFAULT_BUDGET) -> tuple[dict[str, _Check], dict[int, list[int]]]:
    """Family-local checks over every non-empty family, optionally split across processes."""
    total = family_count(n, k)
    _check_budget(total, budget)
    stop = total + 1
    threads = max(1, threads)
    if threads == 1:
        return _sweep_chunk(n, k, 1, stop)
    step_size = -(-stop // (threads * 4))
    ranges = [(s, min(s + step_size, stop)) for s in range(1, stop, step_size)]
    checks = {name: _Check(name) for name in SWEEP_CHECKS}
    extremal: dict[int, list[int]] = collections.defaultdict(list)
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_sweep_chunk, n, k, a, b) for a, b in ranges]
        for fut in futures:  # submission order keeps the merge deterministic
            part, ext = fut.result()
            for name, c in part.items():
                checks[name].merge(c)
            for m, codes in ext.items():
                extremal[m].extend(codes)
    return checks, dict(extremal)


def verify_all(n: int, k: int, budget: int = DEFAULT_BUDGET, threads: int = 1, seed: int = 0, sample: int = 2000) -> dict:
    """Run every cross-module invariant at (n, k); failures are report content, not exceptions.

    Per-set verdict checks (add/remove) and decompositions of deep families run
    on every extremal family when there are at most `sample` of them, and on a
    seeded sample otherwise.
    """
    from kkextremal.construct import decide_hypergraph
    from kkextremal.extremal import (
        Verdict,
        add_set_verdict,
        depth_bound,
        hn_necessary,
        maximal_chain_up,
        remove_set_verdict,
        unique_colex_predicate,
    )

    started = time.perf_counter()
    checks, extremal = run_sweep(n, k, threads, budget)
    U = Universe(n, k)
    N = len(U.ksets)
    families = {m: [_family_of_code(U, c) for c in codes] for m, codes in extremal.items()}

    def timed(name: str, body) -> None:
        c = _Check(name)
        t0 = time.perf_counter()
        body(c)
        c.seconds = time.perf_counter() - t0
        checks[name] = c

    def uniqueness(c: _Check) -> None:
        for m in range(1, N + 1):
            classes = dedupe_up_to_iso(families.get(m, []))
            ok = (len(classes) == 1) == unique_colex_predicate(m, k, n)
            c.record(ok, f"m={m}: {len(classes)} classes")

    depths: dict[int, dict[int, int]] = {}

    def depth_and_hn(c_depth: _Check, c_hn: _Check) -> None:
        for m, fams in families.items():
            for S in fams:
                chain = _shadow_chain(S)
                d = _depth_from_chain(n, chain, k)
                depths.setdefault(m, {})
                depths[m][d] = depths[m].get(d, 0) + 1
                c_depth.record(d <= depth_bound(max(n, 2)), S)
                for t in range(d):
                    c_hn.record(hn_necessary(S, t), S)

    c_depth, c_hn = _Check("depth_bound"), _Check("hn_necessary")
    t0 = time.perf_counter()
    depth_and_hn(c_depth, c_hn)
    c_depth.seconds = c_hn.seconds = (time.perf_counter() - t0) / 2
    checks["depth_bound"] = c_depth
    checks["hn_necessary"] = c_hn
    timed("uniqueness_predicate", uniqueness)

    def decision(c: _Check) -> None:
        for m in range(1, N + 1):
            for t in range(k):
                want = t in depths.get(m, {})
                got = decide_hypergraph(n, k, m, t) is not None
                c.record(got == want, f"m={m} t={t}: decide={got} exists={want}")

    timed("decision_matches_existence", decision)

    rng = random.Random(seed)
    pool = [S for fams in families.values() for S in fams]
    chosen = pool if len(pool) <= sample else rng.sample(pool, sample)
    ext_codes = {c for codes in extremal.values() for c in codes}
    index = {b: i for i, b in enumerate(U.ksets)}

    def verdicts(c: _Check) -> None:
        for S in chosen:
            code = sum(1 << index[b] for b in S.masks)
            for i, b in enumerate(U.ksets):
                if code >> i & 1:
                    if len(S) > 1:
                        real = (code ^ (1 << i)) in ext_codes
                        got = remove_set_verdict(S, b) is Verdict.STAYS_EXTREMAL
                        c.record(got == real, f"remove {elements_of(b)} from\n" + format_family(S))
                else:
                    real = (code | (1 << i)) in ext_codes
                    got = add_set_verdict(S, b) is Verdict.STAYS_EXTREMAL
                    c.record(got == real, f"add {elements_of(b)} to\n" + format_family(S))

    timed("add_remove_verdicts", verdicts)

    def chains(c: _Check) -> None:
        reach = _chain_reachability(U, ext_codes)
        for S in chosen:
            code = sum(1 << index[b] for b in S.masks)
            c.record(maximal_chain_up(S) == reach[code], S)

    timed("maximal_chain_up", chains)

    report_checks = [checks[name].as_dict() for name in sorted(checks)]
    return {
        "schema": "1",
        "n": n,
        "k": k,
        "families": family_count(n, k),
        "extremal": sum(len(v) for v in extremal.values()),
        "sampled_for_verdicts": len(chosen),
        "seed": seed,
        "threads": threads,
        "passed": all(c["passed"] for c in report_checks),
        "checks": report_checks,
        "seconds": round(time.perf_counter() - started, 3),
    }


def _family_of_code(U: Universe, code: int) -> KSetFamily:
    return KSetFamily(U.n, U.k, (U.ksets[i] for i in _bits(code)))


def _chain_reachability(U: Universe, ext_codes: set[int]) -> dict[int, bool]:
    """For each extremal code, whether the full family is reachable adding one extremal step at a time."""
    N = len(U.ksets)
    full = (1 << N) - 1
    reach = {full: True}
    for code in sorted(ext_codes, key=lambda c: -c.bit_count()):
        if code == full:
            continue
        ok = False
        for i in range(N):
            if not code >> i & 1:
                nxt = code | (1 << i)
                if nxt in ext_codes and reach.get(nxt, False):
                    ok = True
                    break
        reach[code] = ok
    return reach


def extremal_depth_table(n: int, k: int, budget: int = DEFAULT_BUDGET) -> dict[int, set[int]]:
    """m -> set of depths realised by extremal families of size m."""
    _check_budget(family_count(n, k), budget)
    U = Universe(n, k)
    out: dict[int, set[int]] = collections.defaultdict(set)
    for view in sweep(U):
        if _is_extremal_sizes(view.m, k, view.sizes[1] if k > 1 else 0):
            out[view.m].add(_depth_from_chain(n, _shadow_chain(view.family(U)), k))
    return dict(out)


def random_extremal_walk(n: int, k: int, steps: int, seed: int = 0) -> Iterator[KSetFamily]:
    """Extremal families met by a seeded random walk of single-set additions and removals."""
    from kkextremal.extremal import is_extremal_direct

    rng = random.Random(seed)
    ksets = list(ksets_colex(n, k))
    N = len(ksets)
    current = set(initial_segment(n, k, rng.randint(1, N)).masks)
    for _ in range(steps):
        b = rng.choice(ksets)
        cand = current ^ {b}
        if not cand:
            continue
        S = KSetFamily(n, k, cand)
        if is_extremal_direct(S):
            current = cand
            yield S

