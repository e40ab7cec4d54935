"""The bins-balls-wall process, hypotenusal numbers and the wall to beta readout.

A ball (j, s) sits in bin j with delay s.  In iteration t every ball with
delay <= t is processed in ascending (position, delay) order; processing a
ball at j <= w drops one ball of delay s+1 into each bin j..w-1 and moves the
wall from w to w+1.  A ball beyond the wall stops the run abruptly.

Multiplicities are Python ints, and c identical balls are processed in one
closed-form update: the r-th of them sees the wall at w+r-1, so together they
leave c descendants in every bin j..w-1 and a falling ramp c-1, ..., 1 over
bins w..w+c-2.
"""

from __future__ import annotations

import collections
import heapq
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from kkextremal.errors import CapacityError, InvalidInput
from kkextremal.hypergraph import Hypergraph, tree_ball_specs
from kkextremal.numeric import Decomposition, Kind, binom
from kkextremal.setfam import KSetFamily, shadow_sizes


@dataclass(frozen=True)
class BbwConfig:
    balls: Mapping[tuple[int, int], int] = field(default_factory=dict)
    wall: int = 0
    iteration: int = 0

    def __post_init__(self) -> None:
        clean = {}
        for (pos, delay), count in self.balls.items():
            if pos < 0 or delay < 0:
                raise InvalidInput(f"ball ({pos}, {delay}) has a negative coordinate")
            if count < 0:
                raise InvalidInput(f"ball ({pos}, {delay}) has negative multiplicity")
            if count:
                clean[(pos, delay)] = count
        object.__setattr__(self, "balls", clean)
        if self.wall < 0 or self.iteration < 0:
            raise InvalidInput("wall and iteration must be non-negative")

    def total(self) -> int:
        return sum(self.balls.values())


@dataclass(frozen=True)
class WallTrace:
    """walls[i] is the wall at the beginning of iteration start+i."""

    walls: tuple[int, ...]
    start: int = 0

    def __len__(self) -> int:
        return len(self.walls)

    def __getitem__(self, i):
        return self.walls[i]

    def end_of(self, iteration: int) -> int:
        return self.walls[iteration - self.start + 1]

    def ends(self) -> tuple[int, ...]:
        """Walls at the ends of iterations 1, 2, ... (as far as recorded)."""
        return self.walls[max(2 - self.start, 0):]


class _Deferred:
    """Descendant counts per bin, accumulated as difference arrays."""

    def __init__(self) -> None:
        self.const: dict[int, int] = collections.defaultdict(int)
        self.slope: dict[int, int] = collections.defaultdict(int)

    def add(self, j: int, wall: int, c: int) -> None:
        if wall > j:
            self.const[j] += c
            self.const[wall] -= c
        if c > 1:
            # value (wall + c - 1) - p on bins wall .. wall + c - 2
            end = wall + c - 1
            self.const[wall] += end
            self.const[end] -= end
            self.slope[wall] -= 1
            self.slope[end] += 1

    def items(self) -> Iterable[tuple[int, int]]:
        points = sorted(set(self.const) | set(self.slope))
        const = slope = 0
        for a, b in zip(points, points[1:]):
            const += self.const.get(a, 0)
            slope += self.slope.get(a, 0)
            if const == 0 and slope == 0:
                continue
            for p in range(a, b):
                v = const + slope * p
                if v:
                    yield p, v


def step(config: BbwConfig, max_wall: int | None = None) -> tuple[BbwConfig, bool]:
    """One full iteration; returns the next configuration and the abrupt flag.

    With max_wall set, a wall about to pass it raises CapacityError instead of
    materializing descendant bins far beyond any ground set of interest.
    """
    t = config.iteration
    pending = dict(config.balls)
    heap = [key for key in pending if key[1] <= t]
    heapq.heapify(heap)
    queued = set(heap)
    deferred: dict[int, _Deferred] = {}
    w = config.wall
    abrupt = False
    while heap:
        key = heapq.heappop(heap)
        j, s = key
        if j > w:
            heapq.heappush(heap, key)
            abrupt = True
            break
        queued.discard(key)
        c = pending.pop(key)
        if max_wall is not None and w + c > max_wall:
            raise CapacityError(f"wall would pass {max_wall}")
        if s + 1 <= t:
            # descendants are due in this same iteration
            for p in range(j, w):
                _bump(pending, heap, queued, (p, s + 1), c)
            for p in range(w, w + c - 1):
                _bump(pending, heap, queued, (p, s + 1), w + c - 1 - p)
        else:
            deferred.setdefault(s + 1, _Deferred()).add(j, w, c)
        w += c
    for delay, acc in deferred.items():
        for p, v in acc.items():
            pending[(p, delay)] = pending.get((p, delay), 0) + v
    return BbwConfig(pending, w, t + 1), abrupt


def _bump(pending, heap, queued, key, c) -> None:
    pending[key] = pending.get(key, 0) + c
    if key not in queued:
        queued.add(key)
        heapq.heappush(heap, key)


def run(config: BbwConfig, steps: int, max_wall: int | None = None) -> tuple[WallTrace, BbwConfig, bool]:
    if steps < 0:
        raise InvalidInput("number of iterations must be non-negative")
    walls = [config.wall]
    abrupt = False
    start = config.iteration
    for _ in range(steps):
        config, abrupt = step(config, max_wall)
        walls.append(config.wall)
        if abrupt:
            break
    return WallTrace(tuple(walls), start), config, abrupt


def simulate_naive(config: BbwConfig, steps: int, order=None) -> tuple[list[int], dict, bool]:
    """Ball-by-ball reference simulation.

    `order` optionally reorders the eligible balls of an iteration; it receives
    the list of eligible (pos, delay) balls and returns the one to process next
    (only legal choices are offered).  Default: smallest (pos, delay).
    """
    balls = collections.Counter(config.balls)
    w = config.wall
    t = config.iteration
    walls = [w]
    abrupt = False
    for _ in range(steps):
        while True:
            eligible = sorted(key for key, c in balls.items() if c and key[1] <= t)
            if not eligible:
                break
            legal = [key for key in eligible if key[0] <= w]
            if not legal:
                abrupt = True
                break
            key = legal[0] if order is None else order(legal)
            balls[key] -= 1
            if not balls[key]:
                del balls[key]
            j, s = key
            for p in range(j, w):
                balls[(p, s + 1)] += 1
            w += 1
        t += 1
        walls.append(w)
        if abrupt:
            break
    return walls, dict(balls), abrupt


def init_from_hypergraph(H: Hypergraph, ordering: Sequence[int] | None = None) -> BbwConfig:
    counts = collections.Counter((b.position, b.delay) for b in tree_ball_specs(H, ordering))
    return BbwConfig(dict(counts), 0, 0)


def init_from_balls(balls: Iterable[tuple[int, int]]) -> BbwConfig:
    return BbwConfig(dict(collections.Counter(balls)), 0, 0)


def beta_from_walls(n: int, k: int, ends: Sequence[int]) -> Decomposition:
    """Shadow decomposition from the walls w_1..w_k at the ends of iterations 1..k."""
    if len(ends) < k:
        raise InvalidInput(f"need the walls after iterations 1..{k}, got {len(ends)}")
    coeffs = [n - ends[i] - (i + 1) for i in range(k - 1)]
    coeffs.append(n - ends[k - 1] - (k - 1))
    return Decomposition(Kind.SHADOW, k, tuple(coeffs))


def walls_of_config(config: BbwConfig, k: int, max_wall: int | None = None) -> tuple[tuple[int, ...], BbwConfig, bool]:
    """Walls after iterations 1..k of a fresh configuration."""
    trace, final, abrupt = run(config, k + 1, max_wall)
    return trace.ends()[:k], final, abrupt


def shadow_decomposition_direct(S: KSetFamily) -> Decomposition:
    """beta from the iterated shadow sizes through the recursion."""
    k = S.k
    if k < 1:
        raise InvalidInput("families of empty sets have no shadow decomposition")
    sizes = shadow_sizes(S)  # sizes[i] = |i-th shadow|
    return Decomposition(Kind.SHADOW, k, tuple(beta_from_sizes(sizes)))


def beta_from_sizes(sizes: Sequence[int]) -> list[int]:
    """beta from [|S|, |shadow|, ..., |(k-1)-th shadow|]."""
    k = len(sizes)
    if k == 1:
        return [sizes[0]]
    beta = [sizes[k - 1] - 1]
    for i in range(1, k - 1):
        beta.append(sizes[k - i - 1] - sum(binom(beta[j], i + 1 - j) for j in range(i)) - 1)
    beta.append(sizes[0] - sum(binom(beta[j], k - j) for j in range(k - 1)))
    return beta


# hypotenusal numbers ------------------------------------------------------


def _recenter(coeffs: Sequence[int], shift: int) -> list[int]:
    """Rewrite sum c_d binom(u + shift, d) in the basis binom(u, i)."""
    out = [0] * len(coeffs)
    for d, c in enumerate(coeffs):
        if c:
            for i in range(d + 1):
                out[i] += c * binom(shift, d - i)
    return out


def _basis_sum(coeffs: Sequence[int], length: int) -> int:
    """sum_{u=0}^{length-1} sum_d c_d binom(u, d)."""
    return sum(c * binom(length, d + 1) for d, c in enumerate(coeffs))


class _PiecewiseCounts:
    """Ball counts per bin as piecewise polynomials, segments (lo, hi, coeffs)."""

    def __init__(self, segments: list[tuple[int, int, list[int]]]):
        self.segments = [seg for seg in segments if seg[0] <= seg[1]]

    def total(self) -> int:
        return sum(_basis_sum(c, hi - lo + 1) for lo, hi, c in self.segments)

    def value(self, x: int) -> int:
        for lo, hi, c in self.segments:
            if lo <= x <= hi:
                return sum(cd * binom(x - lo, d) for d, cd in enumerate(c))
        return 0

    def advance(self, wall: int) -> tuple["_PiecewiseCounts", int]:
        """Process every ball at once; return the descendants and the new wall.

        With F the cumulative count and N the total, the descendants number
        F(x) - clamp(x - wall + 1, 0, N) in bin x.
        """
        total = self.total()
        if total == 0:
            return _PiecewiseCounts([]), wall
        first = self.segments[0][0]
        end = wall + total - 1  # descendants live in [first, end - 1]
        cuts = {first, wall, end}
        for lo, hi, _ in self.segments:
            cuts.add(lo)
            cuts.add(hi + 1)
        cuts = sorted(x for x in cuts if first <= x <= end)
        if cuts[-1] != end:
            cuts.append(end)
        out = []
        below = 0  # F(p - 1)
        seg_idx = 0
        for p, q_excl in zip(cuts, cuts[1:]):
            q = q_excl - 1
            while seg_idx < len(self.segments) and self.segments[seg_idx][1] < p:
                seg_idx += 1
            local = [0]
            if seg_idx < len(self.segments) and self.segments[seg_idx][0] <= p:
                lo, _, c = self.segments[seg_idx]
                local = _recenter(c, p - lo)
            # F on [p, q] in the basis binom(x - p, d)
            cum = [0] * (len(local) + 1)
            cum[0] = below
            for d, c in enumerate(local):
                cum[d + 1] += c
                cum[d] += c
            if q < wall:
                pass
            elif p >= end:
                cum[0] -= total
            else:
                cum[0] -= p - wall + 1
                cum[1] -= 1
            out.append((p, q, cum))
            below += _basis_sum(local, q - p + 1)
        return _PiecewiseCounts(out), wall + total


def hypotenusal_by_process(count: int) -> list[int]:
    """a[0..count-1] as wall advances of the seed {(0,0)} with the wall at 1."""
    counts = _PiecewiseCounts([(0, 0, [1])])
    wall = 1
    out = []
    for _ in range(count):
        counts, new_wall = counts.advance(wall)
        out.append(new_wall - wall)
        wall = new_wall
    return out


def hypotenusal_by_bins(count: int) -> list[int]:
    """Same sequence through the generic per-bin engine (feasible up to count 7)."""
    trace, _, _ = run(BbwConfig({(0, 0): 1}, 1, 0), count)
    return [trace[i + 1] - trace[i] for i in range(count)]


def hypotenusal_by_table(count: int) -> list[int]:
    """a[0..count-1] from the triangle recurrence, one block of rows at a time.

    Inside a block whose first nonzero column c0 starts at value x, column c0
    counts down x, x-1, ..., 1 while every later column gains the sum of the
    columns before it.  Each column is then a polynomial in the row offset q,
    kept in the basis binom(q, d); the next block starts at q = x.
    """
    if count < 1:
        return []
    out = [1]
    if count == 1:
        return out
    width = count  # columns 1 .. count-1 are enough
    start = [1] * width  # row of all ones, columns 1.. ; index 0 is column 1
    for _ in range(1, count):
        x = start[0]
        out.append(x)
        if len(out) == count:
            break
        cols = [[x, -1]]  # column c0 counts down from x
        running = [x, -1]  # sum over earlier columns, as a polynomial in q
        for value in start[1:]:
            # v_q(c) = v_0(c) + sum_{q' < q} S_{q'}, and sum binom(q', d) = binom(q, d+1)
            poly = [value] + list(running)
            cols.append(poly)
            running = _poly_add(running, poly)
        start = [sum(c * binom(x, d) for d, c in enumerate(poly)) for poly in cols[1:]]
    return out


def _poly_add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def table_rows_naive(count: int) -> list[int]:
    """a[0..count-1] by building the triangle row by row (small counts only)."""
    out = [1]
    width = count + 1
    row = [0] + [1] * width  # the row of ones; index = column
    first = 1
    out.append(1)
    while len(out) < count:
        new = [0] * len(row)
        prefix = 0
        for c in range(len(row)):
            prefix_prev = prefix
            prefix += row[c]
            left = row[c - 1] if c else 0
            if left > 0:
                new[c] = prefix_prev + row[c]
            elif row[c] >= 1:
                new[c] = row[c] - 1
        row = new
        lead = next(c for c, v in enumerate(row) if v)
        if lead > first:
            first = lead
            out.append(row[lead])
    return out[:count]


def hamilton_numbers(count: int) -> list[int]:
    """h[1..count] from h[1] = 2 and h[n] = 2 + sum (-1)^(i+1) binom(h[n-i], i+1)."""
    h = [None, 2]
    for m in range(2, count + 1):
        h.append(2 + sum((-1) ** (i + 1) * binom(h[m - i], i + 1) for i in range(1, m)))
    return h[1:]


def hypotenusal_numbers(count: int) -> tuple[int, ...]:
    if count < 1:
        raise InvalidInput("count must be positive")
    return tuple(hypotenusal_by_process(count))


def verify_growth(i: int) -> bool:
    """Claimed growth bounds for a[i] in their stated ranges (vacuous below them)."""
    if i < 0:
        raise InvalidInput("index must be non-negative")
    a = hypotenusal_numbers(i + 1)
    ok = True
    if i >= 2:
        ok &= a[i] >= binom(a[i - 1] + 1, 2) + a[i - 1]
    if i >= 4:
        ok &= a[i - 1] ** 2 >= a[i]
        ok &= 2 ** (2**i) >= a[i] >= 2 ** (2 ** (i - 2) + 1)
    return bool(ok)
