"""k-set families over [n] as sorted bitmask tuples.

Element i of [n] is bit i-1.  With that encoding the colex order on k-sets is
plain integer order on masks, which most of this module leans on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial
from typing import Iterable, Iterator

from kkextremal.errors import CapacityError, InvalidInput, ParseError
from kkextremal.numeric import binom

MAX_N = 63
# permutations tried by canonical_form before giving up
CANONICAL_LIMIT = 2_000_000


def mask_of(elements: Iterable[int]) -> int:
    bits = 0
    for e in elements:
        bits |= 1 << (e - 1)
    return bits


def elements_of(bits: int) -> tuple[int, ...]:
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        if n > MAX_N:
            raise CapacityError(f"ground set [{n}] exceeds the cap of {MAX_N}")
        raise InvalidInput(f"ground set size must be positive, got {n}")


@dataclass(frozen=True, order=True)
class KSet:
    n: int
    bits: int

    def __post_init__(self) -> None:
        _check_n(self.n)
        if self.bits < 0 or self.bits >> self.n:
            raise InvalidInput(f"set {self.bits:#x} does not fit in [{self.n}]")

    @classmethod
    def of(cls, n: int, elements: Iterable[int]) -> "KSet":
        return cls(n, mask_of(elements))

    @property
    def k(self) -> int:
        return self.bits.bit_count()

    def elements(self) -> tuple[int, ...]:
        return elements_of(self.bits)


class KSetFamily:
    """Immutable non-empty family of k-subsets of [n], members sorted by colex."""

    __slots__ = ("n", "k", "masks", "_hash")

    def __init__(self, n: int, k: int, masks: Iterable[int]):
        _check_n(n)
        if not 0 <= k <= n:
            raise InvalidInput(f"k must lie in [0, {n}], got {k}")
        ms = tuple(sorted(set(masks)))
        if not ms:
            raise InvalidInput("empty family")
        full = (1 << n) - 1
        for b in ms:
            if b < 0 or b & ~full:
                raise InvalidInput(f"set {elements_of(b)} does not fit in [{n}]")
            if b.bit_count() != k:
                raise InvalidInput(f"set {elements_of(b)} does not have size {k}")
        self.n = n
        self.k = k
        self.masks = ms
        self._hash = hash((n, k, ms))

    @classmethod
    def of(cls, n: int, k: int, sets: Iterable[Iterable[int]]) -> "KSetFamily":
        return cls(n, k, (mask_of(s) for s in sets))

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[KSet]:
        return (KSet(self.n, b) for b in self.masks)

    def __contains__(self, item) -> bool:
        bits = item.bits if isinstance(item, KSet) else mask_of(item)
        return bits in self.mask_set

    @property
    def mask_set(self) -> frozenset[int]:
        return frozenset(self.masks)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KSetFamily)
            and self.n == other.n
            and self.k == other.k
            and self.masks == other.masks
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("".join(map(str, elements_of(b))) if self.n < 10 else str(elements_of(b)) for b in self.masks[:8])
        more = ", ..." if len(self.masks) > 8 else ""
        return f"KSetFamily(n={self.n}, k={self.k}, [{body}{more}])"

    def sets(self) -> list[tuple[int, ...]]:
        return [elements_of(b) for b in self.masks]

    def support(self) -> int:
        acc = 0
        for b in self.masks:
            acc |= b
        return acc

    def with_n(self, n: int) -> "KSetFamily":
        return KSetFamily(n, self.k, self.masks)


def colex_compare(x: KSet, y: KSet) -> int:
    """-1, 0 or 1 as x precedes, equals or follows y in colex order."""
    if x.n != y.n:
        raise InvalidInput("sets live on different ground sets")
    return (x.bits > y.bits) - (x.bits < y.bits)


def _next_same_popcount(v: int) -> int:
    # Gosper's hack
    c = v & -v
    r = v + c
    return (((r ^ v) >> 2) // c) | r


def ksets_colex(n: int, k: int) -> Iterator[int]:
    """All k-subsets of [n] as masks, ascending colex."""
    if k == 0:
        yield 0
        return
    v = (1 << k) - 1
    limit = 1 << n
    while v < limit:
        yield v
        v = _next_same_popcount(v)


def initial_segment(n: int, k: int, m: int) -> KSetFamily:
    """The first m k-subsets of [n] in colex order."""
    _check_n(n)
    if not 1 <= m <= binom(n, k):
        raise InvalidInput(f"m must lie in [1, binom({n},{k})], got {m}")
    return KSetFamily(n, k, itertools.islice(ksets_colex(n, k), m))


def shadow_masks(masks: Iterable[int]) -> set[int]:
    out = set()
    for b in masks:
        rest = b
        while rest:
            low = rest & -rest
            out.add(b ^ low)
            rest ^= low
    return out


def shadow(S: KSetFamily) -> KSetFamily:
    if S.k == 0:
        raise InvalidInput("the empty set has no shadow")
    return KSetFamily(S.n, S.k - 1, shadow_masks(S.masks))


def iterated_shadow(S: KSetFamily, i: int) -> KSetFamily:
    if not 0 <= i <= S.k:
        raise InvalidInput(f"shadow index must lie in [0, {S.k}], got {i}")
    masks = set(S.masks)
    for _ in range(i):
        masks = shadow_masks(masks)
    return KSetFamily(S.n, S.k - i, masks)


def shadow_sizes(S: KSetFamily) -> list[int]:
    """[|S|, |shadow S|, |second shadow|, ...] down to the (k-1)-th shadow."""
    sizes = [len(S)]
    masks = set(S.masks)
    for _ in range(S.k - 1):
        masks = shadow_masks(masks)
        sizes.append(len(masks))
    return sizes


def _degrees(n: int, masks: Iterable[int]) -> list[int]:
    deg = [0] * n
    for b in masks:
        rest = b
        while rest:
            low = rest & -rest
            deg[low.bit_length() - 1] += 1
            rest ^= low
    return deg


def _relabel(masks: Iterable[int], image: list[int]) -> list[int]:
    """Apply the vertex map (bit index -> bit index) to every mask."""
    out = []
    for b in masks:
        r = 0
        rest = b
        while rest:
            low = rest & -rest
            r |= 1 << image[low.bit_length() - 1]
            rest ^= low
        out.append(r)
    return out


def find_isomorphism(n: int, source: Iterable[int], target: Iterable[int]) -> list[int] | None:
    """A vertex map (bit index -> bit index) carrying source onto target, or None."""
    src = sorted(set(source))
    tgt = set(target)
    if len(src) != len(tgt):
        return None
    dsrc = _degrees(n, src)
    dtgt = _degrees(n, tgt)
    if sorted(dsrc) != sorted(dtgt):
        return None
    order = sorted(range(n), key=lambda v: (-dsrc[v], v))
    position = {v: i for i, v in enumerate(order)}
    # sets become checkable once their last vertex (in `order`) is assigned
    ready: list[list[int]] = [[] for _ in range(n)]
    for b in src:
        last = max((position[v - 1] for v in elements_of(b)), default=0)
        ready[last].append(b)
    image = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for w in range(n):
            if used[w] or dtgt[w] != dsrc[v]:
                continue
            image[v] = w
            used[w] = True
            if all(x in tgt for x in _relabel(ready[i], image)) and extend(i + 1):
                return True
            used[w] = False
        image[v] = -1
        return False

    return list(image) if extend(0) else None


def is_initial_segment(S: KSetFamily, up_to_iso: bool = False) -> bool:
    m = len(S)
    if not up_to_iso:
        return S.masks == tuple(itertools.islice(ksets_colex(S.n, S.k), m))
    target = initial_segment(S.n, S.k, m).masks
    return find_isomorphism(S.n, S.masks, target) is not None


def canonical_form(S: KSetFamily) -> KSetFamily:
    """Lexicographically least relabeling among degree-respecting relabelings.

    Vertices are grouped by degree (highest first), each group gets a block of
    consecutive labels, and every arrangement inside the blocks is tried.
    Isomorphic families share the same candidate set, so the minimum is an
    invariant.
    """
    n = S.n
    deg = _degrees(n, S.masks)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(deg[v], []).append(v)
    blocks = [groups[d] for d in sorted(groups, reverse=True)]
    work = 1
    for g in blocks:
        work *= factorial(len(g))
    if work > CANONICAL_LIMIT:
        raise CapacityError(f"canonical form would try {work} relabelings")
    best = None
    starts = []
    offset = 0
    for g in blocks:
        starts.append(offset)
        offset += len(g)
    image = [0] * n
    for arrangement in itertools.product(*(itertools.permutations(g) for g in blocks)):
        for start, perm in zip(starts, arrangement):
            for i, v in enumerate(perm):
                image[v] = start + i
        cand = tuple(sorted(_relabel(S.masks, image)))
        if best is None or cand < best:
            best = cand
    return KSetFamily(n, S.k, best)


def format_family(S: KSetFamily) -> str:
    lines = [f"{S.n} {S.k}"]
    lines.extend(",".join(map(str, elements_of(b))) for b in S.masks)
    return "\n".join(lines) + "\n"


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_int_list(line: str, lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in line.replace(" ", "").split(",") if tok != ""]
    except ValueError:
        raise ParseError(f"line {lineno}: expected comma-separated integers, got {line!r}") from None


def parse_family(text: str) -> KSetFamily:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("line 1: missing header 'n k'")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
        raise ParseError(f"line {lineno}: header must be 'n k', got {header!r}")
    n, k = int(parts[0]), int(parts[1])
    masks = []
    for lineno, line in lines[1:]:
        elems = parse_int_list(line, lineno)
        if len(elems) != k or len(set(elems)) != k:
            raise ParseError(f"line {lineno}: expected {k} distinct elements, got {line!r}")
        if any(not 1 <= e <= n for e in elems):
            raise ParseError(f"line {lineno}: element outside [1, {n}] in {line!r}")
        masks.append(mask_of(elems))
    if not masks:
        raise ParseError(f"line {lineno}: family has no members")
    try:
        return KSetFamily(n, k, masks)
    except InvalidInput as exc:
        raise ParseError(f"line 1: {exc}") from None

