"""Minimal non-face hypergraphs, blocking sets and extension trees.

A family S of k-sets is encoded by the antichain H(S) of minimal vertex sets
(of size at most k) that lie in no member of S.  The complement of S in
binom([n], k) then splits edge by edge: the k-sets whose first contained edge
(in a comfortable ordering) is e_j are counted by the leaves of a labelled
tree built from the blocking sets B_j.
"""

from __future__ import annotations

import collections
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from kkextremal.errors import CapacityError, InvalidCounts, InvalidHypergraph, InvalidInput, NoTree, ParseError
from kkextremal.numeric import binom
from kkextremal.setfam import KSetFamily, _content_lines, elements_of, ksets_colex, mask_of, parse_int_list

# supercomfortable_order searches orderings exhaustively up to this many edges
SUPERCOMFORTABLE_LIMIT = 20


@dataclass(frozen=True)
class Recipe:
    """How a hypergraph was produced by colex_hypergraph or a construction."""

    kind: str  # "colex", "A", "B", "Aprime", "Bprime"
    counts: tuple[int, ...]
    j: int | None = None
    r: int | None = None


@dataclass(frozen=True)
class Hypergraph:
    """Antichain of edges over [n]; the tuple order is the stored ordering."""

    n: int
    edges: tuple[int, ...]
    recipe: Recipe | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidInput(f"ground set size must be positive, got {self.n}")
        full = (1 << self.n) - 1
        if len(set(self.edges)) != len(self.edges):
            raise InvalidHypergraph("repeated edge")
        for e in self.edges:
            if e <= 0 or e & ~full:
                raise InvalidHypergraph(f"edge {elements_of(e)} is empty or leaves [{self.n}]")
        _check_antichain(self.edges)

    @classmethod
    def of(cls, n: int, edges: Iterable[Iterable[int]], recipe: Recipe | None = None) -> "Hypergraph":
        return cls(n, tuple(mask_of(e) for e in edges), recipe)

    def __len__(self) -> int:
        return len(self.edges)

    def edge_lists(self) -> list[tuple[int, ...]]:
        return [elements_of(e) for e in self.edges]

    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)

    def max_edge_size(self) -> int:
        return max((e.bit_count() for e in self.edges), default=0)

    def reordered(self, ordering: Sequence[int]) -> "Hypergraph":
        return Hypergraph(self.n, tuple(self.edges[i] for i in ordering), self.recipe)

    def degree(self, vertex: int) -> int:
        bit = 1 << (vertex - 1)
        return sum(1 for e in self.edges if e & bit)


def _vertices(e: int) -> list[int]:
    out = []
    while e:
        low = e & -e
        out.append(low.bit_length() - 1)
        e ^= low
    return out


def _check_antichain(edges: Sequence[int]) -> None:
    """Reject nested pairs, comparing each edge only with edges through its rarest vertex."""
    degree: dict[int, int] = collections.Counter()
    for e in edges:
        degree.update(_vertices(e))
    by_rarest: dict[int, list[int]] = collections.defaultdict(list)
    for e in edges:
        by_rarest[min(_vertices(e), key=lambda x: (degree[x], x))].append(e)
    for e in edges:
        for x in _vertices(e):
            for f in by_rarest.get(x, ()):
                if f != e and f & e == f:
                    raise InvalidHypergraph(f"edges {elements_of(f)} and {elements_of(e)} are nested")


def _sort_key(e: int) -> tuple[int, int]:
    return (e.bit_count(), e)


def _faces(S: KSetFamily) -> set[int]:
    faces = {0}
    for b in S.masks:
        sub = b
        while True:
            faces.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & b
    return faces


def hypergraph_of_family(S: KSetFamily) -> Hypergraph:
    """Minimal non-faces of the complex generated by S, in comfortable order."""
    n = S.n
    faces = _faces(S)
    edges = set()
    for x in range(n):
        if not S.support() >> x & 1:
            edges.add(1 << x)
    for f in faces:
        if f.bit_count() >= S.k:
            continue
        for x in range(n):
            bit = 1 << x
            g = f | bit
            if f & bit or g in faces or g in edges:
                continue
            rest = g
            minimal = True
            while rest:
                low = rest & -rest
                if g ^ low not in faces:
                    minimal = False
                    break
                rest ^= low
            if minimal:
                edges.add(g)
    return Hypergraph(n, tuple(sorted(edges, key=_sort_key)))


def full_stars(H: Hypergraph, k: int) -> list[tuple[int, int]]:
    """Pairs (A, t) with |A| = k-t, 1 <= t < k, whose every k-superset is an edge."""
    kedges = [e for e in H.edges if e.bit_count() == k]
    seen = set()
    out = []
    for e in kedges:
        sub = (e - 1) & e
        while sub:
            if sub not in seen:
                seen.add(sub)
                t = k - sub.bit_count()
                covering = sum(1 for f in kedges if f & sub == sub)
                if covering == binom(H.n - sub.bit_count(), t):
                    out.append((sub, t))
            sub = (sub - 1) & e
    return out


def family_of_hypergraph(H: Hypergraph, k: int) -> KSetFamily:
    """All k-subsets of [n] containing no edge of H."""
    if k < 1 or k > H.n:
        raise InvalidInput(f"k must lie in [1, {H.n}], got {k}")
    if any(e.bit_count() > k for e in H.edges):
        raise InvalidInput(f"H has an edge larger than k={k}")
    stars = full_stars(H, k)
    if stars:
        a, t = stars[0]
        raise InvalidHypergraph(f"full star at {elements_of(a)} with t={t}")
    edges = H.edges
    members = [b for b in ksets_colex(H.n, k) if not any(b & e == e for e in edges)]
    if not members:
        raise InvalidHypergraph("no k-set avoids every edge")
    S = KSetFamily(H.n, k, members)
    if hypergraph_of_family(S).edge_set() != H.edge_set():
        raise InvalidHypergraph("edges are not the minimal non-faces of the k-sets they leave")
    return S


def truncate(H: Hypergraph, max_size: int) -> Hypergraph:
    """Keep the edges of size <= max_size (the hypergraph of a shadow)."""
    return Hypergraph(H.n, tuple(e for e in H.edges if e.bit_count() <= max_size))


def comfortable_order(H: Hypergraph) -> list[int]:
    """Edge indices sorted by size, ties broken by colex of the edge masks."""
    return sorted(range(len(H.edges)), key=lambda i: _sort_key(H.edges[i]))


def _ordered_edges(H: Hypergraph, ordering: Sequence[int] | None) -> tuple[int, ...]:
    if ordering is None:
        return H.edges
    if sorted(ordering) != list(range(len(H.edges))):
        raise InvalidInput("ordering is not a permutation of the edge indices")
    return tuple(H.edges[i] for i in ordering)


def _blocking_key(s: int) -> tuple[int, tuple[int, ...]]:
    return (s.bit_count(), elements_of(s))


@dataclass(frozen=True)
class BlockingSetFamily:
    j: int
    sets: tuple[int, ...]

    def set_lists(self) -> list[tuple[int, ...]]:
        return [elements_of(s) for s in self.sets]


def minimal_hitting_sets(targets: Sequence[int], allowed: int) -> list[int]:
    """Minimal subsets of `allowed` meeting every target, sorted shortest-first then lex."""
    found: set[int] = set()

    def grow(chosen: int) -> None:
        for t in targets:
            if not t & chosen:
                options = t & allowed
                while options:
                    low = options & -options
                    options ^= low
                    grow(chosen | low)
                return
        found.add(chosen)

    grow(0)
    minimal = []
    for s in sorted(found, key=lambda b: b.bit_count()):
        if not any(m & s == m for m in minimal):
            minimal.append(s)
    return sorted(minimal, key=_blocking_key)


def blocking_sets(H: Hypergraph, ordering: Sequence[int] | None, j: int) -> BlockingSetFamily:
    """B_j: minimal sets avoiding e_j that meet every earlier edge (1-based j)."""
    edges = _ordered_edges(H, ordering)
    if not 1 <= j <= len(edges):
        raise InvalidInput(f"edge index must lie in [1, {len(edges)}], got {j}")
    full = (1 << H.n) - 1
    ej = edges[j - 1]
    return BlockingSetFamily(j, tuple(minimal_hitting_sets(edges[: j - 1], full & ~ej)))


@dataclass(frozen=True)
class TreeNode:
    key: tuple[int, int]  # (counter, 1-based index into the blocking sets)
    parent: int | None  # index into ExtensionTree.nodes
    label: int  # vertex label; for leaves the empty set
    edge_label: int  # label of the edge towards the parent
    leaf: bool
    path_vertices: int = 0  # leaves only: union of vertex labels on the path
    path_edges: int = 0  # leaves only: union of edge labels on the path


@dataclass(frozen=True)
class ExtensionTree:
    edge: int
    blocking: tuple[int, ...]
    nodes: tuple[TreeNode, ...]

    def leaves(self) -> list[TreeNode]:
        return [v for v in self.nodes if v.leaf]

    def leaf_pairs(self) -> list[tuple[int, int]]:
        """(|l_v|, |l_e|) per leaf, in creation order."""
        return [(v.path_vertices.bit_count(), v.path_edges.bit_count()) for v in self.leaves()]

    def leaf_coefficients(self, n: int) -> list[tuple[int, int]]:
        """Per leaf, (top, shift) meaning binom(top, k - shift)."""
        e = self.edge.bit_count()
        return [(n - e - lv, e + le) for lv, le in self.leaf_pairs()]


def grow_extension_tree(edge: int, blocking: Sequence[int]) -> ExtensionTree:
    """Run the work-list procedure (first in, first out) on a fixed list of blocking sets."""
    if not blocking:
        raise NoTree(f"no blocking set avoids edge {elements_of(edge)}")
    nodes: list[TreeNode] = []
    # per node: union of vertex labels and of edge labels on its path to the root
    path_v: list[int] = []
    path_e: list[int] = []
    internal_seen = [0] * len(blocking)
    work: collections.deque[int] = collections.deque()

    def add_internal(r: int, parent: int | None, edge_label: int, above_v: int, above_e: int) -> None:
        internal_seen[r] += 1
        label = blocking[r] & ~above_v
        nodes.append(TreeNode((2 * internal_seen[r] - 1, r + 1), parent, label, edge_label, False))
        path_v.append(above_v | label)
        path_e.append(above_e | edge_label)
        work.append(len(nodes) - 1)

    add_internal(0, None, 0, 0, 0)
    while work:
        u = work.popleft()
        node = nodes[u]
        lv, le = path_v[u], path_e[u]
        label = node.label
        s = 0
        while True:
            # every subset of the label in increasing order, the empty set first
            if s == 0:
                nodes.append(TreeNode((node.key[0] + 1, node.key[1]), u, 0, 0, True, lv, le))
                path_v.append(lv)
                path_e.append(le)
            else:
                avoid = le | s
                for r, cand in enumerate(blocking):
                    if not cand & avoid:
                        add_internal(r, u, s, lv, le)
                        break
            if s == label:
                break
            s = (s - label) & label
    return ExtensionTree(edge, tuple(blocking), tuple(nodes))


def build_extension_tree(H: Hypergraph, ordering: Sequence[int] | None, j: int) -> ExtensionTree:
    edges = _ordered_edges(H, ordering)
    fam = blocking_sets(H, ordering, j)
    return grow_extension_tree(edges[j - 1], fam.sets)


@dataclass(frozen=True, order=True)
class BallSpec:
    position: int
    delay: int

    def coefficient(self, n: int, k: int) -> int:
        return binom(n - self.position - self.delay, k - self.delay)


def balls_of_leaves(edge_size: int, leaf_pairs: Iterable[tuple[int, int]]) -> list[BallSpec]:
    return [BallSpec(lv - le, edge_size + le) for lv, le in leaf_pairs]


def tree_ball_specs(H: Hypergraph, ordering: Sequence[int] | None = None) -> list[BallSpec]:
    """Sorted multiset of balls, one per leaf of every extension tree."""
    edges = _ordered_edges(H, ordering)
    order = list(range(len(edges))) if ordering is None else list(ordering)
    out: list[BallSpec] = []
    for j in range(1, len(edges) + 1):
        tree = build_extension_tree(H, order, j)
        out.extend(balls_of_leaves(edges[j - 1].bit_count(), tree.leaf_pairs()))
    return sorted(out)


def _colex_step_ok(prefix: Sequence[int], edge: int, full: int) -> bool:
    """Whether appending `edge` keeps the unique-blocking-set criterion."""
    hit = minimal_hitting_sets(prefix, full & ~edge)
    return len(hit) == 1 and hit[0].bit_count() == len(prefix)


def is_colex_hypergraph(H: Hypergraph) -> bool:
    """Every edge, in comfortable order, has a single blocking set of size i-1."""
    edges = [H.edges[i] for i in comfortable_order(H)]
    full = (1 << H.n) - 1
    return all(_colex_step_ok(edges[:i], e, full) for i, e in enumerate(edges))


def supercomfortable_order(H: Hypergraph) -> tuple[list[int], int]:
    """Comfortable ordering maximising the colex prefix length, and that length."""
    m = len(H.edges)
    if m > SUPERCOMFORTABLE_LIMIT:
        raise CapacityError(f"supercomfortable search is capped at {SUPERCOMFORTABLE_LIMIT} edges")
    base = comfortable_order(H)
    if m == 0:
        return [], 0
    full = (1 << H.n) - 1
    sizes = [H.edges[i].bit_count() for i in range(m)]
    best: list[int] = []
    dead: set[frozenset[int]] = set()

    def search(prefix: list[int], used: frozenset[int]) -> bool:
        nonlocal best
        if len(prefix) > len(best):
            best = list(prefix)
        if len(prefix) == m:
            return True
        if used in dead:
            return False
        smallest = min(sizes[i] for i in range(m) if i not in used)
        edges = [H.edges[i] for i in prefix]
        for i in base:
            if i in used or sizes[i] != smallest:
                continue
            if _colex_step_ok(edges, H.edges[i], full):
                prefix.append(i)
                if search(prefix, used | {i}):
                    return True
                prefix.pop()
        dead.add(used)
        return False

    search([], frozenset())
    chosen = set(best)
    rest = [i for i in base if i not in chosen]
    return best + rest, len(best)


@dataclass(frozen=True)
class ColexLayout:
    """Vertex roles of H_C: u_i is the private vertex of e_i, v_i is shared."""

    n: int
    counts: tuple[int, ...]
    tops: tuple[int, ...]  # a_0, ..., a_{k-1}
    u: tuple[int, ...]  # u_1.. as 1-based vertices
    v: tuple[int, ...]  # v_1..v_{k-1}
    sizes: tuple[int, ...]  # edge sizes in order

    def prefix(self, i: int) -> int:
        """n_1 + ... + n_i."""
        return sum(self.counts[:i])


def colex_layout(n: int, counts: Sequence[int]) -> ColexLayout:
    counts = tuple(int(c) for c in counts)
    k = len(counts)
    if k < 1:
        raise InvalidCounts("need at least one count")
    if any(c < 0 for c in counts):
        raise InvalidCounts("counts must be non-negative")
    total = 0
    for t, c in enumerate(counts, start=1):
        total += c
        if total > n - t + 1:
            raise InvalidCounts(f"n_1+...+n_{t} = {total} exceeds n-t+1 = {n - t + 1}")
    tops = []
    prev = n
    for i in range(k):
        cur = prev - counts[i] - 1
        tops.append(cur)
        prev = cur
    u = []
    sizes = []
    above = n  # a_{i-2}, with a_{-1} = n
    for i in range(k):
        u.extend(range(above, above - counts[i], -1))
        sizes.extend([i + 1] * counts[i])
        above = tops[i]
    v = tuple(t + 1 for t in tops[: k - 1])
    return ColexLayout(n, counts, tuple(tops), tuple(u), v, tuple(sizes))


def colex_hypergraph(n: int, counts: Sequence[int]) -> Hypergraph:
    """H_C(n_1, ..., n_k): n_i edges of size i, each a private vertex plus v_1..v_{i-1}."""
    lay = colex_layout(n, counts)
    edges = []
    for idx, size in enumerate(lay.sizes):
        edges.append(mask_of((lay.u[idx],) + lay.v[: size - 1]))
    return Hypergraph(n, tuple(edges), Recipe("colex", lay.counts))


def colex_counts(n: int, k: int, m: int) -> tuple[int, ...]:
    """Edge counts per size of the hypergraph of the colex segment of length m."""
    from kkextremal.numeric import full_k_binomial_decomposition

    alpha = full_k_binomial_decomposition(m, k).coeffs
    counts = []
    prev = n
    for i, a in enumerate(alpha):
        counts.append(prev - a - (1 if i < k - 1 else 0))
        prev = a
    return tuple(counts)


def format_hypergraph(H: Hypergraph) -> str:
    lines = [str(H.n)]
    lines.extend(",".join(map(str, elements_of(e))) for e in H.edges)
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("line 1: missing header 'n'")
    lineno, header = lines[0]
    if not header.isdigit():
        raise ParseError(f"line {lineno}: header must be 'n', got {header!r}")
    n = int(header)
    edges = []
    for lineno, line in lines[1:]:
        elems = parse_int_list(line, lineno)
        if not elems or len(set(elems)) != len(elems):
            raise ParseError(f"line {lineno}: expected distinct vertices, got {line!r}")
        if any(not 1 <= x <= n for x in elems):
            raise ParseError(f"line {lineno}: vertex outside [1, {n}] in {line!r}")
        edges.append(mask_of(elems))
    try:
        return Hypergraph(n, tuple(edges))
    except (InvalidHypergraph, InvalidInput) as exc:
        raise ParseError(f"line 1: {exc}") from None
