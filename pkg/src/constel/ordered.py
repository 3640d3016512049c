"""Ordered graphs with positional vertices.

Vertices are the integers 1..n and the vertex order is the position itself;
no separate ordering is ever stored.  Containment of one ordered graph in
another is a strictly increasing injection of positions mapping edges to
edges (plain subgraph containment, not induced).  A traced graph is a graph
given together with a Hamiltonian path; after relabeling along the path the
path edges are exactly the consecutive pairs (i, i+1), so the traced form
stores the full edge set and derives the pattern graph (all edges except
consecutive pairs) on demand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional


Edge = tuple[int, int]


def _normalize_edges(n: int, edges: Iterable[Edge]) -> frozenset[Edge]:
    out = set()
    for e in edges:
        u, v = e
        if not (1 <= u < v <= n):
            raise ValueError(f"bad edge {e!r} for n={n}: need 1 <= u < v <= n")
        out.add((u, v))
    return frozenset(out)


class OrderedGraph:
    """A graph on vertices 1..n, ordered by position."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ValueError("n must be >= 0")
        self.n = n
        self.edges = _normalize_edges(n, edges)
        self._adj = None

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Sorted neighbor positions of v."""
        if self._adj is None:
            adj = {i: [] for i in range(1, self.n + 1)}
            for (a, b) in self.edges:
                adj[a].append(b)
                adj[b].append(a)
            self._adj = {i: tuple(sorted(ns)) for i, ns in adj.items()}
        return self._adj[v]

    def reverse(self) -> "OrderedGraph":
        """Mirror the order: position v becomes n+1-v."""
        n = self.n
        return OrderedGraph(n, ((n + 1 - v, n + 1 - u) for (u, v) in self.edges))

    def __eq__(self, other) -> bool:
        return (
            type(self) is type(other)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((type(self).__name__, self.n, self.edges))

    def __repr__(self):
        return f"OrderedGraph(n={self.n}, m={len(self.edges)})"


class TracedGraph(OrderedGraph):
    """A graph whose vertex order comes from a traced Hamiltonian path.

    all_edges must contain every consecutive pair (i, i+1); the pattern graph
    is all_edges minus those pairs.
    """

    __slots__ = ("_pattern",)

    def __init__(self, n: int, all_edges: Iterable[Edge]):
        super().__init__(n, all_edges)
        for i in range(1, n):
            if (i, i + 1) not in self.edges:
                raise ValueError(f"not traced: missing path edge ({i}, {i + 1})")
        self._pattern = None

    @property
    def all_edges(self) -> frozenset[Edge]:
        return self.edges

    def pattern_graph(self) -> OrderedGraph:
        """The ordered graph of non-path edges."""
        if self._pattern is None:
            self._pattern = OrderedGraph(
                self.n, (e for e in self.edges if e[1] - e[0] >= 2)
            )
        return self._pattern

    def reverse(self) -> "TracedGraph":
        n = self.n
        return TracedGraph(n, ((n + 1 - v, n + 1 - u) for (u, v) in self.edges))

    def __repr__(self):
        return f"TracedGraph(n={self.n}, m={len(self.edges)})"


@dataclass(frozen=True)
class Embedding:
    """Strictly increasing host positions for pattern vertices 1..k."""

    positions: tuple[int, ...]

    def __post_init__(self):
        p = self.positions
        if any(p[i] >= p[i + 1] for i in range(len(p) - 1)):
            raise ValueError("embedding positions must be strictly increasing")

    def gap(self, host_n: int) -> int:
        """Minimum index distance of consecutive embedded vertices.

        For k <= 1 vertices the minimum is vacuous; by convention the gap is
        host_n then (the trivial-return convention the peel recursion needs).
        """
        p = self.positions
        if len(p) <= 1:
            return host_n
        return min(p[i + 1] - p[i] for i in range(len(p) - 1))


def contains_pattern(
    host: OrderedGraph, pattern: OrderedGraph, min_gap: int = 1
) -> Optional[Embedding]:
    """Search for an order-respecting subgraph embedding with the given gap.

    Exhaustive backtracking over monotone injections, candidate positions
    ascending, so the first embedding found is the lexicographically least.
    Returns None when no embedding exists.
    """
    if pattern.n < 1:
        raise ValueError("pattern must have at least one vertex")
    if min_gap < 1:
        raise ValueError("min_gap must be >= 1")
    k, n = pattern.n, host.n
    if n < 1 + (k - 1) * min_gap:
        return None
    # pattern neighbors with smaller index, checked as soon as v is placed
    back = [[] for _ in range(k + 1)]
    for (u, v) in pattern.edges:
        back[v].append(u)
    assign = [0] * (k + 1)

    def place(i: int, lo: int) -> bool:
        if i > k:
            return True
        hi = n - (k - i) * min_gap
        for pos in range(lo, hi + 1):
            if all(host.has_edge(assign[u], pos) for u in back[i]):
                assign[i] = pos
                if place(i + 1, pos + min_gap):
                    return True
        return False

    if place(1, 1):
        return Embedding(tuple(assign[1:]))
    return None


def concatenate(a: OrderedGraph, b: OrderedGraph) -> OrderedGraph:
    """Place b entirely after a; b's positions shift by a.n."""
    s = a.n
    edges = set(a.edges)
    edges.update((u + s, v + s) for (u, v) in b.edges)
    return OrderedGraph(a.n + b.n, edges)


def is_one_sided(h: OrderedGraph) -> bool:
    """True iff every vertex has all neighbors before it or all after it."""
    for v in range(1, h.n + 1):
        ns = h.neighbors(v)
        if ns and ns[0] < v < ns[-1]:
            return False
    return True


def gen_halfgraph(n: int) -> TracedGraph:
    """Traced path plus every edge (i, j) with i odd, j even, i < j.

    For n >= 8 the longest induced path in this graph has exactly 4 vertices.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    edges = {(i, i + 1) for i in range(1, n)}
    edges.update(
        (i, j) for i in range(1, n + 1, 2) for j in range(i + 1, n + 1) if j % 2 == 0
    )
    return TracedGraph(n, edges)


@dataclass(frozen=True)
class InducedPathResult:
    length: int
    path: tuple[int, ...]
    capped: bool  # True when the search was truncated, so length means ">= cap"


def longest_induced_path_oracle(G: OrderedGraph, cap: int) -> InducedPathResult:
    """Exhaustive DFS over induced paths, extending one endpoint at a time.

    Works on the full edge set (for a TracedGraph that includes the path
    edges).  The search is truncated at `cap` vertices; if the cap is never
    reached the returned length is the true maximum.  The witness is the
    lexicographically least among maximum-length paths, comparing each path
    by the smaller of its two traversal directions.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    n = G.n
    if n == 0:
        return InducedPathResult(0, (), False)
    adj = [0] * (n + 1)
    for (u, v) in G.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    best_len = 1
    best_seq = (1,)
    capped = False
    path: list[int] = []

    def consider():
        nonlocal best_len, best_seq
        if len(path) < best_len:
            return
        seq = tuple(path)
        rev = seq[::-1]
        if rev < seq:
            seq = rev
        if len(path) > best_len or seq < best_seq:
            best_len, best_seq = len(path), seq

    def extend(last: int, visited: int, banned: int):
        nonlocal capped
        consider()
        if len(path) >= cap:
            capped = True
            return
        cands = adj[last] & ~(visited | banned)
        banned |= adj[last]
        while cands:
            bit = cands & -cands
            cands ^= bit
            w = bit.bit_length() - 1
            path.append(w)
            extend(w, visited | bit, banned)
            path.pop()

    for start in range(1, n + 1):
        path.append(start)
        extend(start, 1 << start, 0)
        path.pop()
    return InducedPathResult(best_len, best_seq, capped)


def validate_increasing_induced_path(G: TracedGraph, p: Iterable[int]) -> bool:
    """Check strict increase, consecutive adjacency and inducedness in G."""
    seq = list(p)
    if not seq:
        return False
    if any(not (1 <= v <= G.n) for v in seq):
        return False
    if any(seq[i] >= seq[i + 1] for i in range(len(seq) - 1)):
        return False
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            adjacent = G.has_edge(seq[i], seq[j])
            if adjacent != (j == i + 1):
                return False
    return True


def slice_graph(G: OrderedGraph, a: int, b: int):
    """Induced ordered subgraph on positions a..b, reindexed to 1..(b-a+1).

    Slicing a traced graph keeps all consecutive edges, so the result is
    traced again.  Returns the same type as the input.
    """
    if not (1 <= a <= b <= G.n):
        raise ValueError(f"slice [{a}, {b}] out of range for n={G.n}")
    shift = a - 1
    edges = [
        (u - shift, v - shift) for (u, v) in G.edges if a <= u and v <= b
    ]
    cls = type(G)
    return cls(b - a + 1, edges)


def write_edge_list(G: OrderedGraph, fh) -> None:
    """Plain text: first line `n m`, then one `u v` line per edge, sorted."""
    fh.write(f"{G.n} {len(G.edges)}\n")
    for (u, v) in sorted(G.edges):
        fh.write(f"{u} {v}\n")


def _parse_edge_list(fh) -> tuple[int, list[Edge]]:
    n = None
    m = None
    edges: list[Edge] = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected two integers, got {line!r}")
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {lineno}: expected two integers, got {line!r}")
        if n is None:
            n, m = x, y
            continue
        if not (1 <= x < y <= n):
            raise ValueError(f"line {lineno}: bad edge ({x}, {y}) for n={n}")
        edges.append((x, y))
    if n is None:
        raise ValueError("empty edge-list file")
    if len(edges) != m:
        raise ValueError(f"header says {m} edges, file has {len(edges)}")
    if len(set(edges)) != len(edges):
        raise ValueError("duplicate edges in file")
    return n, edges

def read_ordered(fh) -> OrderedGraph:
    n, edges = _parse_edge_list(fh)
    return OrderedGraph(n, edges)


def read_traced(fh) -> TracedGraph:
    """Parse and verify the traced form (every (i, i+1) present)."""
    n, edges = _parse_edge_list(fh)
    return TracedGraph(n, edges)
