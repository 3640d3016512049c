"""Star forests in ordered graphs and the constellation recognizers.

A star is oriented Right when its center precedes every leaf and Left when it
follows every leaf; a 1-star can be read either way.  A star forest is a
constellation when its stars can be listed S_1, ..., S_t so that for i < j
the center of S_i lies entirely before or entirely after the vertex set of
S_j.  Two recognizers are provided: one working from that ordering
characterization (precedence digraph plus topological sort, searching over
the orientations of ambiguous 1-stars), and one following the inductive
definition directly (anchored star first or last, or a concatenation split).
They must agree on every input; the test suite enforces this exhaustively on
small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from constel.ordered import Embedding, OrderedGraph, TracedGraph

RIGHT = "R"
LEFT = "L"


@dataclass(frozen=True)
class OrientedStar:
    center: int
    leaves: tuple[int, ...]
    orientation: str

    def __post_init__(self):
        if not self.leaves:
            raise ValueError("a star needs at least one leaf")
        if len(set(self.leaves)) != len(self.leaves) or self.center in self.leaves:
            raise ValueError("leaves must be distinct and differ from the center")
        if tuple(sorted(self.leaves)) != self.leaves:
            raise ValueError("leaves must be sorted")
        if self.orientation == RIGHT:
            if self.center >= self.leaves[0]:
                raise ValueError("right star needs center before every leaf")
        elif self.orientation == LEFT:
            if self.center <= self.leaves[-1]:
                raise ValueError("left star needs center after every leaf")
        else:
            raise ValueError(f"orientation must be {RIGHT!r} or {LEFT!r}")

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted((self.center,) + self.leaves))

    @property
    def span(self) -> tuple[int, int]:
        vs = self.vertices
        return vs[0], vs[-1]

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (min(self.center, l), max(self.center, l)) for l in self.leaves
        )

    def flipped(self) -> "OrientedStar":
        """Swap orientation; only meaningful for 1-stars."""
        if len(self.leaves) != 1:
            raise ValueError("only a 1-star can flip orientation")
        leaf = self.leaves[0]
        if self.orientation == RIGHT:
            return OrientedStar(leaf, (self.center,), LEFT)
        return OrientedStar(leaf, (self.center,), RIGHT)


@dataclass(frozen=True)
class StarForest:
    n: int
    stars: tuple[OrientedStar, ...]

    def __post_init__(self):
        seen: set[int] = set()
        for s in self.stars:
            vs = set(s.vertices)
            if vs & seen:
                raise ValueError("star vertex sets must be pairwise disjoint")
            if s.vertices[-1] > self.n:
                raise ValueError("star vertex out of range")
            seen |= vs


@dataclass(frozen=True)
class ConstellationWitness:
    """A star order (indices into forest.stars) satisfying the pairwise rule."""

    forest: StarForest
    star_order: tuple[int, ...]


def decompose_star_forest(h: OrderedGraph) -> Optional[StarForest]:
    """Split h into oriented stars, or None if some component is not one.

    Isolated vertices belong to no star.  1-stars get the Right orientation
    by default; recognizers may flip them.
    """
    deg = {v: len(h.neighbors(v)) for v in range(1, h.n + 1)}
    seen: set[int] = set()
    stars: list[OrientedStar] = []
    for v in range(1, h.n + 1):
        if v in seen or deg[v] == 0:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in h.neighbors(u):
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        centers = [u for u in comp if deg[u] == len(comp) - 1]
        if len(comp) == 2:
            a, b = sorted(comp)
            stars.append(OrientedStar(a, (b,), RIGHT))
            continue
        # a star on >= 3 vertices has exactly one vertex of full degree
        leaves_ok = sum(1 for u in comp if deg[u] == 1) == len(comp) - 1
        if len(centers) != 1 or not leaves_ok:
            return None
        c = centers[0]
        leaves = tuple(sorted(comp - {c}))
        if c < leaves[0]:
            stars.append(OrientedStar(c, leaves, RIGHT))
        elif c > leaves[-1]:
            stars.append(OrientedStar(c, leaves, LEFT))
        else:
            return None  # center sees leaves on both sides
    stars.sort(key=lambda s: s.vertices[0])
    return StarForest(h.n, tuple(stars))


def _outside(pos: int, span: tuple[int, int]) -> bool:
    return pos < span[0] or pos > span[1]


def verify_star_order(stars: tuple[OrientedStar, ...], order: tuple[int, ...]) -> bool:
    """Pairwise check: each earlier center avoids each later star's span."""
    if sorted(order) != list(range(len(stars))):
        return False
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if not _outside(stars[order[a]].center, stars[order[b]].span):
                return False
    return True


def _toposort_star_order(stars: tuple[OrientedStar, ...]) -> Optional[tuple[int, ...]]:
    """Order the stars by forced precedence, centers taken as given.

    i may precede j iff center(i) is outside j's span.  A pair allowing
    neither direction is fatal; a pair allowing both is unconstrained.
    Returns the smallest-index-first topological order, or None.
    """
    t = len(stars)
    succ = [[] for _ in range(t)]
    indeg = [0] * t
    for i, j in itertools.combinations(range(t), 2):
        i_first = _outside(stars[i].center, stars[j].span)
        j_first = _outside(stars[j].center, stars[i].span)
        if not i_first and not j_first:
            return None
        if i_first and not j_first:
            succ[i].append(j)
            indeg[j] += 1
        elif j_first and not i_first:
            succ[j].append(i)
            indeg[i] += 1
    import heapq

    ready = [i for i in range(t) if indeg[i] == 0]
    heapq.heapify(ready)
    out: list[int] = []
    while ready:
        i = heapq.heappop(ready)
        out.append(i)
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(ready, j)
    if len(out) != t:
        return None  # precedence cycle
    return tuple(out)


def is_constellation(h: OrderedGraph) -> Optional[ConstellationWitness]:
    """Recognize a constellation and return an ordering witness.

    The precedence test only involves an earlier star's center against a
    later star's vertex span, so the orientation of a 1-star matters exactly
    when its two endpoints disagree on some span test.  Those ambiguous
    1-stars are searched over both orientations; everything else is forced.
    """
    forest = decompose_star_forest(h)
    if forest is None:
        return None
    stars = forest.stars
    if not stars:
        return ConstellationWitness(forest, ())
    spans = [s.span for s in stars]
    flexible: list[int] = []
    for i, s in enumerate(stars):
        if len(s.leaves) != 1:
            continue
        u, v = s.span
        if any(
            _outside(u, spans[j]) != _outside(v, spans[j])
            for j in range(len(stars))
            if j != i
        ):
            flexible.append(i)
    for flips in itertools.product((False, True), repeat=len(flexible)):
        cand = list(stars)
        for idx, flip in zip(flexible, flips):
            if flip:
                cand[idx] = cand[idx].flipped()
        order = _toposort_star_order(tuple(cand))
        if order is not None:
            assert verify_star_order(tuple(cand), order)
            return ConstellationWitness(StarForest(forest.n, tuple(cand)), order)
    return None


def is_constellation_inductive(h: OrderedGraph) -> bool:
    """Recognition by the inductive definition.

    A nonempty star system qualifies iff a star anchored at the overall
    first vertex (as a right star) or at the overall last vertex (as a left
    star) can be removed leaving a constellation, or the system splits at a
    cut position with no star straddling and both sides are constellations.
    Memoized on the star subset.
    """
    forest = decompose_star_forest(h)
    if forest is None:
        return False
    stars = forest.stars
    vsets = [set(s.vertices) for s in stars]
    spans = [s.span for s in stars]
    one = [len(s.leaves) == 1 for s in stars]

    @lru_cache(maxsize=None)
    def rec(subset: frozenset) -> bool:
        if not subset:
            return True
        first = min(spans[i][0] for i in subset)
        last = max(spans[i][1] for i in subset)
        for i in subset:
            # anchored right star: its center must be the first vertex
            if spans[i][0] == first and (one[i] or stars[i].center == first):
                if rec(subset - {i}):
                    return True
            # anchored left star at the last vertex
            if spans[i][1] == last and (one[i] or stars[i].center == last):
                if rec(subset - {i}):
                    return True
        # concatenation: try every star-separating cut
        in_order = sorted(subset, key=lambda i: spans[i][0])
        run_max = 0
        for k in range(len(in_order) - 1):
            run_max = max(run_max, spans[in_order[k]][1])
            if run_max < spans[in_order[k + 1]][0]:
                left = frozenset(in_order[: k + 1])
                right = subset - left
                if rec(left) and rec(right):
                    return True
        return False

    return rec(frozenset(range(len(stars))))


def witness_json(w: ConstellationWitness) -> dict:
    """Serializable form: star list plus 1-based order indices."""
    return {
        "stars": [
            {"center": s.center, "leaves": list(s.leaves), "orientation": s.orientation}
            for s in w.forest.stars
        ],
        "order": [i + 1 for i in w.star_order],
    }


# ---------------------------------------------------------------- builders

def build_tr_constellation(t: int, r: int, shape: str = "sequential") -> OrderedGraph:
    """A constellation of t right r-stars, in one of two canonical shapes.

    sequential: the stars follow one another (star i on its own block of
    r+1 positions).  nested: all centers 1..t first, then the leaf blocks in
    center order.
    """
    if t < 1 or r < 1:
        raise ValueError("need t >= 1 and r >= 1")
    shape = shape.lower()
    edges = []
    if shape == "sequential":
        for i in range(t):
            c = i * (r + 1) + 1
            edges.extend((c, c + k) for k in range(1, r + 1))
    elif shape == "nested":
        for i in range(1, t + 1):
            base = t + (i - 1) * r
            edges.extend((i, base + k) for k in range(1, r + 1))
    else:
        raise ValueError(f"unknown shape {shape!r}")
    g = OrderedGraph(t * (r + 1), edges)
    if is_constellation(g) is None:
        raise AssertionError("builder produced a non-constellation")
    return g


def build_topminor_pattern(t: int) -> OrderedGraph:
    """Pattern whose embedding in a traced graph yields a K_t subdivision.

    Centers c_1..c_t sit at positions 1..t.  For each pair (i, j), i < j, in
    lexicographic order, two consecutive leaf positions follow: first the
    leaf joined to c_i, then the leaf joined to c_j.  The result has t*t
    vertices, t(t-1) edges, and is a constellation of t right (t-1)-stars.
    """
    if t < 2:
        raise ValueError("need t >= 2")
    edges = []
    pos = t
    for i, j in itertools.combinations(range(1, t + 1), 2):
        edges.append((i, pos + 1))
        edges.append((j, pos + 2))
        pos += 2
    return OrderedGraph(t * t, edges)


def topminor_leaf_positions(t: int) -> dict[tuple[int, int], int]:
    """Position of each directed leaf: (i, j) is the leaf joined to c_i
    inside the (i, j)/(j, i) pair block."""
    out = {}
    pos = t
    for i, j in itertools.combinations(range(1, t + 1), 2):
        out[(i, j)] = pos + 1
        out[(j, i)] = pos + 2
        pos += 2
    return out


def subdivision_certificate(
    G: TracedGraph, e: Embedding, t: int
) -> list[tuple[int, ...]]:
    """Expand an embedding of build_topminor_pattern(t) into subdivision paths.

    Each pair (i, j) yields the walk: embedded c_i, the embedded leaf joined
    to c_i, the consecutive host run to the leaf joined to c_j, then c_j.
    Raises ValueError if the embedding is invalid or the paths fail to be
    internally vertex-disjoint with branch vertices exactly the centers.
    """
    pattern = build_topminor_pattern(t)
    pos = e.positions
    if len(pos) != pattern.n:
        raise ValueError(f"embedding has {len(pos)} positions, need {pattern.n}")
    if pos[-1] > G.n:
        raise ValueError("embedding exceeds host")
    host_pat = G.pattern_graph()
    for (u, v) in pattern.edges:
        if not host_pat.has_edge(pos[u - 1], pos[v - 1]):
            raise ValueError(f"pattern edge ({u}, {v}) not carried by the host")
    leaf_at = topminor_leaf_positions(t)
    centers = {pos[i - 1] for i in range(1, t + 1)}
    paths: list[tuple[int, ...]] = []
    used: set[int] = set()
    for i, j in itertools.combinations(range(1, t + 1), 2):
        a = pos[leaf_at[(i, j)] - 1]
        b = pos[leaf_at[(j, i)] - 1]
        run = tuple(range(a, b + 1))
        internal = set(run)
        if internal & used:
            raise ValueError(f"paths for distinct pairs share vertices near ({i}, {j})")
        if internal & centers:
            raise ValueError(f"path for ({i}, {j}) runs through a branch vertex")
        used |= internal
        paths.append((pos[i - 1],) + run + (pos[j - 1],))
    return paths
