"""Dense 2-degenerate graphs whose traced pattern is a constellation.

The generator grows a complete binary tree in which every node carries a
fixed 16-vertex gadget.  Gadgets are wired to their children through a
connector matching, and long-range rib edges run from a gadget's out-ports
down to the in-ports of far descendants.  Which depths are joined by ribs
is governed by a recursively nested interval system, and that nesting is
what lets a single Hamiltonian path thread the whole graph while avoiding
every rib.  Removing the path's edges then leaves a disjoint union of
one-sided stars, ordered by tree depth, so the traced form of the graph
carries a large constellation pattern despite being only 2-degenerate.

Vertices are numbered ``(node - 1) * 16 + role`` where nodes follow heap
order (root 1, children ``2s`` and ``2s + 1``) and roles are the module
constants below.  Builders return edge arrays split by kind so that the
verifiers can tell ribs from traversal edges without set lookups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .constellation import (
    LEFT,
    RIGHT,
    ConstellationWitness,
    OrientedStar,
    StarForest,
    is_constellation,
    verify_star_order,
)
from .ordered import OrderedGraph, TracedGraph

# Building at level 4 would need ~2.7e9 vertices; stop well before that.
MAX_LEVEL = 3

# Gadget roles.  Out-ports carry all inter-gadget wiring, the two top
# vertices sit behind them, and four three-vertex in-chains hang below.
# Chains are named for their job in the canonical traversal: the walk
# leaves a gadget through an entry chain's connector, tours a child's
# subtree, and comes back through the matching return chain.
LEFT_OUT = 0
RIGHT_OUT = 1
LEFT_TOP = 2
RIGHT_TOP = 3
LE_IN_FIRST, LE_IN_MID, LE_CONN = 4, 5, 6  # left entry chain
LR_IN_FIRST, LR_IN_MID, LR_CONN = 7, 8, 9  # left return chain
RE_IN_FIRST, RE_IN_MID, RE_CONN = 10, 11, 12  # right entry chain
RR_IN_FIRST, RR_IN_MID, RR_CONN = 13, 14, 15  # right return chain

ROLE_NAMES = (
    "left-out",
    "right-out",
    "left-top",
    "right-top",
    "left-entry-in-first",
    "left-entry-in-mid",
    "left-entry-conn",
    "left-return-in-first",
    "left-return-in-mid",
    "left-return-conn",
    "right-entry-in-first",
    "right-entry-in-mid",
    "right-entry-conn",
    "right-return-in-first",
    "right-return-in-mid",
    "right-return-conn",
)

ROLES_PER_NODE = 16

# Rib targets: the first in-port of every chain hangs off the left
# out-port of the rib's source, the middle in-port off the right one.
IN_FIRST_ROLES = (LE_IN_FIRST, LR_IN_FIRST, RE_IN_FIRST, RR_IN_FIRST)
IN_MID_ROLES = (LE_IN_MID, LR_IN_MID, RE_IN_MID, RR_IN_MID)

# The 17 edges inside one gadget: two crossed pairs of out-port/top
# edges, one path of two edges per chain, anchors tying the outer chains
# to the tops, a connector edge per side, and one bottom edge joining
# the two inner chains.
GADGET_EDGES = (
    (LEFT_OUT, LEFT_TOP),
    (LEFT_OUT, RIGHT_TOP),
    (RIGHT_OUT, RIGHT_TOP),
    (RIGHT_OUT, LEFT_TOP),
    (LE_IN_FIRST, LE_IN_MID),
    (LE_IN_MID, LE_CONN),
    (LR_IN_FIRST, LR_IN_MID),
    (LR_IN_MID, LR_CONN),
    (RE_IN_FIRST, RE_IN_MID),
    (RE_IN_MID, RE_CONN),
    (RR_IN_FIRST, RR_IN_MID),
    (RR_IN_MID, RR_CONN),
    (LEFT_TOP, LE_IN_FIRST),
    (RIGHT_TOP, RR_IN_FIRST),
    (LE_CONN, LR_CONN),
    (RE_CONN, RR_CONN),
    (LR_IN_FIRST, RE_IN_FIRST),
)

# Connector-to-child matching: (parent role, child role, child side).
TREE_EDGE_RULES = (
    (LE_CONN, LEFT_OUT, 0),
    (LR_CONN, RIGHT_OUT, 0),
    (RE_CONN, LEFT_OUT, 1),
    (RR_CONN, RIGHT_OUT, 1),
)


def h_fn(level: int) -> int:
    """Tree depth used at the given level: 5 * 2**(level-1) - 2."""
    if level < 1:
        raise ValueError("level must be at least 1")
    return 5 * 2 ** (level - 1) - 2


@dataclass(frozen=True)
class IntervalSystem:
    """Nested depth intervals prescribing which ranks rib into which.

    Each interval (i, j) marks depth i as a rib source whose targets sit
    at depth j; its rank a is determined by j - i + 1 = h_fn(a).
    """

    level: int
    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.level < 1:
            raise ValueError("level must be at least 1")
        if self.intervals != tuple(sorted(self.intervals)):
            raise ValueError("intervals must be sorted")

    def rank_of(self, interval: tuple[int, int]) -> int:
        """Rank a with h_fn(a) equal to the interval's length."""
        i, j = interval
        length = j - i + 1
        for a in range(1, self.level + 1):
            if h_fn(a) == length:
                return a
        raise ValueError(f"interval {interval} has no valid rank")

    def validate_nested(self) -> None:
        """Check distinct in-range endpoints, valid lengths, no crossings.

        Raises ValueError on the first violation.
        """
        top = h_fn(self.level)
        seen: set[int] = set()
        for (i, j) in self.intervals:
            if not (1 <= i <= j <= top):
                raise ValueError(f"interval {(i, j)} out of range [1, {top}]")
            if i in seen or j in seen or i == j:
                raise ValueError(f"endpoint reuse at {(i, j)}")
            seen.add(i)
            seen.add(j)
            self.rank_of((i, j))
        for a in self.intervals:
            for b in self.intervals:
                if a < b and a[1] > b[0] and a[1] < b[1] and a[0] < b[0]:
                    raise ValueError(f"intervals {a} and {b} cross")


def build_intervals(level: int) -> IntervalSystem:
    """Recursive interval system: one full-width interval over two shifted
    copies of the previous level's system."""
    if level < 1:
        raise ValueError("level must be at least 1")

    def rec(l: int) -> list[tuple[int, int]]:
        if l == 1:
            return [(1, 3)]
        prev = rec(l - 1)
        offset = h_fn(l - 1) + 1
        out = [(1, h_fn(l))]
        out.extend((i + 1, j + 1) for (i, j) in prev)
        out.extend((i + offset, j + offset) for (i, j) in prev)
        return out

    return IntervalSystem(level, tuple(sorted(rec(level))))


def format_intervals(system: IntervalSystem) -> str:
    """Plain text: `level L` then one `i j rank` line per interval."""
    lines = [f"level {system.level}"]
    for iv in system.intervals:
        lines.append(f"{iv[0]} {iv[1]} {system.rank_of(iv)}")
    return "\n".join(lines) + "\n"


def parse_intervals(text: str) -> IntervalSystem:
    """Inverse of format_intervals; validates nesting and ranks."""
    level: Optional[int] = None
    ivs: list[tuple[int, int]] = []
    ranks: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if level is None:
            if len(parts) != 2 or parts[0] != "level":
                raise ValueError(f"line {lineno}: expected `level L` header")
            level = int(parts[1])
            continue
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected `i j rank`")
        i, j, a = int(parts[0]), int(parts[1]), int(parts[2])
        ivs.append((i, j))
        ranks.append(a)
    if level is None:
        raise ValueError("missing `level L` header")
    system = IntervalSystem(level, tuple(sorted(ivs)))
    system.validate_nested()
    for iv, a in zip(ivs, ranks):
        if system.rank_of(iv) != a:
            raise ValueError(f"interval {iv} has rank {system.rank_of(iv)}, not {a}")
    return system


@dataclass
class ConstructionGraph:
    """A built gadget tree with its edges split by kind.

    Edge arrays hold vertex-id pairs with the smaller id first.  The
    graph view is the union of the three kinds; they are disjoint by
    construction (gadget edges stay inside a node, tree edges join
    adjacent depths, ribs skip at least two).
    """

    level: int
    depth: int
    n_nodes: int
    n: int
    system: IntervalSystem
    gadget_edges: np.ndarray
    tree_edges: np.ndarray
    rib_edges: np.ndarray
    _csr: Optional[tuple[np.ndarray, np.ndarray]] = field(
        default=None, repr=False, compare=False
    )

    @property
    def n_edges(self) -> int:
        return len(self.gadget_edges) + len(self.tree_edges) + len(self.rib_edges)

    def vid(self, node: int, role: int) -> int:
        return (node - 1) * ROLES_PER_NODE + role

    def node_of(self, v: Union[int, np.ndarray]) -> Union[int, np.ndarray]:
        return v // ROLES_PER_NODE + 1

    def role_of(self, v: Union[int, np.ndarray]) -> Union[int, np.ndarray]:
        return v % ROLES_PER_NODE

    def node_depth(self, node: Union[int, np.ndarray]) -> Union[int, np.ndarray]:
        """1-based depth of a heap-ordered tree node."""
        if isinstance(node, np.ndarray):
            return node_depths(node)
        return int(node).bit_length()

    def all_edges(self) -> np.ndarray:
        return np.concatenate([self.gadget_edges, self.tree_edges, self.rib_edges])

    def sources(self) -> tuple[tuple[int, int, int], ...]:
        """Rib sources as (depth, target depth, rank), one per interval."""
        return tuple(
            (i, j, self.system.rank_of((i, j))) for (i, j) in self.system.intervals
        )

    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency in CSR form (indptr, indices) over 0-based vids."""
        if self._csr is None:
            e = self.all_edges()
            u = np.concatenate([e[:, 0], e[:, 1]])
            v = np.concatenate([e[:, 1], e[:, 0]])
            order = np.argsort(u, kind="stable")
            indices = v[order]
            counts = np.bincount(u, minlength=self.n)
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            self._csr = (indptr, indices)
        return self._csr


def node_depths(nodes: np.ndarray) -> np.ndarray:
    """1-based depths of heap-ordered nodes, vectorized.

    Exact for node ids below 2**48; float log2 is only trusted after
    rounding to the nearest power boundary.
    """
    d = np.floor(np.log2(nodes)).astype(np.int64) + 1
    # guard against float rounding at exact powers of two
    d = np.where(nodes < (np.int64(1) << (d - 1)), d - 1, d)
    d = np.where(nodes >> d > 0, d + 1, d)
    return d


def build_construction(level: int) -> ConstructionGraph:
    """Build the level's gadget tree with all three edge kinds.

    Vertex count is 16 * (2**h_fn(level) - 1); level 3 is about 4.2
    million vertices and is the largest supported size.
    """
    if not 1 <= level <= MAX_LEVEL:
        raise ValueError(f"level must be in [1, {MAX_LEVEL}]")
    system = build_intervals(level)
    depth = h_fn(level)
    n_nodes = 2**depth - 1
    n = ROLES_PER_NODE * n_nodes

    base = np.arange(0, n, ROLES_PER_NODE, dtype=np.int64)
    gadget = np.empty((len(GADGET_EDGES) * n_nodes, 2), dtype=np.int64)
    for k, (a, b) in enumerate(GADGET_EDGES):
        lo, hi = min(a, b), max(a, b)
        gadget[k * n_nodes : (k + 1) * n_nodes, 0] = base + lo
        gadget[k * n_nodes : (k + 1) * n_nodes, 1] = base + hi

    internal = np.arange(1, 2 ** (depth - 1), dtype=np.int64)
    tree = np.empty((len(TREE_EDGE_RULES) * len(internal), 2), dtype=np.int64)
    for k, (prole, crole, side) in enumerate(TREE_EDGE_RULES):
        pvid = (internal - 1) * ROLES_PER_NODE + prole
        cvid = (2 * internal + side - 1) * ROLES_PER_NODE + crole
        block = tree[k * len(internal) : (k + 1) * len(internal)]
        block[:, 0] = np.minimum(pvid, cvid)
        block[:, 1] = np.maximum(pvid, cvid)

    rib_blocks: list[np.ndarray] = []
    for (i, j) in system.intervals:
        src = np.arange(2 ** (i - 1), 2**i, dtype=np.int64)
        drop = j - i
        # every depth-j descendant of every depth-i node
        tgt = (src[:, None] << drop) + np.arange(2**drop, dtype=np.int64)[None, :]
        src_rep = np.repeat(src, 2**drop)
        tgt_flat = tgt.ravel()
        for out_role, in_roles in ((LEFT_OUT, IN_FIRST_ROLES), (RIGHT_OUT, IN_MID_ROLES)):
            for in_role in in_roles:
                pair = np.empty((len(src_rep), 2), dtype=np.int64)
                pair[:, 0] = (src_rep - 1) * ROLES_PER_NODE + out_role
                pair[:, 1] = (tgt_flat - 1) * ROLES_PER_NODE + in_role
                rib_blocks.append(pair)
    ribs = (
        np.concatenate(rib_blocks)
        if rib_blocks
        else np.empty((0, 2), dtype=np.int64)
    )

    return ConstructionGraph(
        level=level,
        depth=depth,
        n_nodes=n_nodes,
        n=n,
        system=system,
        gadget_edges=gadget,
        tree_edges=tree,
        rib_edges=ribs,
    )


# Local visiting order of one gadget's vertices along the canonical walk.
# The walk pauses after the left entry connector to tour the left child's
# subtree and after the right entry connector to tour the right one.
_WALK_BEFORE_LEFT = (LEFT_OUT, LEFT_TOP, LE_IN_FIRST, LE_IN_MID, LE_CONN)
_WALK_BETWEEN = (LR_CONN, LR_IN_MID, LR_IN_FIRST, RE_IN_FIRST, RE_IN_MID, RE_CONN)
_WALK_AFTER_RIGHT = (RR_CONN, RR_IN_MID, RR_IN_FIRST, RIGHT_TOP, RIGHT_OUT)


def ham_path(C: ConstructionGraph) -> np.ndarray:
    """The canonical rib-free Hamiltonian path, as an array of vids.

    Runs from the root's left out-port to its right out-port, touring
    subtrees depth-first between a gadget's entry and return connectors.
    The result is validated before being returned; a RuntimeError here
    would mean the construction itself is broken.
    """
    out = np.empty(C.n, dtype=np.int64)
    cursor = 0
    first_leaf = 2 ** (C.depth - 1)

    # Iterative DFS; explicit segments avoid Python recursion limits.
    # Stack entries: (node, stage) with stage 0 = before left child,
    # 1 = between children, 2 = after right child.
    stack: list[tuple[int, int]] = [(1, 0)]
    while stack:
        node, stage = stack.pop()
        b = (node - 1) * ROLES_PER_NODE
        if node >= first_leaf:
            # leaves run straight through, connector to connector
            for role in (
                _WALK_BEFORE_LEFT + _WALK_BETWEEN + _WALK_AFTER_RIGHT
            ):
                out[cursor] = b + role
                cursor += 1
            continue
        if stage == 0:
            for role in _WALK_BEFORE_LEFT:
                out[cursor] = b + role
                cursor += 1
            stack.append((node, 1))
            stack.append((2 * node, 0))
        elif stage == 1:
            for role in _WALK_BETWEEN:
                out[cursor] = b + role
                cursor += 1
            stack.append((node, 2))
            stack.append((2 * node + 1, 0))
        else:
            for role in _WALK_AFTER_RIGHT:
                out[cursor] = b + role
                cursor += 1
    if cursor != C.n:
        raise RuntimeError("walk did not cover every vertex")
    problem = validate_ham_path(C, out)
    if problem is not None:
        raise RuntimeError(f"canonical walk invalid: {problem}")
    return out


def _edge_keys(pairs: np.ndarray, n: int) -> np.ndarray:
    """Order-insensitive int64 keys for vertex pairs."""
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    return lo * np.int64(n) + hi


def validate_ham_path(C: ConstructionGraph, path: np.ndarray) -> Optional[str]:
    """None if the path is a rib-free Hamiltonian traversal with the
    canonical endpoints, else a short description of the first failure."""
    path = np.asarray(path, dtype=np.int64)
    if path.shape != (C.n,):
        return f"expected {C.n} vertices, got {path.shape}"
    seen = np.zeros(C.n, dtype=bool)
    seen[path] = True
    if not seen.all():
        return "not a permutation of the vertex set"
    if path[0] != C.vid(1, LEFT_OUT) or path[-1] != C.vid(1, RIGHT_OUT):
        return "endpoints are not the root out-ports"
    steps = np.stack([path[:-1], path[1:]], axis=1)
    step_keys = np.sort(_edge_keys(steps, C.n))
    walk_keys = np.sort(
        np.concatenate(
            [_edge_keys(C.gadget_edges, C.n), _edge_keys(C.tree_edges, C.n)]
        )
    )
    hits = np.searchsorted(walk_keys, step_keys)
    hits = np.minimum(hits, len(walk_keys) - 1)
    ok = walk_keys[hits] == step_keys
    if not ok.all():
        bad = int(np.argmin(ok))
        u, v = steps[np.argsort(_edge_keys(steps, C.n))[bad]]
        rib_keys = np.sort(_edge_keys(C.rib_edges, C.n))
        k = step_keys[bad]
        pos = np.searchsorted(rib_keys, k)
        if pos < len(rib_keys) and rib_keys[pos] == k:
            return f"step ({int(u)}, {int(v)}) uses a rib"
        return f"step ({int(u)}, {int(v)}) is not an edge"
    return None


def to_traced(C: ConstructionGraph, path: Optional[np.ndarray] = None) -> TracedGraph:
    """Relabel by path position so the canonical walk becomes 1..n.

    Every step of the walk turns into a consecutive pair, so the result
    is traced; all remaining edges land in its pattern.  Sizes beyond
    level 2 are impractical here (level 3 has ~4.2M vertices).
    """
    if path is None:
        path = ham_path(C)
    else:
        problem = validate_ham_path(C, path)
        if problem is not None:
            raise ValueError(problem)
    pos = np.empty(C.n, dtype=np.int64)
    pos[path] = np.arange(1, C.n + 1)
    e = C.all_edges()
    mapped = np.stack(
        [np.minimum(pos[e[:, 0]], pos[e[:, 1]]), np.maximum(pos[e[:, 0]], pos[e[:, 1]])],
        axis=1,
    )
    return TracedGraph(C.n, [(int(u), int(v)) for u, v in mapped])


def check_two_degenerate(
    G: Union[OrderedGraph, ConstructionGraph],
) -> Optional[tuple[int, ...]]:
    """Elimination order witnessing 2-degeneracy, or None.

    Repeatedly removes a vertex of current degree at most 2; succeeds
    exactly when the graph has no subgraph of minimum degree 3.
    Vertices in the order are 1-based for ordered graphs and 0-based
    vids for construction graphs.
    """
    if isinstance(G, ConstructionGraph):
        indptr, indices = G.csr()
        n = G.n
        offset = 0
    else:
        n = G.n
        deg_count = np.zeros(n, dtype=np.int64)
        e = np.array(list(G.edges), dtype=np.int64).reshape(-1, 2) - 1
        u = np.concatenate([e[:, 0], e[:, 1]])
        v = np.concatenate([e[:, 1], e[:, 0]])
        order_ = np.argsort(u, kind="stable")
        indices = v[order_]
        np.add.at(deg_count, u, 1)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg_count, out=indptr[1:])
        offset = 1

    deg = (indptr[1:] - indptr[:-1]).astype(np.int64)
    removed = np.zeros(n, dtype=bool)
    stack = [int(v) for v in np.flatnonzero(deg <= 2)]
    order: list[int] = []
    ind = indices  # local bindings keep the loop tight
    ptr = indptr
    while stack:
        v = stack.pop()
        if removed[v] or deg[v] > 2:
            continue
        removed[v] = True
        order.append(v + offset)
        for w in ind[ptr[v] : ptr[v + 1]]:
            if not removed[w]:
                deg[w] -= 1
                if deg[w] == 2:
                    stack.append(int(w))
    if len(order) != n:
        return None
    return tuple(order)


@dataclass(frozen=True)
class _RuleStars:
    """Leftover stars of the canonical walk, in path positions."""

    centers: np.ndarray  # position of each star's center
    spans_lo: np.ndarray
    spans_hi: np.ndarray
    order_keys: np.ndarray  # sort key: (node depth, connector flag, center)
    stars: tuple[OrientedStar, ...]


def _leftover_stars(C: ConstructionGraph, pos: np.ndarray) -> _RuleStars:
    """Derive the stars of graph-minus-path from the wiring rules.

    Each gadget's left out-port keeps its edge to the right top plus all
    its rib edges and becomes a rightward star; symmetrically the right
    out-port keeps the left top and becomes a leftward star.  Each used
    connector edge survives as a 2-vertex star centered on its earlier
    endpoint.
    """
    nodes = np.arange(1, C.n_nodes + 1, dtype=np.int64)
    depths = node_depths(nodes)
    base = (nodes - 1) * ROLES_PER_NODE
    first_leaf = 2 ** (C.depth - 1)

    # rib leaves grouped by their source out-port
    rib_by_src: dict[int, list[int]] = {}
    if len(C.rib_edges):
        src = C.rib_edges[:, 0]
        tgt_pos = pos[C.rib_edges[:, 1]]
        grp = np.argsort(src, kind="stable")
        uniq, starts = np.unique(src[grp], return_index=True)
        bounds = np.append(starts, len(grp))
        for k, u in enumerate(uniq):
            rib_by_src[int(u)] = tgt_pos[grp[bounds[k] : bounds[k + 1]]].tolist()

    stars: list[OrientedStar] = []
    keys: list[int] = []

    def key(d: int, connector: int, center: int) -> int:
        return (d << 24) | (connector << 23) | center

    for idx in range(C.n_nodes):
        d = int(depths[idx])
        b = int(base[idx])
        lo_center = int(pos[b + LEFT_OUT])
        lo_leaves = sorted([int(pos[b + RIGHT_TOP])] + rib_by_src.get(b + LEFT_OUT, []))
        stars.append(OrientedStar(lo_center, tuple(lo_leaves), RIGHT))
        keys.append(key(d, 0, lo_center))

        ro_center = int(pos[b + RIGHT_OUT])
        ro_leaves = sorted([int(pos[b + LEFT_TOP])] + rib_by_src.get(b + RIGHT_OUT, []))
        stars.append(OrientedStar(ro_center, tuple(ro_leaves), LEFT))
        keys.append(key(d, 0, ro_center))

        if int(nodes[idx]) < first_leaf:
            # internal gadgets do not walk their connector edges
            for ca, cb in ((LE_CONN, LR_CONN), (RE_CONN, RR_CONN)):
                p, q = int(pos[b + ca]), int(pos[b + cb])
                c, leaf = (p, q) if p < q else (q, p)
                stars.append(OrientedStar(c, (leaf,), RIGHT))
                keys.append(key(d, 1, c))

    centers = np.array([s.center for s in stars], dtype=np.int64)
    spans_lo = np.array([s.span[0] for s in stars], dtype=np.int64)
    spans_hi = np.array([s.span[1] for s in stars], dtype=np.int64)
    return _RuleStars(
        centers=centers,
        spans_lo=spans_lo,
        spans_hi=spans_hi,
        order_keys=np.array(keys, dtype=np.int64),
        stars=tuple(stars),
    )


def _check_star_partition(
    C: ConstructionGraph, pos: np.ndarray, rules: _RuleStars
) -> Optional[str]:
    """Star edges plus walk steps must exactly tile the edge set."""
    counts = np.fromiter(
        (len(s.leaves) for s in rules.stars), dtype=np.int64, count=len(rules.stars)
    )
    total = int(counts.sum())
    star_arr = np.empty((total, 2), dtype=np.int64)
    star_arr[:, 0] = np.repeat(rules.centers, counts)
    star_arr[:, 1] = np.fromiter(
        (leaf for s in rules.stars for leaf in s.leaves),
        dtype=np.int64,
        count=total,
    )
    steps = np.stack(
        [np.arange(1, C.n, dtype=np.int64), np.arange(2, C.n + 1, dtype=np.int64)],
        axis=1,
    )
    got = np.sort(
        np.concatenate([_edge_keys(star_arr, C.n + 1), _edge_keys(steps, C.n + 1)])
    )
    e = C.all_edges()
    mapped = np.stack([pos[e[:, 0]], pos[e[:, 1]]], axis=1)
    want = np.sort(_edge_keys(mapped, C.n + 1))
    if len(got) != len(want):
        return f"star/path edges number {len(got)}, graph has {len(want)}"
    if not np.array_equal(got, want):
        return "star and path edges do not tile the graph's edges"
    if len(np.unique(got)) != len(got):
        return "an edge is covered twice"
    return None


def _check_order_by_interiors(rules: _RuleStars) -> Optional[str]:
    """Depth order is consistent when every center strictly inside a
    star's span comes later in the order; checked by range-minimum."""
    order = np.argsort(rules.order_keys, kind="stable")
    rank_of_star = np.empty(len(order), dtype=np.int64)
    rank_of_star[order] = np.arange(len(order))

    perm = np.argsort(rules.centers)
    centers_sorted = rules.centers[perm]
    ranks_sorted = rank_of_star[perm]

    # sparse table for range-minimum over star ranks by center position
    m = len(ranks_sorted)
    table = [ranks_sorted]
    span = 1
    while 2 * span <= m:
        prev = table[-1]
        table.append(np.minimum(prev[: m - 2 * span + 1], prev[span : m - span + 1]))
        span *= 2

    # interior centers of star s sit at sorted indices [a_s, b_s)
    a = np.searchsorted(centers_sorted, rules.spans_lo, side="right")
    b = np.searchsorted(centers_sorted, rules.spans_hi, side="left")
    width = b - a
    star_idx = np.flatnonzero(width > 0)
    k_of = np.floor(np.log2(width[star_idx])).astype(np.int64)
    for k in range(len(table)):
        sel = star_idx[k_of == k]
        if len(sel) == 0:
            continue
        lo = table[k][a[sel]]
        hi = table[k][b[sel] - 2**k]
        bad = np.minimum(lo, hi) < rank_of_star[sel]
        if bad.any():
            culprit = int(sel[int(np.argmax(bad))])
            return (
                f"star at position {int(rules.centers[culprit])} has an "
                "earlier-ordered center inside its span"
            )
    return None


def pattern_is_constellation(
    C: ConstructionGraph, path: Optional[np.ndarray] = None
) -> ConstellationWitness:
    """Witness that removing the canonical walk leaves an ordered
    constellation.

    Builds the leftover stars from the wiring rules, confirms they tile
    the edge set exactly, checks the depth order pairwise, and at levels
    1 and 2 cross-checks against the generic recognizer.  Level 3 is too
    large for the pairwise check; use check_star_order_by_depth there.
    Raises RuntimeError if any step fails.
    """
    if path is None:
        path = ham_path(C)
    else:
        problem = validate_ham_path(C, path)
        if problem is not None:
            raise ValueError(problem)
    pos = np.empty(C.n, dtype=np.int64)
    pos[path] = np.arange(1, C.n + 1)

    rules = _leftover_stars(C, pos)
    problem = _check_star_partition(C, pos, rules)
    if problem is not None:
        raise RuntimeError(problem)

    by_span = sorted(range(len(rules.stars)), key=lambda i: rules.stars[i].span)
    forest = StarForest(C.n, tuple(rules.stars[i] for i in by_span))
    inv = {orig: new for new, orig in enumerate(by_span)}
    depth_order = tuple(
        inv[i] for i in np.argsort(rules.order_keys, kind="stable")
    )
    if not verify_star_order(forest.stars, depth_order):
        raise RuntimeError("depth order fails the pairwise span check")

    if C.level <= 2:
        pattern = to_traced(C, path).pattern_graph()
        if is_constellation(pattern) is None:
            raise RuntimeError("generic recognizer rejects the leftover pattern")
    return ConstellationWitness(forest=forest, star_order=depth_order)


def check_star_order_by_depth(
    C: ConstructionGraph, path: Optional[np.ndarray] = None
) -> None:
    """Level-3-capable star check: tiling plus a range-minimum argument
    in place of the quadratic pairwise span test.

    Raises RuntimeError on failure.
    """
    if path is None:
        path = ham_path(C)
    pos = np.empty(C.n, dtype=np.int64)
    pos[path] = np.arange(1, C.n + 1)
    rules = _leftover_stars(C, pos)
    problem = _check_star_partition(C, pos, rules)
    if problem is None:
        problem = _check_order_by_interiors(rules)
    if problem is not None:
        raise RuntimeError(problem)


def comparability_report(C: ConstructionGraph) -> Optional[str]:
    """Every edge must join ancestor-related nodes, and same-depth
    endpoints must share a gadget.  None when both hold."""
    e = C.all_edges()
    a = C.node_of(e[:, 0])
    b = C.node_of(e[:, 1])
    da = node_depths(a)
    db = node_depths(b)
    lo_node = np.where(da <= db, a, b)
    hi_node = np.where(da <= db, b, a)
    drop = np.abs(db - da)
    if not np.array_equal(hi_node >> drop, lo_node):
        return "an edge joins unrelated nodes"
    same_depth = da == db
    if not np.array_equal(a[same_depth], b[same_depth]):
        return "a same-depth edge leaves its gadget"
    return None
