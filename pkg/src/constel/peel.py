"""Certified path-or-pattern outcomes on traced graphs.

The recursion takes a traced graph and a star constellation and returns one
of three certificates: an increasing induced path anchored at the window's
first (or last) vertex, an unanchored increasing induced path, or an
order-preserving pattern embedding with its achieved gap.  Dispatch follows
the constellation's shape: a single star runs the stretch iteration, a
concatenation splits the window into outer thirds, and an anchored star
recurses on the middle third and then either assembles the full pattern from
the first vertex's neighbors or descends into the successor window.

Certificates are built constructively and validated before being returned;
quantitative thresholds (when to settle for a two-vertex path, how deep the
stretch iteration runs) come either from the interval-certified size
functions or from a caller-supplied toy triple, but certificate validity
never depends on them.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .bigreal import BigReal, Inconclusive, certainly_ge, certainly_gt, log2
from .bounds import BoundContext, condition_threshold, f_val
from .constellation import RIGHT, decompose_star_forest, is_constellation
from .ordered import (
    Embedding,
    OrderedGraph,
    TracedGraph,
    slice_graph,
    validate_increasing_induced_path,
)
from .params import ParamFns

START = "start"
END = "end"


@dataclass(frozen=True)
class PropOutcome:
    """One of the three certificate kinds.

    P1 carries an anchored increasing induced path (start or end of the
    window), P2 an unanchored one, P3 a pattern embedding with the gap it
    achieves.
    """

    kind: str
    path: tuple[int, ...] = ()
    anchored: Optional[str] = None
    embedding: Optional[Embedding] = None
    gap: Optional[int] = None

    def __post_init__(self):
        if self.kind == "P1":
            if not self.path or self.anchored not in (START, END):
                raise ValueError("P1 needs a path and a start/end anchor")
        elif self.kind == "P2":
            if not self.path or self.anchored is not None:
                raise ValueError("P2 needs an unanchored path")
        elif self.kind == "P3":
            if self.embedding is None or self.gap is None or self.gap < 1:
                raise ValueError("P3 needs an embedding and a positive gap")
        else:
            raise ValueError(f"unknown outcome kind {self.kind!r}")


def _p1(path, anchored=START):
    return PropOutcome("P1", path=tuple(path), anchored=anchored)


def _p2(path):
    return PropOutcome("P2", path=tuple(path))


def _p3(embedding, host_n):
    return PropOutcome("P3", embedding=embedding, gap=embedding.gap(host_n))


@dataclass(frozen=True)
class ToyThresholds:
    """Replacement size functions for driving the recursion in tests.

    Each takes (n, t, p) and returns a float; only f steers the algorithm
    (the two-vertex shortcuts and the stretch iteration depth), h and g are
    carried so tests can state the quantitative claims against the same
    source.
    """

    f: Callable[[int, int, int], float]
    h: Callable[[int, int, int], float]
    g: Callable[[int, int, int], float]


@dataclass(frozen=True)
class PeelConfig:
    r: int
    params: Optional[ParamFns] = None
    quantitative: bool = True
    toy: Optional[ToyThresholds] = None

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be at least 1")
        if self.quantitative and self.params is None:
            raise ValueError("quantitative mode needs parameter functions")
        if not self.quantitative and self.toy is None:
            raise ValueError("toy mode needs a threshold triple")


# -- stretch and the first-vertex iteration --------------------------------

def _window_stretch(G: OrderedGraph, lo: int, hi: int) -> tuple[int, tuple[int, int]]:
    """Stretch and successor window of G[lo, hi], in G's own coordinates."""
    if hi - lo + 1 < 2:
        raise ValueError("stretch needs a window of at least two vertices")
    nbrs = [x for x in G.neighbors(lo) if lo < x <= hi]
    # a_0 is the first vertex itself, a_{d+1} the window end; the stretch
    # maxes over the neighbor gaps only, the successor index over all of them
    a = [lo] + nbrs + [hi]
    d = len(nbrs)
    value = max(a[i + 1] - a[i] for i in range(1, d + 1))
    best = max(a[i + 1] - a[i] for i in range(d + 1))
    idx = next(i for i in range(d + 1) if a[i + 1] - a[i] == best)
    return value, (a[idx], a[idx + 1] - 1)


def stretch(G: TracedGraph) -> tuple[int, tuple[int, int]]:
    """Largest gap between consecutive neighbors of v1, and the window
    realizing the first maximal gap (ties broken toward the smaller index)."""
    return _window_stretch(G, 1, G.n)


@dataclass(frozen=True)
class StretchPathResult:
    path: tuple[int, ...]
    precondition_held: bool


def stretch_path(G: TracedGraph, s: int, m: float) -> StretchPathResult:
    """Chain of first vertices of iterated successors.

    Successor windows are followed while they stay at least n/m large; the
    flag records whether every window in the chain had stretch at least
    size/s, which is the hypothesis under which the chain is guaranteed
    log m / log s vertices long.
    """
    n = G.n
    lo, hi = 1, n
    path = [1]
    held = True
    while hi - lo + 1 >= 2:
        size = hi - lo + 1
        value, (slo, shi) = _window_stretch(G, lo, hi)
        if value * s < size:
            held = False
        if (shi - slo + 1) * m < n:
            break
        lo, hi = slo, shi
        if path[-1] != lo:
            path.append(lo)
    return StretchPathResult(tuple(path), held)


# -- pattern shape ---------------------------------------------------------

@dataclass(frozen=True)
class _Shape:
    kind: str  # "star" | "concat" | "right" | "left"
    t: int
    orientation: str = RIGHT
    parts: Optional[tuple[OrderedGraph, OrderedGraph]] = None
    reduced: Optional[OrderedGraph] = None
    kept: tuple[int, ...] = ()


def _star_of_vertex(forest, v):
    for s in forest.stars:
        if v == s.center or v in s.leaves:
            return s
    return None


def _delete_vertices(h: OrderedGraph, drop: frozenset[int]) -> tuple[OrderedGraph, tuple[int, ...]]:
    kept = tuple(v for v in range(1, h.n + 1) if v not in drop)
    index = {old: new for new, old in enumerate(kept, start=1)}
    edges = [
        (index[u], index[v]) for (u, v) in h.edges if u in index and v in index
    ]
    return OrderedGraph(len(kept), edges), kept


def _classify(h: OrderedGraph, r: int) -> _Shape:
    forest = decompose_star_forest(h)
    if forest is None or is_constellation(h) is None:
        raise ValueError("pattern is not a constellation")
    if any(len(s.leaves) != r for s in forest.stars):
        raise ValueError("pattern stars must all have exactly r leaves")
    t = len(forest.stars)
    if t == 1:
        star = forest.stars[0]
        orientation = RIGHT if r == 1 else star.orientation
        return _Shape("star", t, orientation=orientation)
    spans = [s.span for s in forest.stars]
    for cut in range(1, h.n):
        if any(a <= cut < b for a, b in spans):
            continue
        h1 = slice_graph(h, 1, cut)
        h2 = slice_graph(h, cut + 1, h.n)
        if is_constellation(h1) is not None and is_constellation(h2) is not None:
            return _Shape("concat", t, parts=(h1, h2))
    first = _star_of_vertex(forest, 1)
    if first is not None and (first.center == 1 or r == 1):
        reduced, kept = _delete_vertices(h, frozenset(first.vertices))
        if is_constellation(reduced) is not None:
            return _Shape("right", t, reduced=reduced, kept=kept)
    last = _star_of_vertex(forest, h.n)
    if last is not None and (last.center == h.n or r == 1):
        reduced, _ = _delete_vertices(h, frozenset(last.vertices))
        if is_constellation(reduced) is not None:
            return _Shape("left", t)
    raise ValueError("pattern is not a constellation")


# -- thresholds ------------------------------------------------------------

def _log_r1_of(n: int, r: int) -> BigReal:
    return log2(BigReal.from_int(n)) / log2(BigReal.from_int(r + 1))


def _two_vertices_suffice(cfg: PeelConfig, n: int, t: int, p: int) -> bool:
    """Does a single first-vertex edge already meet the path target?

    True when p has grown past twice the p-free path target, or when n is
    below the size condition (both certified in quantitative mode; an
    inconclusive comparison keeps recursing, which is always sound).
    """
    if not cfg.quantitative:
        return p >= 2 * cfg.toy.f(n, t, 0) or cfg.toy.f(n, t, p) <= 2
    ell = _log_r1_of(n, cfg.r)
    ctx = BoundContext(r=cfg.r, params=cfg.params, ell=ell)
    try:
        if certainly_ge(BigReal.from_int(p), 2 * f_val(ctx, t, 0)):
            return True
    except Inconclusive:
        pass
    try:
        if certainly_gt(condition_threshold(cfg.params, t, p), ell):
            return True
    except Inconclusive:
        pass
    return False


def _iteration_floor_log2(cfg: PeelConfig, n: int, p: int):
    """log2 of the smallest window size the star iteration may keep."""
    if not cfg.quantitative:
        return math.log2(n) - cfg.toy.f(n, 1, p) * math.log2(2 * cfg.r)
    ell = _log_r1_of(n, cfg.r)
    ctx = BoundContext(r=cfg.r, params=cfg.params, ell=ell)
    f = f_val(ctx, 1, p)
    return log2(BigReal.from_int(n)) - f * log2(BigReal.from_int(2 * cfg.r))


def _meets_floor(cfg: PeelConfig, size: int, floor_log2) -> bool:
    if not cfg.quantitative:
        return math.log2(size) >= floor_log2
    try:
        return certainly_ge(log2(BigReal.from_int(size)), floor_log2)
    except Inconclusive:
        return False


# -- the recursion ---------------------------------------------------------

def peel(G: TracedGraph, H: OrderedGraph, cfg: PeelConfig, p: int = 0) -> PropOutcome:
    """Anchored path, plain path, or pattern embedding for (G, H).

    The pattern must be a constellation whose stars all have cfg.r leaves.
    The returned certificate always passes validate_outcome; quantitative
    strength (path length and gap against the size functions) additionally
    needs compliant parameters.
    """
    _classify(H, cfg.r)
    if p < 0:
        raise ValueError("p must be non-negative")
    out = _peel(G, H, cfg, p)
    if not validate_outcome(G, H, out, None):
        raise RuntimeError("internal error: produced an invalid certificate")
    return out


def _reflect(out: PropOutcome, n: int) -> PropOutcome:
    """Map an outcome of the reversed graph back to the original order."""
    if out.kind == "P3":
        emb = Embedding(tuple(n + 1 - q for q in reversed(out.embedding.positions)))
        return _p3(emb, n)
    path = tuple(n + 1 - q for q in reversed(out.path))
    if out.kind == "P1":
        return _p1(path, END if out.anchored == START else START)
    return _p2(path)


def _peel(G: TracedGraph, H: OrderedGraph, cfg: PeelConfig, p: int) -> PropOutcome:
    n = G.n
    shape = _classify(H, cfg.r)
    if shape.kind == "left" or (shape.kind == "star" and shape.orientation != RIGHT):
        return _reflect(_peel(G.reverse(), H.reverse(), cfg, p), n)
    if n == 1:
        return _p1((1,))
    if _two_vertices_suffice(cfg, n, shape.t, p):
        return _p1((1, 2))
    if shape.kind == "star":
        return _base_star(G, cfg, p)
    if shape.kind == "concat":
        return _concat(G, shape, cfg, p)
    return _anchored(G, H, shape, cfg, p)


def _pattern_neighbors(G: TracedGraph, v: int, lo: int, hi: int) -> list[int]:
    return [x for x in G.pattern_graph().neighbors(v) if lo <= x <= hi]


def _pick_in(cand: list[int], a: int, b: int) -> Optional[int]:
    """Smallest element of the sorted list inside [a, b], if any."""
    i = bisect_left(cand, a)
    if i < len(cand) and cand[i] <= b:
        return cand[i]
    return None


def _build_star(G: TracedGraph, lo: int, hi: int, r: int) -> Optional[Embedding]:
    """Star embedding centered at the window's first vertex.

    One leaf is taken from each of the r odd blocks of the window, skipping
    the even blocks so consecutive choices stay a block apart.  Returns None
    when some block holds no non-path neighbor; under the small-stretch
    condition that triggers this construction the blocks are wide enough
    that this does not happen, but the caller treats None as an ordinary
    fall-through.
    """
    size = hi - lo + 1
    s = 2 * r
    cand = _pattern_neighbors(G, lo, lo + 2, hi)
    leaves = []
    prev = lo
    for k in range(1, r + 1):
        block_lo = Fraction(lo) + Fraction((2 * k - 1) * size, s)
        block_hi = Fraction(lo) + Fraction(2 * k * size, s) - 1
        pick = _pick_in(cand, max(math.ceil(block_lo), prev + 1), math.floor(block_hi))
        if pick is None:
            return None
        leaves.append(pick)
        prev = pick
    return Embedding((lo, *leaves))


def _base_star(G: TracedGraph, cfg: PeelConfig, p: int) -> PropOutcome:
    """Right-star base: iterate successors, embedding on small stretch."""
    n = G.n
    s = 2 * cfg.r
    floor_log2 = _iteration_floor_log2(cfg, n, p)
    lo, hi = 1, n
    path = [1]
    while hi - lo + 1 >= 2 and _meets_floor(cfg, hi - lo + 1, floor_log2):
        size = hi - lo + 1
        value, (slo, shi) = _window_stretch(G, lo, hi)
        if value * s < size:
            emb = _build_star(G, lo, hi, cfg.r)
            if emb is not None:
                return _p3(emb, n)
        if not _meets_floor(cfg, shi - slo + 1, floor_log2):
            break
        lo, hi = slo, shi
        if path[-1] != lo:
            path.append(lo)
    return _p1(tuple(path))


def _concat(G: TracedGraph, shape: _Shape, cfg: PeelConfig, p: int) -> PropOutcome:
    n = G.n
    h1, h2 = shape.parts
    right_lo = max(1, (2 * n) // 3)
    o1 = _peel(slice_graph(G, 1, -(-n // 3)), h1, cfg, p)
    o2 = _peel(slice_graph(G, right_lo, n), h2, cfg, p)
    if o1.kind == "P3" and o2.kind == "P3":
        pos = o1.embedding.positions + tuple(
            q + right_lo - 1 for q in o2.embedding.positions
        )
        try:
            emb = Embedding(pos)
        except ValueError:
            # thirds overlap at n = 4 and the seam can collide; the graph is
            # far below any quantitative threshold there, so a path edge does
            return _p2((1, 2))
        return _p3(emb, n)
    child, offset = (o1, 0) if o1.kind != "P3" else (o2, right_lo - 1)
    return _p2(tuple(q + offset for q in child.path))


def _assemble(G: TracedGraph, H: OrderedGraph, shape: _Shape,
              inner: Embedding, offset: int, k: int) -> Optional[Embedding]:
    """Full pattern from the reduced embedding plus first-vertex neighbors.

    Walks the pattern positions in order.  Each run of deleted-star leaves
    between two lifted positions is placed in the odd blocks of width
    (k-1)/(2r+1) anchored at the left end of the run, mirroring the
    dense-neighbor argument: that spacing is what makes the achieved gap
    come out at least (k-1)/(2r+1) rather than just positive.  None when a
    block holds no non-path neighbor of vertex 1 (under the small-stretch
    trigger every block is at least stretch wide, so soundness never relies
    on the fallback).
    """
    n = G.n
    r = H.n - len(shape.kept) - 1
    if r < 1 or k < 2:
        return None
    spacing = Fraction(k - 1, 2 * r + 1)
    lifted = {old: inner.positions[i] + offset for i, old in enumerate(shape.kept)}
    cand = _pattern_neighbors(G, 1, 3, n)
    images = [1]
    prev = 1
    run_base, run_len = 1, 0
    for old in range(2, H.n + 1):
        if old in lifted:
            if lifted[old] <= prev:
                return None
            prev = lifted[old]
            run_base, run_len = prev, 0
        else:
            run_len += 1
            j = 2 * run_len - 1
            block_lo = run_base + 1 + j * spacing
            block_hi = run_base + 1 + (j + 1) * spacing
            nxt = next((o for o in shape.kept if o > old), None)
            bound = lifted[nxt] - 1 if nxt is not None else n
            pick = _pick_in(cand, max(math.ceil(block_lo), prev + 1),
                            min(math.ceil(block_hi) - 1, bound))
            if pick is None:
                return None
            prev = pick
        images.append(prev)
    return Embedding(tuple(images))


def _anchored(G: TracedGraph, H: OrderedGraph, shape: _Shape,
              cfg: PeelConfig, p: int) -> PropOutcome:
    """Right constellation: middle-third recursion, then the stretch split."""
    n = G.n
    if n < 3:
        return _p1((1, 2))
    mid_lo = n // 3
    mid = slice_graph(G, mid_lo, -(-2 * n // 3))
    inner = _peel(mid, shape.reduced, cfg, p)
    if inner.kind != "P3":
        return _p2(tuple(q + mid_lo - 1 for q in inner.path))
    # the reduced pattern sits in the middle third, so when v1's neighbors
    # are dense (small stretch) they fill every slot around it; otherwise
    # the successor window is at least stretch-sized and we recurse there
    k = min(inner.embedding.gap(mid.n), n // 3 - 2)
    value, (slo, shi) = _window_stretch(G, 1, n)
    if value * (2 * cfg.r + 1) <= k - 1:
        emb = _assemble(G, H, shape, inner.embedding, mid_lo - 1, k)
        if emb is not None:
            return _p3(emb, n)
    deeper = _peel(slice_graph(G, slo, shi), H, cfg, p + 1)
    offset = slo - 1
    if deeper.kind == "P1":
        path = tuple(q + offset for q in deeper.path)
        if path[0] != 1:
            path = (1,) + path
        return _p1(path)
    if deeper.kind == "P2":
        return _p2(tuple(q + offset for q in deeper.path))
    emb = Embedding(tuple(q + offset for q in deeper.embedding.positions))
    return _p3(emb, n)


# -- certificate checking --------------------------------------------------

def validate_outcome(G: TracedGraph, H: OrderedGraph, outcome: PropOutcome,
                     claimed_gap: Optional[int]) -> bool:
    """Machine check of a certificate against the graph it refers to.

    Paths must be increasing induced paths of G with the declared anchoring;
    embeddings must realize every pattern edge as a non-path edge of G in
    order, with achieved gap at least the claimed one.  Length thresholds
    are quantitative claims and are deliberately not checked here.
    """
    if outcome.kind in ("P1", "P2"):
        if not validate_increasing_induced_path(G, outcome.path):
            return False
        if outcome.kind == "P1":
            if outcome.anchored == START:
                return outcome.path[0] == 1
            return outcome.path[-1] == G.n
        return True
    if outcome.kind != "P3":
        return False
    emb = outcome.embedding
    if len(emb.positions) != H.n:
        return False
    if emb.positions[0] < 1 or emb.positions[-1] > G.n:
        return False
    pattern = G.pattern_graph()
    for (u, v) in H.edges:
        if not pattern.has_edge(emb.positions[u - 1], emb.positions[v - 1]):
            return False
    achieved = emb.gap(G.n)
    if outcome.gap is not None and achieved < outcome.gap:
        return False
    if claimed_gap is not None and achieved < claimed_gap:
        return False
    return True


def outcome_json(outcome: PropOutcome) -> dict:
    """JSON-ready form: vertices for paths, positions and gap for patterns."""
    if outcome.kind == "P3":
        return {
            "kind": "P3",
            "positions": list(outcome.embedding.positions),
            "gap": outcome.gap,
        }
    data = {"kind": outcome.kind, "vertices": list(outcome.path)}
    if outcome.kind == "P1":
        data["anchored"] = outcome.anchored
    return data
