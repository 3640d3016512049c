"""Shared test utilities: star-forest generators and a dyadic parameter table."""

import itertools
import random
from fractions import Fraction

from constel.constellation import build_topminor_pattern
from constel.ordered import Embedding, OrderedGraph, TracedGraph


def iter_star_forest_edge_sets(n):
    """Every ordered star forest whose stars cover exactly the vertices 1..n.

    Yields edge frozensets.  Each partition of [n] into blocks of size >= 2
    is visited once (blocks discovered by their minimum element); blocks of
    size >= 3 contribute both the min-centered and the max-centered star.
    Forests with isolated vertices are order-isomorphic to spanning forests
    on fewer vertices, so this enumeration is exhaustive up to isolates.
    """

    def rec(remaining, acc):
        if not remaining:
            yield frozenset(acc)
            return
        v = remaining[0]
        rest = remaining[1:]
        for size in range(1, len(rest) + 1):
            for others in itertools.combinations(rest, size):
                new_rest = tuple(x for x in rest if x not in others)
                yield from rec(new_rest, acc + [(v, o) for o in others])
                if size >= 2:
                    c = others[-1]
                    left_edges = [(x, c) for x in (v,) + others if x != c]
                    yield from rec(new_rest, acc + left_edges)

    yield from rec(tuple(range(1, n + 1)), [])


def random_star_forest(rng: random.Random, n: int) -> OrderedGraph:
    """A random ordered star forest on n positions, possibly with isolates."""
    pool = list(range(1, n + 1))
    rng.shuffle(pool)
    edges = []
    while len(pool) >= 2 and rng.random() < 0.9:
        size = rng.randint(2, min(5, len(pool)))
        block = sorted(pool[:size])
        del pool[:size]
        center = block[0] if rng.random() < 0.5 else block[-1]
        edges.extend(
            (min(center, v), max(center, v)) for v in block if v != center
        )
    return OrderedGraph(n, edges)


def random_traced_graph(rng: random.Random, n: int, extra: float = 0.08) -> TracedGraph:
    """The full path on n positions plus a sprinkling of longer edges."""
    edges = [(i, i + 1) for i in range(1, n)]
    for u in range(1, n - 1):
        for v in range(u + 2, n + 1):
            if rng.random() < extra:
                edges.append((u, v))
    return TracedGraph(n, edges)


def plant_topminor(t: int, spacing: int = 3):
    """Plant build_topminor_pattern(t) on an arithmetic position sequence."""
    pat = build_topminor_pattern(t)
    pos = {v: spacing * (v - 1) + 1 for v in range(1, pat.n + 1)}
    n = pos[pat.n]
    edges = {(i, i + 1) for i in range(1, n)}
    edges |= {(pos[u], pos[v]) for (u, v) in pat.edges}
    return TracedGraph(n, edges), Embedding(tuple(pos[v] for v in range(1, pat.n + 1)))


def budgeted_longest_induced_path(G, budget: int, rng: random.Random) -> int:
    """Randomized depth-first hunt for long induced paths.

    Same extension rule as the exact oracle but with shuffled candidate
    order and a global budget on explored prefixes; returns the best
    length found.  A lower bound on the true maximum, nothing more.
    """
    adj = [0] * (G.n + 1)
    for (u, v) in G.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    best = 0
    nodes = 0
    path: list[int] = []

    def extend(last: int, visited: int, banned: int) -> bool:
        nonlocal best, nodes
        nodes += 1
        best = max(best, len(path))
        if nodes >= budget:
            return True
        cands = adj[last] & ~(visited | banned)
        banned |= adj[last]
        ws = []
        while cands:
            bit = cands & -cands
            cands ^= bit
            ws.append(bit.bit_length() - 1)
        rng.shuffle(ws)
        for w in ws:
            path.append(w)
            done = extend(w, visited | (1 << w), banned)
            path.pop()
            if done:
                return True
        return False

    starts = list(range(1, G.n + 1))
    while nodes < budget:
        s = rng.choice(starts)
        path.append(s)
        done = extend(s, 1 << s, 0)
        path.pop()
        if done:
            break
    return best


# Dyadic parameter table for exact cross-checks: compliant (checked in the
# parameter tests), and every derived constant is an exact power of two once
# the log-size variable is itself a suitable power of two.
SMALL_PHI_TABLE = {
    -2: Fraction(8, 256),
    -1: Fraction(6, 256),
    0: Fraction(4, 256),
    1: Fraction(3, 256),
    2: Fraction(5, 512),
}
