"""Star decomposition, the two constellation recognizers, and the builders."""

import itertools
import random

import pytest

from constel.constellation import (
    LEFT,
    RIGHT,
    OrientedStar,
    build_topminor_pattern,
    build_tr_constellation,
    decompose_star_forest,
    is_constellation,
    is_constellation_inductive,
    subdivision_certificate,
    topminor_leaf_positions,
    verify_star_order,
    witness_json,
)
from constel.ordered import (
    Embedding,
    OrderedGraph,
    TracedGraph,
    contains_pattern,
    is_one_sided,
)
from helpers import iter_star_forest_edge_sets, plant_topminor, random_star_forest


# ---------------------------------------------------------------- decompose

def test_decompose_single_right_star():
    f = decompose_star_forest(OrderedGraph(3, [(1, 2), (1, 3)]))
    assert f is not None and len(f.stars) == 1
    s = f.stars[0]
    assert s.center == 1 and s.leaves == (2, 3) and s.orientation == RIGHT


def test_decompose_path_fails():
    assert decompose_star_forest(OrderedGraph(3, [(1, 2), (2, 3)])) is None


def test_decompose_interleaved_pair():
    f = decompose_star_forest(OrderedGraph(6, [(2, 4), (2, 6), (1, 5), (3, 5)]))
    assert f is not None
    by_center = {s.center: s for s in f.stars}
    assert by_center[2].leaves == (4, 6) and by_center[2].orientation == RIGHT
    assert by_center[5].leaves == (1, 3) and by_center[5].orientation == LEFT


def test_decompose_ignores_isolated_vertices():
    f = decompose_star_forest(OrderedGraph(9, [(2, 5)]))
    assert f is not None and len(f.stars) == 1


def test_decompose_rejects_non_star_component():
    # triangle
    assert decompose_star_forest(OrderedGraph(3, [(1, 2), (1, 3), (2, 3)])) is None
    # two-sided star
    assert decompose_star_forest(OrderedGraph(3, [(1, 2), (2, 3)])) is None


# ---------------------------------------------------------------- recognizer

def test_crossing_matching_is_constellation():
    h = OrderedGraph(4, [(1, 3), (2, 4)])
    w = is_constellation(h)
    assert w is not None
    assert verify_star_order(w.forest.stars, w.star_order)
    assert is_constellation_inductive(h)


def test_single_star_is_constellation():
    h = OrderedGraph(4, [(1, 2), (1, 3), (1, 4)])
    w = is_constellation(h)
    assert w is not None and w.star_order == (0,)


def test_interleaved_two_stars_rejected():
    h = OrderedGraph(6, [(2, 4), (2, 6), (1, 5), (3, 5)])
    assert is_constellation(h) is None
    assert not is_constellation_inductive(h)


def test_one_star_orientation_must_flip():
    # {3,5} read as a left star (center 5) precedes the left star {4; 1, 2};
    # with the default right reading neither order works.
    h = OrderedGraph(5, [(3, 5), (1, 4), (2, 4)])
    w = is_constellation(h)
    assert w is not None
    assert is_constellation_inductive(h)


def test_pairwise_orientation_freedom_is_not_enough():
    # 1-star {3,6} would need endpoint 3 against {5; 7, 8} but endpoint 6
    # against {4; 1, 2}; no single orientation works and neither star can
    # precede it, so this is not a constellation.
    h = OrderedGraph(8, [(3, 6), (5, 7), (5, 8), (1, 4), (2, 4)])
    assert is_constellation(h) is None
    assert not is_constellation_inductive(h)


def test_empty_forest_is_constellation():
    h = OrderedGraph(5)
    w = is_constellation(h)
    assert w is not None and w.star_order == ()
    assert is_constellation_inductive(h)


def test_concatenated_right_left_stars():
    h = OrderedGraph(6, [(1, 2), (1, 3), (4, 6), (5, 6)])
    assert is_constellation(h) is not None
    assert is_constellation_inductive(h)


def test_recognizers_agree_exhaustively_small():
    """Both recognizers on every spanning star forest with up to 7 vertices.

    (The 8-vertex layer runs in the acceptance suite.)
    """
    for n in range(2, 8):
        for edges in iter_star_forest_edge_sets(n):
            h = OrderedGraph(n, edges)
            w = is_constellation(h)
            assert (w is not None) == is_constellation_inductive(h), sorted(edges)
            if w is not None:
                assert verify_star_order(w.forest.stars, w.star_order)


def test_recognizers_agree_random_14():
    rng = random.Random(20240801)
    for _ in range(300):
        h = random_star_forest(rng, 14)
        w = is_constellation(h)
        assert (w is not None) == is_constellation_inductive(h), sorted(h.edges)
        if w is not None:
            assert verify_star_order(w.forest.stars, w.star_order)


def test_ordered_matchings_always_accepted():
    rng = random.Random(7)
    for _ in range(100):
        n = rng.randint(2, 12)
        pool = list(range(1, n + 1))
        rng.shuffle(pool)
        edges = []
        while len(pool) >= 2:
            a, b = pool.pop(), pool.pop()
            edges.append((min(a, b), max(a, b)))
        h = OrderedGraph(n, edges)
        assert is_constellation(h) is not None
        assert is_constellation_inductive(h)


def test_reversal_symmetry():
    rng = random.Random(99)
    for _ in range(200):
        h = random_star_forest(rng, 10)
        assert (is_constellation(h) is None) == (is_constellation(h.reverse()) is None)


def test_isolated_vertices_do_not_change_acceptance():
    core = OrderedGraph(4, [(1, 3), (2, 4)])
    padded = OrderedGraph(8, [(2, 5), (3, 7)])  # same relative layout, gaps added
    assert (is_constellation(core) is None) == (is_constellation(padded) is None)


def test_witness_json_shape():
    w = is_constellation(OrderedGraph(4, [(1, 3), (2, 4)]))
    blob = witness_json(w)
    assert set(blob) == {"stars", "order"}
    assert sorted(blob["order"]) == list(range(1, len(blob["stars"]) + 1))
    for s in blob["stars"]:
        assert set(s) == {"center", "leaves", "orientation"}


# ---------------------------------------------------------------- builders

def test_tr_constellation_examples():
    assert build_tr_constellation(1, 2).edges == {(1, 2), (1, 3)}
    assert build_tr_constellation(2, 1).edges == {(1, 2), (3, 4)}
    nested = build_tr_constellation(2, 2, shape="nested")
    assert nested.edges == {(1, 3), (1, 4), (2, 5), (2, 6)}
    assert is_constellation(nested) is not None


def test_tr_constellation_rejects_bad_args():
    with pytest.raises(ValueError):
        build_tr_constellation(0, 2)
    with pytest.raises(ValueError):
        build_tr_constellation(2, 2, shape="spiral")


def test_topminor_t2():
    assert build_topminor_pattern(2).edges == {(1, 3), (2, 4)}
    with pytest.raises(ValueError):
        build_topminor_pattern(1)


def test_topminor_leaf_block_order_t4():
    # leaf blocks must follow the lexicographic pair order, each pair
    # contributing its two directed leaves consecutively
    at = topminor_leaf_positions(4)
    expect = [(1, 2), (2, 1), (1, 3), (3, 1), (1, 4), (4, 1),
              (2, 3), (3, 2), (2, 4), (4, 2), (3, 4), (4, 3)]
    got = sorted(at, key=lambda k: at[k])
    assert got == expect
    assert sorted(at.values()) == list(range(5, 17))


def test_topminor_structure():
    for t in range(2, 7):
        h = build_topminor_pattern(t)
        assert h.n == t * t
        assert len(h.edges) == t * (t - 1)
        assert is_one_sided(h)
        f = decompose_star_forest(h)
        assert f is not None and len(f.stars) == t
        assert all(len(s.leaves) == t - 1 for s in f.stars)
        assert is_constellation(h) is not None


# ---------------------------------------------------------------- subdivision

def test_subdivision_synthetic_t2():
    host = TracedGraph(7, [(i, i + 1) for i in range(1, 7)] + [(1, 5), (2, 7)])
    paths = subdivision_certificate(host, Embedding((1, 2, 5, 7)), 2)
    assert paths == [(1, 5, 6, 7, 2)]


def test_subdivision_degenerate_adjacent_leaves():
    host = TracedGraph(5, [(i, i + 1) for i in range(1, 5)] + [(1, 4), (2, 5)])
    paths = subdivision_certificate(host, Embedding((1, 2, 4, 5)), 2)
    assert paths == [(1, 4, 5, 2)]


def test_subdivision_planted_t4():
    host, emb = plant_topminor(4)
    paths = subdivision_certificate(host, emb, 4)
    assert len(paths) == 6
    seen = set()
    centers = set(emb.positions[:4])
    for p in paths:
        assert p[0] in centers and p[-1] in centers
        interior = set(p[1:-1])
        assert not interior & centers
        assert not interior & seen
        seen |= interior


def test_subdivision_found_by_search_t2():
    host, _ = plant_topminor(2, spacing=4)
    emb = contains_pattern(host.pattern_graph(), build_topminor_pattern(2), min_gap=2)
    assert emb is not None
    paths = subdivision_certificate(host, emb, 2)
    assert len(paths) == 1


def test_subdivision_rejects_broken_embedding():
    host, emb = plant_topminor(2)
    with pytest.raises(ValueError, match="positions"):
        subdivision_certificate(host, Embedding((1, 2, 3)), 2)
    # drop a planted edge so the pattern is no longer carried
    edges = set(host.edges)
    edges.remove((1, 7))
    broken = TracedGraph(host.n, edges)
    with pytest.raises(ValueError, match="not carried"):
        subdivision_certificate(broken, emb, 2)


def test_oriented_star_validation():
    with pytest.raises(ValueError):
        OrientedStar(2, (1, 3), RIGHT)
    with pytest.raises(ValueError):
        OrientedStar(5, (), LEFT)
    s = OrientedStar(1, (2, 5), RIGHT)
    assert s.span == (1, 5) and s.edges == {(1, 2), (1, 5)}
