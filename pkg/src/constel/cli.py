"""Command-line front end: generators, recognition, search, verification.

One subcommand per job, plain-text or JSON output only, deterministic for
fixed inputs.  Exit codes: 0 when the requested check or search succeeds,
1 when a property fails to hold (pattern absent, recognition negative,
verification failure), 2 for usage errors and malformed files.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from contextlib import nullcontext

import numpy as np

from .bigreal import Inconclusive, precision
from .bounds import sweep_bounds
from .constellation import (
    ConstellationWitness,
    build_topminor_pattern,
    build_tr_constellation,
    is_constellation,
)
from .lowerbound import (
    MAX_LEVEL,
    build_construction,
    check_star_order_by_depth,
    check_two_degenerate,
    comparability_report,
    format_intervals,
    ham_path,
    pattern_is_constellation,
    validate_ham_path,
)
from .ordered import (
    OrderedGraph,
    TracedGraph,
    contains_pattern,
    gen_halfgraph,
    longest_induced_path_oracle,
    read_ordered,
    read_traced,
    write_edge_list,
)
from .params import default_params
from .peel import PeelConfig, ToyThresholds, outcome_json, peel, validate_outcome

PRECISION_ENV = "CONSTEL_PRECISION"


def _open_out(path):
    if path is None or path == "-":
        return nullcontext(sys.stdout)
    return open(path, "w")


def _open_in(path):
    if path is None or path == "-":
        return nullcontext(sys.stdin)
    return open(path)


def _witness_json(w: ConstellationWitness) -> dict:
    return {
        "stars": [
            {"center": s.center, "leaves": list(s.leaves), "orientation": s.orientation}
            for s in w.forest.stars
        ],
        "order": list(w.star_order),
    }


# -- gen-fixture --------------------------------------------------------------


def _random_traced(n: int, extra: float, seed: int) -> TracedGraph:
    """The full path plus a seeded sprinkling of longer edges."""
    rng = random.Random(seed)
    edges = [(i, i + 1) for i in range(1, n)]
    for u in range(1, n - 1):
        for v in range(u + 2, n + 1):
            if rng.random() < extra:
                edges.append((u, v))
    return TracedGraph(n, edges)


def _cmd_gen_fixture(args) -> int:
    if args.kind == "halfgraph":
        G = gen_halfgraph(args.n)
    elif args.kind == "topminor":
        G = build_topminor_pattern(args.t)
    elif args.kind == "constellation":
        G = build_tr_constellation(args.t, args.r, shape=args.shape)
    else:
        G = _random_traced(args.n, args.extra, args.seed)
    with _open_out(args.out) as fh:
        write_edge_list(G, fh)
    return 0


# -- recognize / find-pattern -------------------------------------------------


def _cmd_recognize(args) -> int:
    with _open_in(args.pattern) as fh:
        H = read_ordered(fh)
    w = is_constellation(H)
    if w is None:
        print("constellation: no")
        return 1
    print("constellation: yes")
    print(json.dumps(_witness_json(w)))
    return 0


def _cmd_find_pattern(args) -> int:
    with _open_in(args.host) as fh:
        host = read_traced(fh).pattern_graph() if args.in_pattern else read_ordered(fh)
    with _open_in(args.pattern) as fh:
        pattern = read_ordered(fh)
    emb = contains_pattern(host, pattern, min_gap=args.min_gap)
    if emb is None:
        print("embedding: none")
        return 1
    print("embedding:", " ".join(str(p) for p in emb.positions))
    return 0


# -- oracle-lip ---------------------------------------------------------------


def _cmd_oracle_lip(args) -> int:
    with _open_in(args.graph) as fh:
        G = read_ordered(fh)
    result = longest_induced_path_oracle(G, cap=args.cap)
    print(result.length)
    if args.witness:
        print("path:", " ".join(str(v) for v in result.path))
        print("capped:", "true" if result.capped else "false")
    elif result.capped:
        print("note: search truncated at the cap", file=sys.stderr)
    return 0


# -- peel ---------------------------------------------------------------------


def _toy_thresholds() -> ToyThresholds:
    """Small thresholds that let the recursion act at desk scale."""
    import math

    def f(n, t, p):
        return max(0.0, math.log2(max(n, 2)) / t - p / 2)

    return ToyThresholds(f=f, h=f, g=f)


def _cmd_peel(args) -> int:
    with _open_in(args.graph) as fh:
        G = read_traced(fh)
    with _open_in(args.pattern) as fh:
        H = read_ordered(fh)
    if args.toy:
        cfg = PeelConfig(r=args.r, quantitative=False, toy=_toy_thresholds())
    else:
        cfg = PeelConfig(r=args.r, params=default_params())
    outcome = peel(G, H, cfg, p=args.p)
    valid = validate_outcome(G, H, outcome, None)
    data = outcome_json(outcome)
    data["valid"] = valid
    print(json.dumps(data))
    return 0 if valid else 1


# -- gen-lowerbound / verify-lowerbound --------------------------------------


def _write_stream(fh, n: int, pairs: np.ndarray) -> None:
    """Edge-list format from a (m, 2) array, sorted, without building sets."""
    order = np.lexsort((pairs[:, 1], pairs[:, 0]))
    fh.write(f"{n} {len(pairs)}\n")
    for u, v in pairs[order]:
        fh.write(f"{u} {v}\n")


def _cmd_gen_lowerbound(args) -> int:
    C = build_construction(args.ell)
    e = C.all_edges()
    if args.traced:
        p = ham_path(C)
        pos = np.empty(C.n, dtype=np.int64)
        pos[p] = np.arange(1, C.n + 1)
        a = pos[e[:, 0]]
        b = pos[e[:, 1]]
        pairs = np.stack([np.minimum(a, b), np.maximum(a, b)], axis=1)
    else:
        pairs = e + 1
    with _open_out(args.out) as fh:
        _write_stream(fh, C.n, pairs)
    return 0


def _cmd_verify_lowerbound(args) -> int:
    level = args.ell
    failures = 0

    def report(label: str, problem, extra: str = "") -> None:
        nonlocal failures
        if problem is None:
            suffix = f" ({extra})" if extra else ""
            print(f"{label}: ok{suffix}")
        else:
            failures += 1
            print(f"{label}: FAIL ({problem})")

    C = build_construction(level)
    print(f"level {level}")
    print(f"vertices {C.n}")
    print(
        f"edges {C.n_edges} (gadget {len(C.gadget_edges)}, "
        f"tree {len(C.tree_edges)}, rib {len(C.rib_edges)})"
    )
    for line in format_intervals(C.system).splitlines():
        print("  " + line)

    try:
        C.system.validate_nested()
        report("intervals nested", None)
    except ValueError as exc:
        report("intervals nested", str(exc))

    counts = np.bincount(C.node_of(np.arange(C.n)), minlength=C.n_nodes + 1)[1:]
    report(
        "sixteen vertices per node",
        None if (counts == 16).all() else "a node's preimage is not 16 vertices",
    )
    report("edge comparability", comparability_report(C))

    try:
        p = ham_path(C)
        report("hamiltonian walk", validate_ham_path(C, p))
    except RuntimeError as exc:
        report("hamiltonian walk", str(exc))
        p = None

    order = check_two_degenerate(C)
    report(
        "two-degenerate",
        None if order is not None else "a subgraph of minimum degree 3 remains",
    )

    if p is not None:
        if level <= 2:
            try:
                w = pattern_is_constellation(C, p)
                report("leftover stars", None, f"{len(w.forest.stars)} stars")
            except RuntimeError as exc:
                report("leftover stars", str(exc))
        else:
            try:
                check_star_order_by_depth(C, p)
                report("leftover stars (depth order)", None)
            except RuntimeError as exc:
                report("leftover stars (depth order)", str(exc))

    print("all checks passed" if failures == 0 else f"{failures} check(s) failed")
    return 0 if failures == 0 else 1


# -- check-bounds -------------------------------------------------------------


def _cmd_check_bounds(args) -> int:
    if args.grid != "default":
        raise ValueError(f"unknown grid {args.grid!r}")
    r_values = tuple(int(x) for x in args.r.split(","))
    params = default_params(max(100, args.t_max + 2))
    rows = sweep_bounds(params, r_values=r_values, t_max=args.t_max)
    bad = 0
    with _open_out(args.out) as fh:
        fh.write("r\tt\tp\tell_factor\tell_log2\tinequality\tholds\tmargin_log2\n")
        for row in rows:
            if not row.holds:
                bad += 1
            fh.write(
                f"{row.r}\t{row.t}\t{row.p_label}\t{row.ell_factor}\t"
                f"{row.ell_log2:.6f}\t{row.inequality}\t"
                f"{'true' if row.holds else 'false'}\t{row.margin_log2:.6f}\n"
            )
    if bad:
        print(f"{bad} row(s) failed", file=sys.stderr)
        return 1
    return 0


# -- parser -------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="constel",
        description="Ordered-graph patterns, peeling, and the gadget-tree construction.",
    )
    parser.add_argument(
        "--precision",
        type=int,
        default=None,
        help=f"working precision in bits (default from ${PRECISION_ENV})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-fixture", help="write a fixture graph as an edge list")
    gsub = g.add_subparsers(dest="kind", required=True)
    p = gsub.add_parser("halfgraph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", default=None)
    p = gsub.add_parser("topminor")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--out", default=None)
    p = gsub.add_parser("constellation")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--shape", choices=("sequential", "nested"), default="sequential")
    p.add_argument("--out", default=None)
    p = gsub.add_parser("random-traced")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--extra", type=float, default=0.08)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    g.set_defaults(func=_cmd_gen_fixture)

    p = sub.add_parser("recognize", help="decide whether a pattern is a constellation")
    p.add_argument("--pattern", required=True)
    p.set_defaults(func=_cmd_recognize)

    p = sub.add_parser("find-pattern", help="order-respecting pattern embedding search")
    p.add_argument("--host", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--min-gap", type=int, default=1)
    p.add_argument(
        "--in-pattern",
        action="store_true",
        help="parse the host as traced and search its non-path edges only",
    )
    p.set_defaults(func=_cmd_find_pattern)

    p = sub.add_parser("oracle-lip", help="exhaustive longest induced path")
    p.add_argument("graph", nargs="?", default=None, help="edge-list file (default stdin)")
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=_cmd_oracle_lip)

    p = sub.add_parser("peel", help="run the peeling recursion, print a certificate")
    p.add_argument("--graph", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--toy", action="store_true")
    p.add_argument("--p", type=int, default=0)
    p.set_defaults(func=_cmd_peel)

    p = sub.add_parser("gen-lowerbound", help="write the gadget-tree graph")
    p.add_argument("--ell", type=int, required=True, metavar=f"L (1..{MAX_LEVEL})")
    p.add_argument("--out", required=True)
    p.add_argument("--traced", action="store_true", help="relabel along the walk")
    p.set_defaults(func=_cmd_gen_lowerbound)

    p = sub.add_parser("verify-lowerbound", help="run every construction check")
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(func=_cmd_verify_lowerbound)

    p = sub.add_parser("check-bounds", help="TSV report over the inequality grid")
    p.add_argument("--r", default="1,2,3,5", help="comma-separated arities")
    p.add_argument("--t-max", type=int, default=20)
    p.add_argument("--grid", default="default")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_check_bounds)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    bits = args.precision
    if bits is None and os.environ.get(PRECISION_ENV):
        bits = int(os.environ[PRECISION_ENV])
    ctx = precision(bits) if bits else nullcontext()
    try:
        with ctx:
            return args.func(args)
    except Inconclusive as exc:
        print(f"inconclusive: {exc} (raise --precision)", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
