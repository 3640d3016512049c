"""Ordered-graph toolkit: constellation patterns, peeling, and verified bounds."""

from constel.ordered import (
    OrderedGraph,
    TracedGraph,
    Embedding,
    contains_pattern,
    concatenate,
    is_one_sided,
    gen_halfgraph,
    longest_induced_path_oracle,
    validate_increasing_induced_path,
    slice_graph,
)
from constel.bigreal import BigReal, Inconclusive, precision
from constel.params import alpha_constant, default_params, rational_params
from constel.bounds import (
    BoundContext,
    GridRow,
    sweep_bounds,
    verify_bounds,
    verify_log_instances,
    verify_lowbdstretch,
    verify_mono,
)
from constel.constellation import (
    ConstellationWitness,
    OrientedStar,
    StarForest,
    build_topminor_pattern,
    build_tr_constellation,
    is_constellation,
    is_constellation_inductive,
    subdivision_certificate,
    verify_star_order,
)
from constel.peel import (
    PeelConfig,
    PropOutcome,
    ToyThresholds,
    peel,
    stretch,
    stretch_path,
    validate_outcome,
)
from constel.lowerbound import (
    ConstructionGraph,
    IntervalSystem,
    build_construction,
    build_intervals,
    check_star_order_by_depth,
    check_two_degenerate,
    comparability_report,
    ham_path,
    pattern_is_constellation,
    to_traced,
    validate_ham_path,
)

__all__ = [
    "OrderedGraph",
    "TracedGraph",
    "Embedding",
    "contains_pattern",
    "concatenate",
    "is_one_sided",
    "gen_halfgraph",
    "longest_induced_path_oracle",
    "validate_increasing_induced_path",
    "slice_graph",
    "BigReal",
    "Inconclusive",
    "precision",
    "alpha_constant",
    "default_params",
    "rational_params",
    "BoundContext",
    "GridRow",
    "sweep_bounds",
    "verify_bounds",
    "verify_log_instances",
    "verify_lowbdstretch",
    "verify_mono",
    "ConstellationWitness",
    "OrientedStar",
    "StarForest",
    "build_topminor_pattern",
    "build_tr_constellation",
    "is_constellation",
    "is_constellation_inductive",
    "subdivision_certificate",
    "verify_star_order",
    "PeelConfig",
    "PropOutcome",
    "ToyThresholds",
    "peel",
    "stretch",
    "stretch_path",
    "validate_outcome",
    "ConstructionGraph",
    "IntervalSystem",
    "build_construction",
    "build_intervals",
    "check_star_order_by_depth",
    "check_two_degenerate",
    "comparability_report",
    "ham_path",
    "pattern_is_constellation",
    "to_traced",
    "validate_ham_path",
]

__version__ = "0.1.0"
