"""Emptiness and connectedness of planar moduli spaces of series-parallel
linkages: exact interval algebra, a recursive connectedness decision, a
coordinate synthesizer, and a brute-force numerical oracle."""

from .analysis import (
    PolygonCheckResult,
    RealisabilityResult,
    linkage_range,
    polygonal_sublinkage_check,
    range_with_steps,
    realisable,
)
from .connectedness import Decided, Reduced, build_q, decide_connected, reduce_step
from .core import (
    EMPTY_INTERVAL,
    Edge,
    Interval,
    IntervalSet,
    Linkage,
    LinkageError,
    Realisation,
    Status,
    Verdict,
    contract_zero_edges,
    linkage_to_json,
    parse_linkage,
    validate,
)
from .decompose import (
    Leaf,
    Parallel,
    ParallelSplit,
    PathSpec,
    Series,
    SPTree,
    biconnected_blocks,
    build_sp_tree,
    find_parallel_split,
    tree_to_dot,
)
from .intervals import intersect, nabla, path_range, polygon_status, series_compose
from .oracle import FiberProbe, SampleCloud, fiber_components, sample_moduli
from .realize import synthesize, verify

__all__ = [
    "EMPTY_INTERVAL",
    "Decided",
    "Edge",
    "FiberProbe",
    "Interval",
    "IntervalSet",
    "Leaf",
    "Linkage",
    "LinkageError",
    "Parallel",
    "ParallelSplit",
    "PathSpec",
    "PolygonCheckResult",
    "RealisabilityResult",
    "Realisation",
    "Reduced",
    "SPTree",
    "SampleCloud",
    "Series",
    "Status",
    "Verdict",
    "biconnected_blocks",
    "build_q",
    "build_sp_tree",
    "contract_zero_edges",
    "decide_connected",
    "fiber_components",
    "find_parallel_split",
    "intersect",
    "linkage_range",
    "linkage_to_json",
    "nabla",
    "parse_linkage",
    "path_range",
    "polygon_status",
    "polygonal_sublinkage_check",
    "range_with_steps",
    "realisable",
    "reduce_step",
    "sample_moduli",
    "series_compose",
    "synthesize",
    "tree_to_dot",
    "validate",
    "verify",
]
