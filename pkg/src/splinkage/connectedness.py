"""Decide whether the planar moduli space of a linkage is connected.

The recursion works per biconnected block.  A block is presented as parallel
terminal-joining paths plus a remainder K; if some path's connected-fibre
window misses the block's achievable distance range R, two placements
mirrored across the terminal line can never be joined and the space is
disconnected.  Otherwise the paths are replaced by a single four-bar gadget
with the same range whose fibres are connected everywhere, and the strictly
smaller linkage is analysed again.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .analysis import linkage_range, realisable
from .core import (
    Edge,
    Interval,
    InvalidLinkageError,
    Linkage,
    Status,
    UnrealisableLoopError,
    Verdict,
    contract_zero_edges,
    format_fraction,
    validate,
)
from .decompose import (
    ParallelSplit,
    PathSpec,
    biconnected_blocks,
    chain_count,
    find_parallel_split,
    leaf_edge_ids,
)
from .intervals import intersect, nabla, path_range


def build_q(a, b) -> PathSpec:
    """Four-bar gadget whose distance range and connected-fibre window are
    both exactly [a, b]: lengths ((a+b)/2, (b−a)/6, (b−a)/6, (b−a)/6).

    A zero-width target [a, a] degenerates to a single bar of length a, since
    the gadget's positive-length hypothesis would otherwise fail; one bar has
    a one-point moduli space and pins the terminal distance the same way.
    """
    a, b = Fraction(a), Fraction(b)
    if a < 0 or b < a:
        raise ValueError(f"invalid target interval [{a},{b}]")
    if a == b:
        return PathSpec((a,))
    stub = (b - a) / 6
    return PathSpec(((a + b) / 2, stub, stub, stub))


@dataclass(frozen=True)
class Decided:
    status: Status
    record: dict


@dataclass(frozen=True)
class Reduced:
    linkage: Linkage
    q_lengths: PathSpec
    record: dict


ReduceOutcome = Decided | Reduced


def _fresh_names(taken: set[str], prefix: str, n: int) -> list[str]:
    names = []
    i = 1
    while len(names) < n:
        name = f"{prefix}{i}"
        if name not in taken:
            names.append(name)
        i += 1
    return names


def _splice_gadget(split: ParallelSplit, block: Linkage, q: PathSpec) -> Linkage:
    """Replace the split's parallel paths by the gadget path, keeping K."""
    rest_ids = set()
    if split.rest is not None:
        rest_ids = set(leaf_edge_ids(split.rest))
    edges = [e for e in block.edges if e.id in rest_ids]
    taken_v = {e.u for e in edges} | {e.v for e in edges} | {split.source, split.sink}
    taken_e = {e.id for e in edges}
    joints = _fresh_names(taken_v, "q", q.k - 1)
    ids = _fresh_names(taken_e, "eq", q.k)
    stops = [split.source] + joints + [split.sink]
    for i, length in enumerate(q.lengths):
        edges.append(Edge(ids[i], stops[i], stops[i + 1], length))
    vertices = frozenset(taken_v | set(joints))
    return Linkage(vertices, tuple(edges))


def reduce_step(
    block: Linkage, terminals: tuple[str, str] | None = None
) -> ReduceOutcome:
    """One round of the recursion on a 2-connected realisable block.

    ``terminals`` forces the split pair; used to check that the verdict does
    not depend on the choice.
    """
    split = find_parallel_split(block, terminals)
    ranges = [path_range(p) for p in split.paths]
    r = ranges[0]
    for rng in ranges[1:]:
        r = intersect(r, rng)
    k_range = None
    if split.rest is not None:
        k_range = linkage_range(split.rest)
        r = intersect(r, k_range)
    if r.is_empty:
        raise InvalidLinkageError("reduce_step requires a realisable block")

    path_records = []
    all_meet = True
    for path, rng in zip(split.paths, ranges):
        rec = {
            "edges": list(path.edge_ids),
            "lengths": [format_fraction(l) for l in path.lengths],
            "range": str(rng),
        }
        if path.k >= 2:
            window = nabla(path)
            rec["nabla"] = str(window)
            rec["meets_r"] = window.meets(r)
            all_meet = all_meet and rec["meets_r"]
        else:
            # a single bar pins the distance; its fibre is a point and
            # cannot disconnect anything, so it carries no window test
            rec["nabla"] = None
            rec["meets_r"] = True
        path_records.append(rec)

    record = {
        "kind": "split",
        "terminals": [split.source, split.sink],
        "paths": path_records,
        "k_range": str(k_range) if k_range is not None else None,
        "r": str(r),
    }

    if not all_meet:
        record["action"] = "disconnected"
        return Decided(Status.DISCONNECTED, record)
    if split.rest is None:
        record["action"] = "connected"
        return Decided(Status.CONNECTED, record)

    a = max(rng.lo for rng in ranges)
    b = min(rng.hi for rng in ranges)
    q = build_q(a, b)
    reduced = _splice_gadget(split, block, q)
    # soundness: the gadget's range is the paths' intersection, so the
    # reduced block keeps the same achievable distance range
    q_range = path_range(q)
    assert intersect(q_range, k_range) == r, "reduction changed the distance range"
    record["action"] = "reduce"
    record["q_lengths"] = [format_fraction(l) for l in q.lengths]
    return Reduced(reduced, q, record)


def _decide_block(block: Linkage, trace: list[dict], label: str) -> Status:
    if len(block.edges) == 1:
        trace.append({"kind": "block", "block": label, "action": "bridge", "status": "connected"})
        return Status.CONNECTED
    current = block
    measure = chain_count(current)
    while True:
        outcome = reduce_step(current)
        record = dict(outcome.record)
        record["block"] = label
        trace.append(record)
        if isinstance(outcome, Decided):
            return outcome.status
        current = outcome.linkage
        next_measure = chain_count(current)
        assert next_measure < measure, "reduction must shrink the decomposition"
        measure = next_measure


def decide_connected(linkage: Linkage) -> Verdict:
    """Full pipeline: validate, contract zero edges, check realisability,
    then run the reduction on every biconnected block.

    The moduli space of a linkage with cut vertices is connected exactly when
    each block's is; bridges are trivially connected.
    """
    errors = validate(linkage)
    if errors:
        raise InvalidLinkageError("; ".join(errors))

    trace: list[dict] = []
    had_zero = any(e.length == 0 for e in linkage.edges)
    try:
        contracted = contract_zero_edges(linkage)
    except UnrealisableLoopError as exc:
        trace.append({"kind": "contract", "note": str(exc)})
        return Verdict(Status.EMPTY, trace)
    if had_zero:
        trace.append(
            {
                "kind": "contract",
                "note": "zero-length edges contracted; analysis assumes positive lengths",
            }
        )

    if not contracted.edges:
        trace.append({"kind": "verdict", "status": "connected", "note": "no edges"})
        return Verdict(Status.CONNECTED, trace)

    feasibility = realisable(contracted)
    trace.extend(feasibility.trace_steps())
    if not feasibility.realisable:
        trace.append({"kind": "verdict", "status": "empty"})
        return Verdict(Status.EMPTY, trace)

    status = Status.CONNECTED
    for index, block in enumerate(biconnected_blocks(contracted), start=1):
        block_status = _decide_block(block, trace, f"B{index}")
        if block_status is Status.DISCONNECTED:
            status = Status.DISCONNECTED
    trace.append({"kind": "verdict", "status": status.value})
    return Verdict(status, trace)
