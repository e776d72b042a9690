"""Fold the interval algebra over decomposition trees.

linkage_range evaluates the achievable terminal-distance interval of a tree;
realisable applies it blockwise to decide emptiness of the whole moduli
space; polygonal_sublinkage_check is the independent cross-check that tests
every simple cycle against the polygon criterion instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import EMPTY_INTERVAL, Interval, Linkage, LinkageError
from .decompose import (
    Leaf,
    Parallel,
    Series,
    SPTree,
    biconnected_blocks,
    build_sp_tree,
)
from .intervals import intersect, series_compose


class CycleBudgetExceededError(LinkageError):
    """Cycle enumeration grew past the configured budget."""


def linkage_range(tree: SPTree) -> Interval:
    """Achievable distances between the tree's terminals."""
    if isinstance(tree, Leaf):
        return Interval(tree.length, tree.length)
    if isinstance(tree, Series):
        return series_compose(linkage_range(tree.left), linkage_range(tree.right))
    result = linkage_range(tree.children[0])
    for child in tree.children[1:]:
        result = intersect(result, linkage_range(child))
    return result


def range_with_steps(tree: SPTree) -> tuple[Interval, list[str]]:
    """linkage_range plus one formatted line per internal node, post-order."""
    steps: list[str] = []

    def walk(node: SPTree) -> Interval:
        if isinstance(node, Leaf):
            return Interval(node.length, node.length)
        if isinstance(node, Series):
            left = walk(node.left)
            right = walk(node.right)
            result = series_compose(left, right)
            steps.append(f"{left}∘{right}={result}")
            return result
        ranges = [walk(c) for c in node.children]
        result = ranges[0]
        for r in ranges[1:]:
            result = intersect(result, r)
        steps.append("∩".join(str(r) for r in ranges) + f"={result}")
        return result

    return walk(tree), steps


@dataclass(frozen=True)
class BlockReport:
    edge_ids: tuple[str, ...]
    terminals: tuple[str, str]
    interval: Interval


@dataclass(frozen=True)
class RealisabilityResult:
    realisable: bool
    blocks: tuple[BlockReport, ...]

    def trace_steps(self) -> list[dict]:
        return [
            {
                "kind": "block-range",
                "edges": list(b.edge_ids),
                "terminals": list(b.terminals),
                "range": str(b.interval),
            }
            for b in self.blocks
        ]


def realisable(linkage: Linkage) -> RealisabilityResult:
    """Decide whether any plane placement exists, block by block.

    A linkage with cut vertices is realisable exactly when each biconnected
    block is: blocks only share single vertices, so placements glue freely.
    """
    reports = []
    ok = True
    for block in biconnected_blocks(linkage):
        if len(block.edges) == 1:
            e = block.edges[0]
            reports.append(
                BlockReport((e.id,), (e.u, e.v), Interval(e.length, e.length))
            )
            continue
        tree = build_sp_tree(block)
        rng = linkage_range(tree)
        reports.append(
            BlockReport(
                tuple(e.id for e in block.edges), (tree.source, tree.sink), rng
            )
        )
        if rng.is_empty:
            ok = False
    return RealisabilityResult(ok, tuple(reports))


# ---------------------------------------------------------------------------
# Polygonal-sublinkage cross-check
# ---------------------------------------------------------------------------


def enumerate_polygons(linkage: Linkage, budget: int = 10000):
    """Yield the edge list of every polygonal subgraph (simple cycle).

    Two parallel edges form a 2-gon.  Vertex cycles are enumerated once each
    (smallest vertex first, direction fixed), then expanded over the choice
    of parallel edge at every hop.  Intended for small instances; raises
    :class:`CycleBudgetExceededError` past ``budget`` polygons.
    """
    count = 0

    by_pair: dict[tuple[str, str], list] = {}
    for e in linkage.edges:
        by_pair.setdefault(tuple(sorted((e.u, e.v))), []).append(e)
    for pair, es in sorted(by_pair.items()):
        es = sorted(es, key=lambda e: e.id)
        for a, b in itertools.combinations(es, 2):
            count += 1
            if count > budget:
                raise CycleBudgetExceededError("instance too large")
            yield [a, b]

    neighbours: dict[str, dict[str, list]] = {v: {} for v in linkage.vertices}
    for (u, v), es in by_pair.items():
        neighbours[u][v] = es
        neighbours[v][u] = es

    def extend(start: str, path: list[str], visited: set[str]):
        nonlocal count
        cur = path[-1]
        for nxt in sorted(neighbours[cur]):
            if nxt == start and len(path) >= 3:
                # canonical direction: second vertex smaller than the last
                if path[1] < path[-1]:
                    cycle = path + [start]
                    choices = [
                        sorted(neighbours[cycle[i]][cycle[i + 1]], key=lambda e: e.id)
                        for i in range(len(cycle) - 1)
                    ]
                    for combo in itertools.product(*choices):
                        count += 1
                        if count > budget:
                            raise CycleBudgetExceededError("instance too large")
                        yield list(combo)
            elif nxt > start and nxt not in visited:
                yield from extend(start, path + [nxt], visited | {nxt})

    for start in sorted(linkage.vertices):
        yield from extend(start, [start], {start})


@dataclass(frozen=True)
class PolygonCheckResult:
    all_realisable: bool
    failing_cycle: tuple[str, ...] | None
    cycles_checked: int


def polygonal_sublinkage_check(
    linkage: Linkage, budget: int = 10000
) -> PolygonCheckResult:
    """Test every polygonal subgraph for realisability.

    For series-parallel linkages this agrees exactly with ``realisable``: a
    cycle is realisable iff twice its longest edge is at most its perimeter,
    and some cycle fails exactly when the whole linkage does.
    """
    checked = 0
    for cycle in enumerate_polygons(linkage, budget):
        checked += 1
        lengths = [e.length for e in cycle]
        if 2 * max(lengths) > sum(lengths):
            return PolygonCheckResult(False, tuple(e.id for e in cycle), checked)
    return PolygonCheckResult(True, None, checked)
