"""Series-parallel structure: recognition, decomposition trees, blocks.

Recognition works by exhaustive reduction: a multigraph with protected
terminals s, t is two-terminal series-parallel exactly when merging parallel
edges and contracting non-terminal degree-2 vertices shrinks it to a single
s-t edge.  Each reduction records how the surviving edge was assembled, so a
successful run reconstructs the full decomposition tree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    DisconnectedGraphError,
    Edge,
    InvalidLinkageError,
    InvalidTerminalsError,
    Linkage,
    NotSeriesParallelError,
)

# ---------------------------------------------------------------------------
# Decomposition trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SPTree:
    """Base node: every node knows its source and sink vertex."""

    source: str
    sink: str


@dataclass(frozen=True)
class Leaf(SPTree):
    edge_id: str
    length: Fraction


@dataclass(frozen=True)
class Series(SPTree):
    """Series composition.

    Convention: the result is traversed source-to-sink through ``right``
    first and ``left`` second, i.e. source == right.source, sink == left.sink
    and right.sink == left.source is the join vertex.
    """

    left: SPTree
    right: SPTree

    def __post_init__(self):
        if self.source != self.right.source or self.sink != self.left.sink:
            raise ValueError("series node terminals disagree with children")
        if self.right.sink != self.left.source:
            raise ValueError("series children do not share a join vertex")

    @property
    def join(self) -> str:
        return self.right.sink


@dataclass(frozen=True)
class Parallel(SPTree):
    children: tuple[SPTree, ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("parallel node needs at least two children")
        for c in self.children:
            if (c.source, c.sink) != (self.source, self.sink):
                raise ValueError("parallel child terminals disagree")


def chain(first: SPTree, second: SPTree) -> Series:
    """Series composition in traversal order: first.sink must equal second.source."""
    if first.sink != second.source:
        raise ValueError("chain join mismatch")
    return Series(source=first.source, sink=second.sink, left=second, right=first)


def flip(tree: SPTree) -> SPTree:
    """The same decomposition traversed sink-to-source."""
    if isinstance(tree, Leaf):
        return Leaf(tree.sink, tree.source, tree.edge_id, tree.length)
    if isinstance(tree, Series):
        return chain(flip(tree.left), flip(tree.right))
    if isinstance(tree, Parallel):
        return Parallel(tree.sink, tree.source, tuple(flip(c) for c in tree.children))
    raise TypeError(type(tree))


def leaves(tree: SPTree) -> list[Leaf]:
    if isinstance(tree, Leaf):
        return [tree]
    if isinstance(tree, Series):
        return leaves(tree.right) + leaves(tree.left)
    return [leaf for c in tree.children for leaf in leaves(c)]


def leaf_edge_ids(tree: SPTree) -> list[str]:
    return [leaf.edge_id for leaf in leaves(tree)]


def _min_leaf_id(tree: SPTree) -> str:
    return min(leaf_edge_ids(tree))


def make_parallel(children: list[SPTree]) -> SPTree:
    """Merge children into one parallel node: flatten nested parallels that
    share the same terminals and order children by smallest leaf edge id."""
    if len(children) == 1:
        return children[0]
    source, sink = children[0].source, children[0].sink
    flat: list[SPTree] = []
    for c in children:
        if isinstance(c, Parallel) and (c.source, c.sink) == (source, sink):
            flat.extend(c.children)
        else:
            flat.append(c)
    flat.sort(key=_min_leaf_id)
    return Parallel(source, sink, tuple(flat))


def tree_to_dot(tree: SPTree) -> str:
    """Graphviz rendering of the decomposition tree."""
    lines = ["digraph sptree {", "  node [shape=box];"]
    counter = itertools.count()

    def walk(node: SPTree) -> str:
        name = f"n{next(counter)}"
        if isinstance(node, Leaf):
            label = f"Leaf {node.edge_id} ({node.length}) [{node.source}→{node.sink}]"
            lines.append(f'  {name} [label="{label}", shape=ellipse];')
        elif isinstance(node, Series):
            lines.append(f'  {name} [label="Series [{node.source}→{node.sink}]"];')
            for child in (node.right, node.left):
                lines.append(f"  {name} -> {walk(child)};")
        else:
            lines.append(f'  {name} [label="Parallel [{node.source}→{node.sink}]"];')
            for child in node.children:
                lines.append(f"  {name} -> {walk(child)};")
        return name

    walk(tree)
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Connectivity and blocks
# ---------------------------------------------------------------------------


def is_connected(linkage: Linkage) -> bool:
    if not linkage.vertices:
        return True
    adj = linkage.adjacency()
    start = next(iter(linkage.vertices))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for e in adj[v]:
            w = e.other(v)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(linkage.vertices)


def biconnected_blocks(linkage: Linkage) -> list[Linkage]:
    """Split a connected multigraph into its biconnected blocks.

    Every edge lands in exactly one block; a bridge is its own single-edge
    block.  Blocks are returned ordered by their smallest edge id.
    """
    if not is_connected(linkage):
        raise DisconnectedGraphError("disconnected graph")
    if not linkage.edges:
        return []

    adj = linkage.adjacency()
    disc: dict[str, int] = {}
    low: dict[str, int] = {}
    edge_stack: list[Edge] = []
    blocks: list[list[Edge]] = []
    counter = itertools.count()

    # iterative Hopcroft-Tarjan; parallel edges are distinct stack entries and
    # only the tree edge itself is skipped on the way back up
    root = min(linkage.vertices)
    disc[root] = low[root] = next(counter)
    work: list[tuple[str, str | None, int]] = [(root, None, 0)]
    while work:
        v, via_edge, idx = work.pop()
        edges_v = adj[v]
        if idx < len(edges_v):
            work.append((v, via_edge, idx + 1))
            e = edges_v[idx]
            if e.id == via_edge:
                continue
            w = e.other(v)
            if w not in disc:
                disc[w] = low[w] = next(counter)
                edge_stack.append(e)
                work.append((w, e.id, 0))
            elif disc[w] < disc[v]:
                edge_stack.append(e)
                low[v] = min(low[v], disc[w])
        else:
            if via_edge is None:
                continue
            # returning from v along via_edge to its parent u
            u, _, _ = work[-1]
            low[u] = min(low[u], low[v])
            if low[v] >= disc[u]:
                block = []
                while True:
                    e = edge_stack.pop()
                    block.append(e)
                    if e.id == via_edge:
                        break
                blocks.append(block)

    blocks.sort(key=lambda es: min(e.id for e in es))
    out = []
    for es in blocks:
        es_sorted = tuple(sorted(es, key=lambda e: e.id))
        vs = frozenset({e.u for e in es_sorted} | {e.v for e in es_sorted})
        out.append(Linkage(vs, es_sorted))
    return out


# ---------------------------------------------------------------------------
# Recognition by reduction
# ---------------------------------------------------------------------------


def _reduce_to_tree(linkage: Linkage, s: str, t: str) -> SPTree | None:
    """Run series/parallel reductions with protected terminals.

    Returns the decomposition tree if the graph collapses to one s-t edge,
    otherwise None.  Scanning is in sorted order so the result is stable.
    """
    # working state: edge id -> (u, v, tree with source u, sink v)
    work: dict[str, tuple[str, str, SPTree]] = {}
    incident: dict[str, set[str]] = {v: set() for v in linkage.vertices}
    for e in linkage.edges:
        work[e.id] = (e.u, e.v, Leaf(e.u, e.v, e.id, e.length))
        incident[e.u].add(e.id)
        incident[e.v].add(e.id)

    def oriented(eid: str, u: str, v: str) -> SPTree:
        eu, ev, tree = work[eid]
        if (eu, ev) == (u, v):
            return tree
        return flip(tree)

    def remove(eid: str):
        eu, ev, _ = work.pop(eid)
        incident[eu].discard(eid)
        incident[ev].discard(eid)

    def add(u: str, v: str, tree: SPTree) -> str:
        eid = min(leaf_edge_ids(tree))
        work[eid] = (u, v, tree)
        incident[u].add(eid)
        incident[v].add(eid)
        return eid

    changed = True
    while changed and len(work) > 1:
        changed = False
        # parallel reductions first so series contraction never forms a loop
        groups: dict[frozenset, list[str]] = {}
        for eid, (u, v, _) in work.items():
            groups.setdefault(frozenset((u, v)), []).append(eid)
        for key, eids in sorted(groups.items(), key=lambda kv: min(kv[1])):
            if len(eids) < 2:
                continue
            u, v = sorted(key)
            trees = [oriented(eid, u, v) for eid in sorted(eids)]
            for eid in eids:
                remove(eid)
            add(u, v, make_parallel(trees))
            changed = True
        for v in sorted(incident):
            if v in (s, t) or len(incident[v]) != 2:
                continue
            e1, e2 = sorted(incident[v])
            x = work[e1][0] if work[e1][1] == v else work[e1][1]
            y = work[e2][0] if work[e2][1] == v else work[e2][1]
            if x == y:
                continue  # parallel pair through v; next pass merges it
            combined = chain(oriented(e1, x, v), oriented(e2, v, y))
            remove(e1)
            remove(e2)
            del incident[v]
            add(x, y, combined)
            changed = True

    if len(work) != 1:
        return None
    (u, v, tree) = next(iter(work.values()))
    if {u, v} != {s, t}:
        return None
    return tree if (u, v) == (s, t) else flip(tree)


def degree_two_chains(linkage: Linkage) -> list[tuple[str, str, list[Edge]]]:
    """Maximal paths whose interior vertices have degree exactly 2.

    Returns (endpoint, endpoint, edges-in-path-order) triples.  On a graph
    with no vertex of degree >= 3 (a cycle or doubled edge) there is no
    canonical chain, and the list is empty.
    """
    deg = linkage.degree()
    adj = linkage.adjacency()
    anchors = sorted(v for v, d in deg.items() if d != 2)
    chains = []
    used: set[str] = set()
    for a in anchors:
        for e in sorted(adj[a], key=lambda e: e.id):
            if e.id in used:
                continue
            path = [e]
            used.add(e.id)
            prev, cur = a, e.other(a)
            while cur not in anchors:
                nxt = next(x for x in adj[cur] if x.id != path[-1].id)
                path.append(nxt)
                used.add(nxt.id)
                prev, cur = cur, nxt.other(cur)
            chains.append((a, cur, path))
    # each chain was discovered from both of its anchors; dedupe by edge set
    seen: set[frozenset] = set()
    unique = []
    for a, b, path in chains:
        key = frozenset(e.id for e in path)
        if key in seen:
            continue
        seen.add(key)
        unique.append((a, b, path))
    return unique


def build_sp_tree(
    linkage: Linkage, terminals: tuple[str, str] | None = None
) -> SPTree:
    """Decomposition tree of a series-parallel linkage.

    With explicit terminals, the tree is rooted there or the call fails with
    :class:`InvalidTerminalsError` (graph series-parallel elsewhere) or
    :class:`NotSeriesParallelError`.  Without terminals, candidate pairs are
    tried in a fixed order (chain endpoints first, then all remaining pairs,
    lexicographically) and the first success wins.
    """
    if not linkage.edges:
        raise InvalidLinkageError("linkage has no edges to decompose")
    if not is_connected(linkage):
        raise DisconnectedGraphError("disconnected graph")

    if terminals is not None:
        s, t = terminals
        if s == t or s not in linkage.vertices or t not in linkage.vertices:
            raise InvalidTerminalsError(f"bad terminal pair ({s}, {t})")
        tree = _reduce_to_tree(linkage, s, t)
        if tree is not None:
            return tree
        for pair in _candidate_pairs(linkage):
            if _reduce_to_tree(linkage, *pair) is not None:
                raise InvalidTerminalsError(
                    f"series-parallel, but not with terminals ({s}, {t})"
                )
        raise NotSeriesParallelError("not series-parallel")

    for s, t in _candidate_pairs(linkage):
        tree = _reduce_to_tree(linkage, s, t)
        if tree is not None:
            return tree
    raise NotSeriesParallelError("not series-parallel")


def _candidate_pairs(linkage: Linkage):
    first = sorted({tuple(sorted((a, b))) for a, b, _ in degree_two_chains(linkage)})
    rest = sorted(
        pair
        for pair in itertools.combinations(sorted(linkage.vertices), 2)
        if pair not in set(first)
    )
    return first + rest


def is_series_parallel(linkage: Linkage) -> bool:
    if not linkage.edges or not is_connected(linkage):
        return False
    return any(_reduce_to_tree(linkage, s, t) is not None for s, t in _candidate_pairs(linkage))


# ---------------------------------------------------------------------------
# The parallel split of a block
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PathSpec:
    """Edge lengths along a path, in path order."""

    lengths: tuple[Fraction, ...]
    edge_ids: tuple[str, ...] = ()

    def __post_init__(self):
        lengths = tuple(Fraction(l) for l in self.lengths)
        if not lengths:
            raise ValueError("empty path")
        if any(l <= 0 for l in lengths):
            raise ValueError("path lengths must be positive")
        object.__setattr__(self, "lengths", lengths)

    @property
    def k(self) -> int:
        return len(self.lengths)

    @property
    def total(self) -> Fraction:
        return sum(self.lengths, Fraction(0))


@dataclass(frozen=True)
class ParallelSplit:
    """A block presented as >= 2 terminal-joining paths plus a remainder.

    ``paths`` are the u-v paths whose interior vertices have degree 2 in the
    block; ``rest`` is the decomposition tree over all remaining edges with
    the same terminals, or None when the paths exhaust the block.
    """

    source: str
    sink: str
    paths: tuple[PathSpec, ...]
    rest: SPTree | None


def _cycle_order(linkage: Linkage) -> list[Edge]:
    """Edges of an all-degree-2 block in traversal order around the cycle."""
    adj = linkage.adjacency()
    start = min(linkage.vertices)
    first = min(adj[start], key=lambda e: e.id)
    order = [first]
    cur = first.other(start)
    while cur != start:
        nxt = next(e for e in adj[cur] if e.id != order[-1].id)
        order.append(nxt)
        cur = nxt.other(cur)
    if len(order) != len(linkage.edges):  # doubled edge: both found above
        order = sorted(linkage.edges, key=lambda e: e.id)
    return order


def _path_spec(edges: list[Edge], start: str) -> PathSpec:
    lengths = []
    ids = []
    cur = start
    for e in edges:
        lengths.append(e.length)
        ids.append(e.id)
        cur = e.other(cur)
    return PathSpec(tuple(lengths), tuple(ids))


def find_parallel_split(
    block: Linkage, terminals: tuple[str, str] | None = None
) -> ParallelSplit:
    """Present a 2-connected series-parallel block as parallel paths plus rest.

    Among terminal pairs joined by >= 2 interior-degree-2 paths, the pick
    maximises the path count, then the number of paths with >= 2 edges (those
    carry a fibre-connectivity test), then takes the lexicographically
    greatest pair.  ``terminals`` overrides the choice, for split-independence
    checks.
    """
    if len(block.edges) < 2:
        raise ValueError("split needs a block with more than one edge")
    if any(e.length <= 0 for e in block.edges):
        raise ValueError("split requires positive edge lengths")

    deg = block.degree()
    candidates: dict[tuple[str, str], list[list[Edge]]] = {}

    if all(d == 2 for d in deg.values()):
        # cycle (or doubled edge): every vertex pair splits it into two arcs
        order = _cycle_order(block)
        verts = []
        cur = min(block.vertices)
        for e in order:
            verts.append(cur)
            cur = e.other(cur)
        m = len(order)
        for i in range(m):
            for j in range(i + 1, m):
                arc1 = order[i:j]  # verts[i] -> verts[j]
                arc2 = order[j:] + order[:i]  # verts[j] -> verts[i]
                pair = tuple(sorted((verts[i], verts[j])))
                if pair[0] == verts[i]:
                    candidates[pair] = [arc1, list(reversed(arc2))]
                else:
                    candidates[pair] = [arc2, list(reversed(arc1))]
    else:
        for a, b, path in degree_two_chains(block):
            if a == b:
                raise NotSeriesParallelError("chain loops back; block is not 2-connected")
            pair = tuple(sorted((a, b)))
            edges = path if a == pair[0] else list(reversed(path))
            candidates.setdefault(pair, []).append(edges)
        candidates = {p: paths for p, paths in candidates.items() if len(paths) >= 2}
        if not candidates:
            raise NotSeriesParallelError(
                "no terminal pair admits two parallel paths; not series-parallel"
            )

    if terminals is not None:
        pair = tuple(sorted(terminals))
        if pair not in candidates:
            raise InvalidTerminalsError(f"no parallel split at {pair}")
    else:
        pair = max(
            candidates,
            key=lambda p: (
                len(candidates[p]),
                sum(1 for path in candidates[p] if len(path) >= 2),
                p,
            ),
        )

    u, v = pair
    paths = sorted(
        (_path_spec(edges, u) for edges in candidates[pair]),
        key=lambda p: min(p.edge_ids),
    )
    used = {eid for p in paths for eid in p.edge_ids}
    rest_ids = [e.id for e in block.edges if e.id not in used]
    rest = None
    if rest_ids:
        rest = build_sp_tree(block.sub_linkage(rest_ids, (u, v)), (u, v))
    return ParallelSplit(u, v, tuple(paths), rest)


def as_path_spec(linkage: Linkage) -> PathSpec:
    """Interpret a path-graph linkage as a PathSpec, endpoint to endpoint."""
    deg = linkage.degree()
    ends = sorted(v for v, d in deg.items() if d == 1)
    if len(ends) != 2 or any(d > 2 for d in deg.values()) or not is_connected(linkage):
        raise InvalidLinkageError("not a path linkage")
    adj = linkage.adjacency()
    cur = ends[0]
    edges = []
    prev_id = None
    while cur != ends[1]:
        e = next(x for x in adj[cur] if x.id != prev_id)
        edges.append(e)
        prev_id = e.id
        cur = e.other(cur)
    return _path_spec(edges, ends[0])


def chain_count(linkage: Linkage) -> int:
    """Number of maximal degree-2 chains; the termination measure for the
    reduction recursion.  An all-degree-2 block counts as a single chain."""
    deg = linkage.degree()
    if linkage.edges and all(d == 2 for d in deg.values()):
        return 1
    return len(degree_two_chains(linkage))
