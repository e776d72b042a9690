"""Builders and random generators shared across the test modules."""

from __future__ import annotations

from fractions import Fraction
from random import Random

from splinkage import Linkage, build_sp_tree, linkage_range
from splinkage.decompose import SPTree


def linkage_of(edge_rows, terminals=None) -> Linkage:
    return Linkage.build(edge_rows, terminals=terminals)


def cycle_linkage(lengths, prefix="c") -> Linkage:
    """Polygon linkage with the given lengths in cycle order."""
    n = len(lengths)
    rows = [
        (f"{prefix}{i:02d}", f"v{i:02d}", f"v{(i + 1) % n:02d}", lengths[i])
        for i in range(n)
    ]
    return Linkage.build(rows)


def path_linkage(lengths, prefix="p") -> Linkage:
    rows = [
        (f"{prefix}{i:02d}", f"v{i:02d}", f"v{i + 1:02d}", l)
        for i, l in enumerate(lengths)
    ]
    return Linkage.build(rows, terminals=(f"v00", f"v{len(lengths):02d}"))


def theta_linkage(*branch_lengths, prefix="t") -> Linkage:
    """Several vertex-disjoint paths between the same two terminals."""
    rows = []
    for b, lengths in enumerate(branch_lengths):
        stops = ["s"] + [f"b{b}x{i}" for i in range(len(lengths) - 1)] + ["t"]
        for i, l in enumerate(lengths):
            rows.append((f"{prefix}{b}e{i}", stops[i], stops[i + 1], l))
    return Linkage.build(rows, terminals=("s", "t"))


def strands_fixture() -> Linkage:
    """The ten-bar showcase: strands a-c (10,3), c-h (4,1) and (2,2),
    a-h (7,6) and (2.5,2.5).  Realisable with distance range [3,5] at (a,h);
    its moduli space is disconnected."""
    return Linkage.build(
        [
            ("p1a", "a", "b", "10"),
            ("p1b", "b", "c", "3"),
            ("p2a", "c", "d", "4"),
            ("p2b", "d", "h", "1"),
            ("p3a", "c", "e", "2"),
            ("p3b", "e", "h", "2"),
            ("p4a", "a", "f", "7"),
            ("p4b", "f", "h", "6"),
            ("p5a", "a", "g", "2.5"),
            ("p5b", "g", "h", "2.5"),
        ],
        terminals=("a", "h"),
    )


# ---------------------------------------------------------------------------
# Random series-parallel linkages
# ---------------------------------------------------------------------------


def random_length(rng: Random) -> Fraction:
    return Fraction(rng.randint(1, 100), 10)


def _random_spec(rng: Random, budget: int, depth: int):
    """Nested spec: ('leaf', length) | ('ser', [a, b]) | ('par', [a, b, ...])."""
    if budget <= 1 or depth > 4 or rng.random() < 0.3:
        return ("leaf", random_length(rng)), 1
    if rng.random() < 0.5:
        left, used_l = _random_spec(rng, budget - 1, depth + 1)
        right, used_r = _random_spec(rng, budget - used_l, depth + 1)
        return ("ser", [left, right]), used_l + used_r
    width = rng.choice([2, 2, 3])
    children = []
    used = 0
    for _ in range(width):
        child, u = _random_spec(rng, max(1, (budget - used) // 2), depth + 1)
        children.append(child)
        used += u
    return ("par", children), used


def _materialise(spec, s, t, rows, counter):
    kind = spec[0]
    if kind == "leaf":
        counter[0] += 1
        rows.append((f"e{counter[0]:03d}", s, t, spec[1]))
        return
    if kind == "ser":
        counter[1] += 1
        mid = f"j{counter[1]:03d}"
        _materialise(spec[1][0], s, mid, rows, counter)
        _materialise(spec[1][1], mid, t, rows, counter)
        return
    for child in spec[1]:
        _materialise(child, s, t, rows, counter)


def random_sp_linkage(rng: Random, max_edges: int = 12) -> Linkage:
    """A random two-terminal series-parallel linkage (not always realisable)."""
    spec, _ = _random_spec(rng, max_edges, 0)
    rows: list = []
    counter = [0, 0]
    _materialise(spec, "s", "t", rows, counter)
    return Linkage.build(rows, terminals=("s", "t"))


def random_realisable_sp_linkage(rng: Random, max_edges: int = 12) -> Linkage:
    while True:
        linkage = random_sp_linkage(rng, max_edges)
        tree = build_sp_tree(linkage, linkage.terminals)
        if not linkage_range(tree).is_empty:
            return linkage


def shuffle_tree(tree: SPTree, rng: Random) -> SPTree:
    """Random semantics-preserving rearrangement: flips, child permutations,
    and series reassociation."""
    from splinkage.decompose import Leaf, Parallel, Series, chain, flip, make_parallel

    def walk(node: SPTree) -> SPTree:
        if isinstance(node, Leaf):
            return node
        if isinstance(node, Series):
            out = chain(walk(node.right), walk(node.left))
            # reassociate (a∘b)∘c -> a∘(b∘c) now and then
            if rng.random() < 0.5 and isinstance(out.right, Series):
                inner = out.right
                out = chain(inner.right, chain(inner.left, out.left))
            return out
        children = [walk(c) for c in node.children]
        rng.shuffle(children)
        return Parallel(node.source, node.sink, tuple(children))

    out = walk(tree)
    if rng.random() < 0.5:
        out = flip(out)
    return out
