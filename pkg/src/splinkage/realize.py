"""Construct explicit plane coordinates for a feasible terminal distance.

The construction inverts the series composition rule: at every series node,
the two child distances and the node's own terminal distance form a triangle,
so the join vertex goes at the triangle apex.  Feasible child distances are
chosen by interval midpoints in exact arithmetic (deterministic, and never
degenerate unless forced); only the final square roots are floating point.

A randomised variant draws the child distances uniformly from their feasible
windows instead; the numerical oracle uses it to scatter samples over the
whole moduli space.
"""

from __future__ import annotations

import math
from fractions import Fraction
from random import Random

from .core import (
    InfeasibleDistanceError,
    Interval,
    Linkage,
    LinkageError,
    Realisation,
    to_fraction,
)
from .decompose import Leaf, Parallel, Series, SPTree
from .intervals import intersect, series_compose

Point = tuple[float, float]


def _ranges(tree: SPTree, out: dict[int, Interval]) -> Interval:
    if isinstance(tree, Leaf):
        rng = Interval(tree.length, tree.length)
    elif isinstance(tree, Series):
        rng = series_compose(_ranges(tree.left, out), _ranges(tree.right, out))
    else:
        rng = _ranges(tree.children[0], out)
        for child in tree.children[1:]:
            rng = intersect(rng, _ranges(child, out))
    out[id(tree)] = rng
    return rng


def _interior_vertices(tree: SPTree) -> set[str]:
    if isinstance(tree, Leaf):
        return set()
    if isinstance(tree, Series):
        return {tree.join} | _interior_vertices(tree.left) | _interior_vertices(tree.right)
    out: set[str] = set()
    for child in tree.children:
        out |= _interior_vertices(child)
    return out


def _apex(ps: Point, pt: Point, x: Fraction, z: Fraction, y: Fraction, up: bool) -> Point:
    """Place the join vertex at distance z from ps and y from pt, where
    |ps − pt| = x.  ``up`` selects the half-plane in the node's local frame."""
    if x == 0:
        # coincident terminals: z == y, direction is free; fix +x
        return (ps[0] + float(z), ps[1])
    px = (x * x + z * z - y * y) / (2 * x)
    py_sq = z * z - px * px
    py = math.sqrt(float(py_sq)) if py_sq > 0 else 0.0
    if not up:
        py = -py
    ux, uy = (pt[0] - ps[0]) / float(x), (pt[1] - ps[1]) / float(x)
    fx = float(px)
    return (ps[0] + fx * ux - py * uy, ps[1] + fx * uy + py * ux)


def _place_exact(
    tree: SPTree,
    x: Fraction,
    ps: Point,
    pt: Point,
    ranges: dict[int, Interval],
    placement: dict[str, Point],
) -> None:
    placement[tree.source] = ps
    placement[tree.sink] = pt
    if isinstance(tree, Leaf):
        return
    if isinstance(tree, Parallel):
        for child in tree.children:
            _place_exact(child, x, ps, pt, ranges, placement)
        return
    first, second = tree.right, tree.left  # traversal order source -> join -> sink
    c, d = ranges[id(first)].lo, ranges[id(first)].hi
    a, b = ranges[id(second)].lo, ranges[id(second)].hi
    z_lo = max(c, a - x, x - b)
    z_hi = min(d, x + b)
    assert z_lo <= z_hi, "series feasibility window vanished"
    z = (z_lo + z_hi) / 2
    y_lo = max(a, abs(x - z))
    y_hi = min(b, x + z)
    assert y_lo <= y_hi
    y = (y_lo + y_hi) / 2
    pm = _apex(ps, pt, x, z, y, up=True)
    _place_exact(first, z, ps, pm, ranges, placement)
    _place_exact(second, y, pm, pt, ranges, placement)


def synthesize(tree: SPTree, x) -> Realisation:
    """Deterministic realisation with terminal distance x.

    Places the source at the origin and the sink at (x, 0); raises
    :class:`InfeasibleDistanceError` when x is outside the achievable range.
    """
    x = to_fraction(x)
    ranges: dict[int, Interval] = {}
    total = _ranges(tree, ranges)
    if not total.contains(x):
        raise InfeasibleDistanceError(f"x out of range: {x} not in {total}")
    placement: dict[str, Point] = {}
    _place_exact(tree, x, (0.0, 0.0), (float(x), 0.0), ranges, placement)
    return Realisation(placement)


def verify(linkage: Linkage, realisation: Realisation) -> float:
    """Largest relative edge-length error of a placement."""
    worst = 0.0
    for e in linkage.edges:
        try:
            ux, uy = realisation.placement[e.u]
            vx, vy = realisation.placement[e.v]
        except KeyError as exc:
            raise LinkageError(f"missing vertex {exc.args[0]!r}") from exc
        measured = math.hypot(ux - vx, uy - vy)
        err = abs(measured - float(e.length)) / max(float(e.length), 1.0)
        worst = max(worst, err)
    return worst


# ---------------------------------------------------------------------------
# Randomised variant (float arithmetic; drives the sampling oracle)
# ---------------------------------------------------------------------------


class RandomPlacer:
    """Draw realisations with uniformly random feasible choices.

    Node ranges are precomputed once (exact, then floated); each draw picks
    the series distances uniformly inside their feasible windows, flips each
    apex at random, and reflects parallel children at random.  Windows are
    shrunk by a tiny guard so float drift cannot step outside feasibility.
    """

    def __init__(self, tree: SPTree):
        self.tree = tree
        exact: dict[int, Interval] = {}
        self.range = _ranges(tree, exact)
        if self.range.is_empty:
            raise InfeasibleDistanceError("not realisable")
        self.lo = float(self.range.lo)
        self.hi = float(self.range.hi)
        self.float_ranges = {
            key: (float(r.lo), float(r.hi)) for key, r in exact.items()
        }
        self.guard = 1e-12 * max(1.0, self.hi)
        self.interiors = {
            id(node): sorted(_interior_vertices(node))
            for node in self._parallel_children()
        }

    def _parallel_children(self):
        out = []

        def walk(node: SPTree):
            if isinstance(node, Series):
                walk(node.left)
                walk(node.right)
            elif isinstance(node, Parallel):
                out.extend(node.children)
                for child in node.children:
                    walk(child)

        walk(self.tree)
        return out

    def draw(self, rng: Random, x: float | None = None) -> tuple[float, Realisation]:
        if x is None:
            x = self.lo + (self.hi - self.lo) * rng.random()
        placement: dict[str, Point] = {}
        self._place(self.tree, x, (0.0, 0.0), (x, 0.0), placement, rng)
        return x, Realisation(placement)

    def _pick(self, lo: float, hi: float, rng: Random) -> float:
        lo2, hi2 = lo + self.guard, hi - self.guard
        if lo2 > hi2:
            return (lo + hi) / 2
        return lo2 + (hi2 - lo2) * rng.random()

    def _place(
        self,
        node: SPTree,
        x: float,
        ps: Point,
        pt: Point,
        placement: dict[str, Point],
        rng: Random,
    ) -> None:
        placement[node.source] = ps
        placement[node.sink] = pt
        if isinstance(node, Leaf):
            return
        if isinstance(node, Parallel):
            for child in node.children:
                self._place(child, x, ps, pt, placement, rng)
                if rng.random() < 0.5:
                    self._reflect(child, ps, pt, placement)
            return
        first, second = node.right, node.left
        c, d = self.float_ranges[id(first)]
        a, b = self.float_ranges[id(second)]
        z_lo = max(c, a - x, x - b)
        z_hi = min(d, x + b)
        z = self._pick(min(z_lo, z_hi), max(z_lo, z_hi), rng)
        y_lo = max(a, abs(x - z))
        y_hi = min(b, x + z)
        y = self._pick(min(y_lo, y_hi), max(y_lo, y_hi), rng)
        pm = _apex_float(ps, pt, x, z, y, up=rng.random() < 0.5)
        self._place(first, z, ps, pm, placement, rng)
        self._place(second, y, pm, pt, placement, rng)

    def _reflect(self, node: SPTree, ps: Point, pt: Point, placement: dict[str, Point]):
        names = self.interiors.get(id(node), ())
        if not names:
            return
        dx, dy = pt[0] - ps[0], pt[1] - ps[1]
        norm = dx * dx + dy * dy
        if norm == 0:
            return
        for v in names:
            px, py = placement[v][0] - ps[0], placement[v][1] - ps[1]
            t = (px * dx + py * dy) / norm
            fx, fy = 2 * t * dx - px, 2 * t * dy - py
            placement[v] = (ps[0] + fx, ps[1] + fy)


def _apex_float(ps: Point, pt: Point, x: float, z: float, y: float, up: bool) -> Point:
    if x == 0:
        return (ps[0] + z, ps[1])
    px = (x * x + z * z - y * y) / (2 * x)
    py_sq = z * z - px * px
    py = math.sqrt(py_sq) if py_sq > 0 else 0.0
    if not up:
        py = -py
    ux, uy = (pt[0] - ps[0]) / x, (pt[1] - ps[1]) / x
    return (ps[0] + px * ux - py * uy, ps[1] + px * uy + py * ux)
