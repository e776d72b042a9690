"""The interval algebra over terminal distances.

For a two-terminal linkage, the set of achievable distances between the
terminal images is empty or a closed interval.  Gluing linkages end to end
composes these intervals with the triangle-inequality rule; gluing them in
parallel intersects them.  For a single path of bars we also compute the set
of terminal distances over which the configuration fibre is connected, which
drives the connectedness recursion.

Everything here is exact rational arithmetic; boundary cases decide verdicts,
so no epsilons.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce

from .core import EMPTY_INTERVAL, Interval, IntervalSet, Status, to_fraction
from .decompose import PathSpec

_ZERO = Fraction(0)


def series_compose(i: Interval, j: Interval) -> Interval:
    """Distance range across two linkages glued at one joint.

    [a,b] ∘ [c,d] = [max{0, c−b, a−d}, b+d]: the endpoints span a triangle
    with one side in each operand range.  Empty absorbs.
    """
    if i.is_empty or j.is_empty:
        return EMPTY_INTERVAL
    return Interval(max(_ZERO, j.lo - i.hi, i.lo - j.hi), i.hi + j.hi)


def intersect(i: Interval, j: Interval) -> Interval:
    if i.is_empty or j.is_empty:
        return EMPTY_INTERVAL
    return Interval(max(i.lo, j.lo), min(i.hi, j.hi))


def path_range(path: PathSpec) -> Interval:
    """Achievable terminal distances of a path of rigid bars.

    Closed form [max(0, 2·max lᵢ − S), S]; cross-checked against the fold of
    series_compose over the individual bars.
    """
    total = path.total
    closed = Interval(max(_ZERO, 2 * max(path.lengths) - total), total)
    folded = reduce(series_compose, (Interval(l, l) for l in path.lengths))
    assert folded == closed, f"path range mismatch: {folded} vs {closed}"
    return closed


def nabla(path: PathSpec) -> IntervalSet:
    """Terminal distances whose configuration fibre is connected.

    For two bars the fibre is connected only at the fold and the full
    extension.  For k >= 3 bars sorted descending l1 >= l2 >= ... with total
    S, the connected window is the part of the achievable range covered by

        [2(l2+l3)−S, l3] ∪ [l3, min(l1, S−2·l2)] ∪ [max(l1, 2(l1+l2)−S), S]

    (an interval with reversed endpoints is empty).  Each piece restates the
    polygon-connectivity criterion for the closed polygon formed by the path
    plus a virtual closing bar of length x, split by where x ranks among the
    bar lengths.
    """
    if path.k < 2:
        raise ValueError("undefined for k=1")
    if path.k == 2:
        a, b = path.lengths
        return IntervalSet.of(Interval.point(abs(a - b)), Interval.point(a + b))

    d = sorted(path.lengths, reverse=True)
    l1, l2, l3 = d[0], d[1], d[2]
    total = path.total
    rng = path_range(path)
    pieces = (
        (2 * (l2 + l3) - total, l3),
        (l3, min(l1, total - 2 * l2)),
        (max(l1, 2 * (l1 + l2) - total), total),
    )
    clipped = (
        Interval(max(lo, rng.lo), min(hi, rng.hi)) for lo, hi in pieces
    )
    return IntervalSet.of(*clipped)


def polygon_status(lengths) -> Status:
    """Moduli status of a closed polygon of rigid bars.

    Nonempty iff twice the longest bar is at most the perimeter; connected
    iff twice the sum of the second and third longest is at most the
    perimeter.  Two bars form a degenerate 2-gon: empty unless equal, in
    which case the moduli space is a single point.
    """
    ls = sorted((to_fraction(l) for l in lengths), reverse=True)
    if len(ls) < 2:
        raise ValueError("a polygon needs at least 2 edges")
    if any(l <= 0 for l in ls):
        raise ValueError("polygon lengths must be positive")
    total = sum(ls, _ZERO)
    if 2 * ls[0] > total:
        return Status.EMPTY
    if len(ls) == 2:
        return Status.CONNECTED  # equal pair; the only configuration is doubled
    if 2 * (ls[1] + ls[2]) <= total:
        return Status.CONNECTED
    return Status.DISCONNECTED
