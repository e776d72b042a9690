"""Domain types shared by every analysis stage.

A linkage is a weighted multigraph: vertices are opaque string ids, edges
carry nonnegative lengths, parallel edges are allowed, loops are not.  All
lengths are stored as exact rationals so that the interval algebra downstream
can produce exact verdicts; floats only appear in coordinate synthesis and
in the numerical oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping


class LinkageError(Exception):
    """Base class for all analysis errors."""


class InvalidLinkageError(LinkageError):
    """Input violates the linkage invariants or the JSON schema."""


class DisconnectedGraphError(LinkageError):
    """The underlying multigraph is not connected."""


class UnrealisableLoopError(LinkageError):
    """Contracting zero edges produced a positive-length loop."""


class NotSeriesParallelError(LinkageError):
    """The graph admits no two-terminal series-parallel decomposition."""


class InvalidTerminalsError(LinkageError):
    """The graph is series-parallel, but not with the requested terminals."""


class InfeasibleDistanceError(LinkageError):
    """A requested terminal distance lies outside the achievable range."""


# ---------------------------------------------------------------------------
# Exact numbers
# ---------------------------------------------------------------------------


def to_fraction(value) -> Fraction:
    """Parse a length or coordinate into an exact rational.

    Strings are read as decimals ("3.5") or ratios ("7/2").  Floats go
    through their shortest decimal repr, so a JSON literal 2.5 means 5/2.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidLinkageError(f"unparseable number {value!r}") from exc
    raise InvalidLinkageError(f"unparseable number {value!r}")


def format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_float(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interval:
    """Closed bounded interval [lo, hi] of nonnegative rationals.

    Following the convention that [a, b] with b < a denotes the empty set,
    any such pair normalises to the canonical empty interval.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            lo, hi = Fraction(0), Fraction(-1)
        elif lo < 0:
            raise ValueError(f"negative interval endpoint {lo}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @staticmethod
    def point(v) -> "Interval":
        v = Fraction(v)
        return Interval(v, v)

    def contains(self, x) -> bool:
        return not self.is_empty and self.lo <= Fraction(x) <= self.hi

    def __str__(self) -> str:
        if self.is_empty:
            return "empty"
        return f"[{format_fraction(self.lo)},{format_fraction(self.hi)}]"


EMPTY_INTERVAL = Interval(Fraction(0), Fraction(-1))


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of disjoint, non-adjacent closed intervals.

    Canonical form: parts sorted by lo, touching or overlapping parts merged.
    Degenerate single-point parts are allowed; a set whose parts are all
    points prints as {a,b}, otherwise parts join with a union sign.
    """

    parts: tuple[Interval, ...]

    @staticmethod
    def of(*intervals: Interval) -> "IntervalSet":
        live = sorted((i for i in intervals if not i.is_empty), key=lambda i: (i.lo, i.hi))
        merged: list[Interval] = []
        for part in live:
            if merged and part.lo <= merged[-1].hi:
                if part.hi > merged[-1].hi:
                    merged[-1] = Interval(merged[-1].lo, part.hi)
            else:
                merged.append(part)
        return IntervalSet(tuple(merged))

    @property
    def is_empty(self) -> bool:
        return not self.parts

    def contains(self, x) -> bool:
        x = Fraction(x)
        return any(p.lo <= x <= p.hi for p in self.parts)

    def intersect(self, other: Interval) -> "IntervalSet":
        if other.is_empty:
            return IntervalSet(())
        clipped = (
            Interval(max(p.lo, other.lo), min(p.hi, other.hi)) for p in self.parts
        )
        return IntervalSet.of(*clipped)

    def meets(self, other: Interval) -> bool:
        return not self.intersect(other).is_empty

    @property
    def min(self) -> Fraction:
        return self.parts[0].lo

    @property
    def max(self) -> Fraction:
        return self.parts[-1].hi

    def __str__(self) -> str:
        if not self.parts:
            return "empty"
        if all(p.lo == p.hi for p in self.parts):
            return "{" + ",".join(format_fraction(p.lo) for p in self.parts) + "}"
        return " ∪ ".join(
            "{%s}" % format_fraction(p.lo) if p.lo == p.hi else str(p)
            for p in self.parts
        )


# ---------------------------------------------------------------------------
# Linkages
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: Fraction

    def other(self, vertex: str) -> str:
        return self.v if vertex == self.u else self.u


@dataclass(frozen=True)
class Linkage:
    """Weighted multigraph under analysis.

    ``terminals`` is optional bookkeeping carried from the input file; the
    algorithms take terminals explicitly where they matter.
    """

    vertices: frozenset[str]
    edges: tuple[Edge, ...]
    terminals: tuple[str, str] | None = None

    @staticmethod
    def build(
        edges: Iterable[tuple[str, str, str, object]],
        vertices: Iterable[str] = (),
        terminals: tuple[str, str] | None = None,
    ) -> "Linkage":
        """Convenience constructor from (id, u, v, length) tuples."""
        es = tuple(Edge(i, u, v, to_fraction(l)) for i, u, v, l in edges)
        vs = frozenset(vertices) | {e.u for e in es} | {e.v for e in es}
        return Linkage(vs, es, terminals)

    @property
    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    def adjacency(self) -> dict[str, list[Edge]]:
        adj: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            adj[e.u].append(e)
            adj[e.v].append(e)
        return adj

    def degree(self) -> dict[str, int]:
        deg = dict.fromkeys(self.vertices, 0)
        for e in self.edges:
            deg[e.u] += 1
            deg[e.v] += 1
        return deg

    def edge_by_id(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def sub_linkage(self, edge_ids: Iterable[str], terminals=None) -> "Linkage":
        wanted = set(edge_ids)
        es = tuple(e for e in self.edges if e.id in wanted)
        vs = {e.u for e in es} | {e.v for e in es}
        if terminals:
            vs |= set(terminals)
        return Linkage(frozenset(vs), es, terminals)


def validate(linkage: Linkage) -> list[str]:
    """Return every violated invariant; an empty list means the linkage is ok."""
    errors = []
    seen_ids: set[str] = set()
    for e in linkage.edges:
        if e.id in seen_ids:
            errors.append(f"duplicate edge id {e.id!r}")
        seen_ids.add(e.id)
        if e.u == e.v:
            errors.append(f"loop at vertex {e.u!r} (edge {e.id!r})")
        if e.length < 0:
            errors.append(f"negative length on edge {e.id!r}")
        for endpoint in (e.u, e.v):
            if endpoint not in linkage.vertices:
                errors.append(f"unknown vertex {endpoint!r} on edge {e.id!r}")
    if linkage.terminals is not None:
        s, t = linkage.terminals
        if s == t:
            errors.append("terminals coincide")
        for v in (s, t):
            if v not in linkage.vertices:
                errors.append(f"unknown terminal {v!r}")
    return errors


def contract_zero_edges(linkage: Linkage) -> Linkage:
    """Contract every zero-length edge, identifying its endpoints.

    A zero-length loop created along the way is dropped; a positive-length
    loop is a contradiction (it would force a vertex at nonzero distance
    from itself) and raises :class:`UnrealisableLoopError`.
    """
    parent = {v: v for v in linkage.vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in linkage.edges:
        if e.length == 0:
            ru, rv = find(e.u), find(e.v)
            if ru != rv:
                # keep the lexicographically smallest id as representative
                lo, hi = sorted((ru, rv))
                parent[hi] = lo

    new_edges = []
    for e in linkage.edges:
        ru, rv = find(e.u), find(e.v)
        if ru == rv:
            if e.length > 0:
                raise UnrealisableLoopError(
                    "unrealisable: positive-length loop after contraction"
                    f" (edge {e.id!r})"
                )
            continue
        new_edges.append(Edge(e.id, ru, rv, e.length))

    vertices = frozenset(find(v) for v in linkage.vertices)
    terminals = linkage.terminals
    if terminals is not None:
        s, t = find(terminals[0]), find(terminals[1])
        terminals = None if s == t else (s, t)
    return Linkage(vertices, tuple(new_edges), terminals)


# ---------------------------------------------------------------------------
# Verdicts and realisations
# ---------------------------------------------------------------------------


class Status(Enum):
    EMPTY = "empty"
    CONNECTED = "connected"
    DISCONNECTED = "disconnected"


@dataclass
class Verdict:
    """Three-valued analysis result plus the trace of steps that produced it."""

    status: Status
    trace: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"status": self.status.value, "trace": self.trace}


@dataclass(frozen=True)
class Realisation:
    """Plane placement of every vertex, normalised so the source sits at the
    origin and the sink on the nonnegative x-axis."""

    placement: dict[str, tuple[float, float]]

    def to_json(self) -> dict:
        return {
            v: [float(format_float(x)), float(format_float(y))]
            for v, (x, y) in sorted(self.placement.items())
        }


# ---------------------------------------------------------------------------
# JSON schema
# ---------------------------------------------------------------------------


def parse_linkage(text: str) -> Linkage:
    """Parse the canonical linkage JSON.

    Schema: {"vertices": [...], "edges": [{"id","u","v","length"}...],
    "terminals": ["s","t"]?} with lengths as strings to preserve exactness.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidLinkageError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidLinkageError("top-level JSON value must be an object")
    try:
        vertices = [str(v) for v in doc.get("vertices", [])]
        edges = []
        for item in doc["edges"]:
            edges.append(
                Edge(
                    str(item["id"]),
                    str(item["u"]),
                    str(item["v"]),
                    to_fraction(item["length"]),
                )
            )
        terminals = None
        if doc.get("terminals") is not None:
            s, t = doc["terminals"]
            terminals = (str(s), str(t))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidLinkageError(f"malformed linkage object: {exc}") from exc
    linkage = Linkage(
        frozenset(vertices) | {e.u for e in edges} | {e.v for e in edges},
        tuple(edges),
        terminals,
    )
    errors = validate(linkage)
    if errors:
        raise InvalidLinkageError("; ".join(errors))
    return linkage


def linkage_to_json(linkage: Linkage) -> dict:
    doc: dict = {
        "vertices": sorted(linkage.vertices),
        "edges": [
            {"id": e.id, "u": e.u, "v": e.v, "length": format_fraction(e.length)}
            for e in sorted(linkage.edges, key=lambda e: e.id)
        ],
    }
    if linkage.terminals is not None:
        doc["terminals"] = list(linkage.terminals)
    return doc
