"""Brute-force numerical ground truth at desk scale.

Two instruments: a torus-grid fibre probe that counts connected components of
the set of path configurations achieving a given terminal distance, and a
moduli-space sampler that scatters random realisations of a whole linkage and
clusters them.  Both exist to validate the exact algebra on small instances;
neither certifies topology.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from random import Random

import numpy as np
from scipy import ndimage
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .core import (
    InfeasibleDistanceError,
    Linkage,
    LinkageError,
    Realisation,
    to_fraction,
)
from .decompose import PathSpec, build_sp_tree
from .intervals import path_range
from .realize import RandomPlacer


class OracleResolutionError(LinkageError):
    """The grid is too coarse to see the requested fibre."""


# ---------------------------------------------------------------------------
# Fibre probe
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiberProbe:
    """Grid probe of one fibre of the endpoint-distance map of a path.

    Configurations are parameterised by the absolute headings of bars
    2..k with bar 1 fixed along +x (this quotients rotations, so the grid is
    the full (k-1)-torus).  ``epsilon`` is the adjacency threshold in angle
    space; by default one grid step.
    """

    path: PathSpec
    x: float
    resolution: int = 200
    epsilon: float | None = None

    def __post_init__(self):
        if self.resolution < 8:
            raise ValueError("resolution must be at least 8")
        if self.path.k < 2:
            raise ValueError("fibre probe needs a path with at least 2 edges")
        if not path_range(self.path).contains(to_fraction(self.x)):
            raise InfeasibleDistanceError(
                f"x out of range: {self.x} not in {path_range(self.path)}"
            )


@lru_cache(maxsize=2)
def _distance_grid(lengths: tuple[float, ...], r: int) -> np.ndarray:
    """Endpoint distance over the full heading torus, shape (r,)*(k-1)."""
    dims = len(lengths) - 1
    angles = 2 * math.pi * np.arange(r) / r
    cos_a, sin_a = np.cos(angles), np.sin(angles)
    x_sum = np.full((1,) * dims, lengths[0])
    y_sum = np.zeros((1,) * dims)
    for i in range(dims):
        shape = [1] * dims
        shape[i] = r
        x_sum = x_sum + lengths[i + 1] * cos_a.reshape(shape)
        y_sum = y_sum + lengths[i + 1] * sin_a.reshape(shape)
    return np.sqrt(x_sum * x_sum + y_sum * y_sum)


def fiber_components(probe: FiberProbe) -> int:
    """Count connected components of the configurations at distance x.

    Grid points whose endpoint distance is within the slab
    |θ − x| <= total·2π/resolution are kept (the Lipschitz bound of the
    distance over one grid step, so a nonempty fibre always meets the slab),
    then adjacent kept points are unioned with wraparound on every axis.
    """
    lengths = tuple(float(l) for l in probe.path.lengths)
    dims = len(lengths) - 1
    r = probe.resolution
    step = 2 * math.pi / r
    slab = sum(lengths) * step
    reach = 1 if probe.epsilon is None else max(1, round(probe.epsilon / step))

    theta = _distance_grid(lengths, r)
    mask = np.abs(theta - float(probe.x)) <= slab
    if not mask.any():
        raise OracleResolutionError("resolution too coarse")
    if reach == 1:
        return _label_components_wrapped(mask)
    return _components_by_offsets(mask, reach)


def _label_components_wrapped(mask: np.ndarray) -> int:
    """Moore-adjacency components of a boolean torus grid."""
    dims = mask.ndim
    labels, n = ndimage.label(mask, structure=np.ones((3,) * dims, dtype=np.int8))
    if n <= 1:
        return int(n)
    parent = list(range(n + 1))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    # merge across each periodic seam; np.roll wraps, so diagonals that
    # cross several seams at once are covered too
    for axis in range(dims):
        face_a = np.atleast_1d(labels.take(0, axis=axis))
        face_b = np.atleast_1d(labels.take(mask.shape[axis] - 1, axis=axis))
        for delta in itertools.product((-1, 0, 1), repeat=face_a.ndim):
            shifted = np.roll(face_b, delta, axis=tuple(range(face_a.ndim))) if delta else face_b
            both = (face_a > 0) & (shifted > 0)
            if not both.any():
                continue
            pairs = np.unique(
                np.stack([face_a[both], shifted[both]], axis=-1).reshape(-1, 2), axis=0
            )
            for a, b in pairs:
                union(int(a), int(b))
    return len({find(i) for i in range(1, n + 1)})


def _components_by_offsets(mask: np.ndarray, reach: int) -> int:
    """Component count when adjacency spans several grid steps."""
    dims = mask.ndim
    r = mask.shape[0]
    kept = np.flatnonzero(mask.ravel())
    m = len(kept)
    coords = [(kept // r ** (dims - 1 - axis)) % r for axis in range(dims)]
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    here = np.arange(m)
    for offset in itertools.product(range(-reach, reach + 1), repeat=dims):
        if offset <= (0,) * dims:  # one direction per neighbour pair
            continue
        ncode = np.zeros(m, dtype=kept.dtype)
        for axis, off in enumerate(offset):
            ncode = ncode * r + (coords[axis] + off) % r
        pos = np.searchsorted(kept, ncode).clip(max=m - 1)
        hit = kept[pos] == ncode
        rows.append(here[hit])
        cols.append(pos[hit])
    if not rows:
        return m
    row = np.concatenate(rows)
    col = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(row), dtype=np.int8), (row, col)), shape=(m, m))
    n_comp, _ = connected_components(graph, directed=False)
    return int(n_comp)


# ---------------------------------------------------------------------------
# Moduli-space sampler
# ---------------------------------------------------------------------------

SAMPLE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SampleCloud:
    """Normalised random realisations of one linkage, as a coordinate matrix.

    Row i holds the plane coordinates of every vertex (in ``vertex_order``)
    of sample i; sources sit at the origin, sinks on the nonnegative x-axis.
    """

    vertex_order: tuple[str, ...]
    coords: np.ndarray  # shape (n, 2 * len(vertex_order))
    distances: np.ndarray  # realised terminal distances, shape (n,)
    epsilon: float
    seed: int

    def realisation(self, i: int) -> Realisation:
        row = self.coords[i]
        return Realisation(
            {
                v: (float(row[2 * j]), float(row[2 * j + 1]))
                for j, v in enumerate(self.vertex_order)
            }
        )


@dataclass(frozen=True)
class SampleResult:
    components: int
    distance_min: float
    distance_max: float
    n: int
    seed: int
    epsilon: float


def _sample_rng(seed: int, index: int) -> Random:
    # counter-based splitting: one independent stream per sample index
    return Random((seed << 32) + index)


def draw_cloud(
    linkage: Linkage,
    n: int,
    seed: int,
    epsilon: float | None = None,
    terminals: tuple[str, str] | None = None,
) -> SampleCloud:
    if n < 1:
        raise ValueError("need at least one sample")
    tree = build_sp_tree(linkage, terminals or linkage.terminals)
    try:
        placer = RandomPlacer(tree)
    except InfeasibleDistanceError as exc:
        raise LinkageError("not realisable") from exc

    order = tuple(sorted(linkage.vertices))
    index = {v: j for j, v in enumerate(order)}
    coords = np.empty((n, 2 * len(order)))
    distances = np.empty(n)
    for i in range(n):
        x, real = placer.draw(_sample_rng(seed, i))
        distances[i] = real.placement[tree.sink][0]
        for v, (px, py) in real.placement.items():
            j = index[v]
            coords[i, 2 * j] = px
            coords[i, 2 * j + 1] = py

    # every member must satisfy the edge-length invariant
    worst = 0.0
    for e in linkage.edges:
        dx = coords[:, 2 * index[e.u]] - coords[:, 2 * index[e.v]]
        dy = coords[:, 2 * index[e.u] + 1] - coords[:, 2 * index[e.v] + 1]
        err = np.abs(np.hypot(dx, dy) - float(e.length)) / max(float(e.length), 1.0)
        worst = max(worst, float(err.max()))
    if worst > SAMPLE_TOLERANCE:
        raise LinkageError(f"sampler violated edge lengths by {worst}")

    eps = float(epsilon) if epsilon is not None else float(linkage.total_length) / 50
    return SampleCloud(order, coords, distances, eps, seed)


def cluster_count(cloud: SampleCloud) -> int:
    """Single-linkage component count under the max-vertex-distance metric.

    Samples are first snapped to an epsilon/8 grid and deduplicated (rigid
    linkages collapse to a handful of representatives), then representatives
    within epsilon of each other are unioned.  Snapping blurs the linkage
    radius by at most epsilon·sqrt(2)/8.
    """
    eps = cloud.epsilon
    delta = eps / 8
    keys = np.round(cloud.coords / delta)
    _, first = np.unique(keys, axis=0, return_index=True)
    reps = cloud.coords[np.sort(first)]
    m = len(reps)
    if m == 1:
        return 1

    tree = cKDTree(reps)
    pairs = tree.query_pairs(r=eps, p=np.inf, output_type="ndarray")
    if len(pairs):
        diff = reps[pairs[:, 0]] - reps[pairs[:, 1]]
        per_vertex = diff.reshape(len(pairs), -1, 2)
        dist = np.sqrt((per_vertex**2).sum(axis=2)).max(axis=1)
        pairs = pairs[dist <= eps]
    if len(pairs) == 0:
        return m
    graph = coo_matrix(
        (np.ones(len(pairs), dtype=np.int8), (pairs[:, 0], pairs[:, 1])),
        shape=(m, m),
    )
    n_comp, _ = connected_components(graph, directed=False)
    return int(n_comp)


def sample_moduli(
    linkage: Linkage,
    n: int,
    seed: int,
    epsilon: float | None = None,
    terminals: tuple[str, str] | None = None,
) -> SampleResult:
    """Estimate the number of moduli-space components by sampling.

    The count is a lower bound witness: >= 2 clusters demonstrates
    disconnectedness (given separation above epsilon), while 1 cluster is
    evidence of connectedness only at the achieved sampling density.
    """
    cloud = draw_cloud(linkage, n, seed, epsilon, terminals)
    return SampleResult(
        components=cluster_count(cloud),
        distance_min=float(cloud.distances.min()),
        distance_max=float(cloud.distances.max()),
        n=n,
        seed=seed,
        epsilon=cloud.epsilon,
    )
