"""Exact distances on level graphs.

Two engines compute the same numbers:

* ``bfs_dist`` walks the graph (materialized or implicit);
* ``HierarchicalOracle`` never walks it. The two gluing corners of every
  copy separate that copy from the rest of the ring, and a copy sits
  isometrically inside the next level, so a distance decomposes into
  within-copy distances to corners plus a whole number of copy crossings.

Balls store AMBIENT distances (the full level-k metric restricted to the
ball), never the metric of the induced subgraph.
"""

from __future__ import annotations

import functools
import logging
import threading
from collections import deque
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np

from . import conventions
from .construction import LevelGraph
from .core import Address, PolygonSpec, VertexId, canonical, corner, format_word, members
from .errors import BudgetExceeded

logger = logging.getLogger(__name__)


class Engine(StrEnum):
    bfs = "bfs"
    hier = "hier"


# ---------------------------------------------------------------------------
# Breadth-first search
# ---------------------------------------------------------------------------


def bfs_dist(
    graph: LevelGraph, source: VertexId, cutoff: int | None = None
) -> dict[VertexId, int]:
    """Unweighted distances from ``source``, truncated at ``cutoff`` when given."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        d = dist[v]
        if cutoff is not None and d >= cutoff:
            continue
        for w in graph.neighbors(v):
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def bfs_pair(graph: LevelGraph, u: VertexId, v: VertexId) -> int:
    """Distance from ``u`` to ``v``, stopping as soon as ``v`` is reached."""
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w in graph.neighbors(x):
            if w not in dist:
                if w == v:
                    return dist[x] + 1
                dist[w] = dist[x] + 1
                queue.append(w)
    raise ValueError(f"{v} unreachable from {u}")


def is_cut_pair(
    graph: LevelGraph,
    a: VertexId,
    b: VertexId,
    probe_u: VertexId,
    probe_v: VertexId,
) -> bool:
    """True iff every path from ``probe_u`` to ``probe_v`` meets ``{a, b}``."""
    blocked = {a, b}
    if probe_u in blocked or probe_v in blocked:
        return True
    seen = {probe_u}
    queue = deque([probe_u])
    while queue:
        x = queue.popleft()
        for w in graph.neighbors(x):
            if w == probe_v:
                return False
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return True


# ---------------------------------------------------------------------------
# Hierarchical oracle
# ---------------------------------------------------------------------------


class HierarchicalOracle:
    """Memoized recursive distances for one polygon.

    Memo tables are per level. Reads are lock-free; each level has its own
    lock for writes and for the one-time computation of its copy span.
    """

    def __init__(self, spec: PolygonSpec) -> None:
        self.spec = spec
        self._memo: dict[int, dict[tuple[Address, Address], int]] = {}
        self._spans: dict[int, int] = {}
        self._locks: dict[int, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock(self, k: int) -> threading.Lock:
        lock = self._locks.get(k)
        if lock is None:
            with self._locks_guard:
                lock = self._locks.setdefault(k, threading.Lock())
        return lock

    def span(self, k: int) -> int:
        """Distance between the two gluing corners of a level-``k`` copy."""
        cached = self._spans.get(k)
        if cached is not None:
            return cached
        value = self._distance(k, corner(self.spec.up(0), k), corner(self.spec.down(0), k))
        with self._lock(k):
            self._spans.setdefault(k, value)
        return value

    def distance(self, k: int, u: VertexId | Address, v: VertexId | Address) -> int:
        a = u.canonical if isinstance(u, VertexId) else u
        b = v.canonical if isinstance(v, VertexId) else v
        return self._distance(k, a, b)

    def _distance(self, k: int, a: Address, b: Address) -> int:
        spec = self.spec
        r = spec.r
        if k == 1:
            gap = (a[0] - b[0]) % r
            return min(gap, r - gap)
        a = canonical(spec, a).canonical
        b = canonical(spec, b).canonical
        if a == b:
            return 0
        key = (a, b) if a < b else (b, a)
        table = self._memo.get(k)
        if table is not None and key in table:
            return table[key]

        best: int | None = None
        for ma in members(spec, a):
            for mb in members(spec, b):
                pa, ca = ma[:-1], ma[-1]
                pb, cb = mb[:-1], mb[-1]
                if ca == cb:
                    cand = self._distance(k - 1, pa, pb)
                else:
                    cand = min(
                        self._around(k, pa, ca, pb, cb, clockwise=True),
                        self._around(k, pa, ca, pb, cb, clockwise=False),
                    )
                if best is None or cand < best:
                    best = cand
        assert best is not None

        with self._lock(k):
            self._memo.setdefault(k, {})[key] = best
        return best

    def _around(
        self, k: int, pa: Address, ca: int, pb: Address, cb: int, *, clockwise: bool
    ) -> int:
        spec = self.spec
        if clockwise:
            leave, enter = spec.up(ca), spec.down(cb)
            crossed = (cb - ca) % spec.r - 1
        else:
            leave, enter = spec.down(ca), spec.up(cb)
            crossed = (ca - cb) % spec.r - 1
        inner = k - 1
        return (
            self._distance(inner, pa, corner(leave, inner))
            + crossed * self.span(inner)
            + self._distance(inner, corner(enter, inner), pb)
        )


@functools.cache
def oracle_for(spec: PolygonSpec) -> HierarchicalOracle:
    return HierarchicalOracle(spec)


def hierarchical_dist(
    spec: PolygonSpec, k: int, u: VertexId | Address, v: VertexId | Address
) -> int:
    return oracle_for(spec).distance(k, u, v)


def corner_distance(spec: PolygonSpec, k: int, x: int, y: int) -> int:
    """d(x^k, y^k) in the level-``k`` graph."""
    return oracle_for(spec).distance(k, corner(x, k), corner(y, k))


def gluing_span(spec: PolygonSpec, k: int) -> int:
    """Distance between the two gluing corners of any copy of level ``k``."""
    return oracle_for(spec).span(k)


def distance(graph: LevelGraph, u: VertexId, v: VertexId, engine: Engine | str = Engine.hier) -> int:
    if Engine(engine) is Engine.bfs:
        return bfs_pair(graph, u, v)
    return hierarchical_dist(graph.spec, graph.k, u, v)


# ---------------------------------------------------------------------------
# Balls
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PointedBall:
    """Points ordered by distance to the center, then canonically; center first."""

    center: VertexId
    radius: int
    level: int
    points: tuple[VertexId, ...]
    matrix: np.ndarray
    identities: tuple[Any, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.points)

    @functools.cached_property
    def index(self) -> dict[VertexId, int]:
        return {p: i for i, p in enumerate(self.points)}

    def distance(self, u: VertexId, v: VertexId) -> int:
        return int(self.matrix[self.index[u], self.index[v]])

    def to_dict(self, spec: PolygonSpec) -> dict[str, Any]:
        return {
            "center": format_word(spec, self.center.canonical),
            "radius": self.radius,
            "ambientLevel": self.level,
            "points": [format_word(spec, p.canonical) for p in self.points],
            "matrix": self.matrix.tolist(),
        }


def ball(graph: LevelGraph, center: VertexId, radius: int) -> PointedBall:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    around = bfs_dist(graph, center, cutoff=radius)
    points = tuple(sorted(around, key=lambda p: (around[p], p)))
    n = len(points)
    matrix = np.zeros((n, n), dtype=np.int64)
    for i, p in enumerate(points):
        row = bfs_dist(graph, p, cutoff=2 * radius)
        for j in range(i + 1, n):
            matrix[i, j] = matrix[j, i] = row[points[j]]
    logger.debug("ball of radius %d at level %d: %d points", radius, graph.k, n)
    return PointedBall(center, radius, graph.k, points, matrix)


def pointed_isometric(
    b1: PointedBall,
    b2: PointedBall,
    *,
    pointed: bool = True,
    hint: dict[VertexId, VertexId] | None = None,
    step_budget: int = conventions.ISOMETRY_STEP_BUDGET,
) -> dict[VertexId, VertexId] | None:
    """A distance-preserving bijection ``b1 -> b2`` (center to center when ``pointed``).

    Candidates are pruned by row multisets (and by distance to the center
    when pointed); the search is plain backtracking over ``b1``'s points in
    order. ``hint`` is verified first and returned when it already works.
    """
    n = len(b1)
    if n != len(b2):
        return None
    m1, m2 = b1.matrix, b2.matrix
    sig1 = [tuple(sorted(row)) for row in m1.tolist()]
    sig2 = [tuple(sorted(row)) for row in m2.tolist()]
    if sorted(sig1) != sorted(sig2):
        return None

    if hint is not None:
        try:
            perm = np.array([b2.index[hint[p]] for p in b1.points])
        except KeyError:
            perm = None
        if (
            perm is not None
            and len(set(perm.tolist())) == n
            and (not pointed or perm[0] == 0)
            and np.array_equal(m2[np.ix_(perm, perm)], m1)
        ):
            return {p: b2.points[j] for p, j in zip(b1.points, perm.tolist(), strict=True)}

    candidates: list[list[int]] = []
    for i in range(n):
        row = [
            j
            for j in range(n)
            if sig2[j] == sig1[i] and (not pointed or m2[0, j] == m1[0, i])
        ]
        if pointed and i == 0:
            row = [0] if 0 in row else []
        if not row:
            return None
        candidates.append(row)

    image = np.full(n, -1, dtype=np.int64)
    used = np.zeros(n, dtype=bool)
    cursor = [0] * n
    depth = 0
    steps = 0
    while 0 <= depth < n:
        cands = candidates[depth]
        placed = False
        while cursor[depth] < len(cands):
            j = cands[cursor[depth]]
            cursor[depth] += 1
            if used[j]:
                continue
            steps += 1
            if steps > step_budget:
                raise BudgetExceeded(f"isometry search exceeded {step_budget} steps")
            if depth and not np.array_equal(m2[j, image[:depth]], m1[depth, :depth]):
                continue
            image[depth] = j
            used[j] = True
            placed = True
            break
        if placed:
            depth += 1
            continue
        cursor[depth] = 0
        depth -= 1
        if depth >= 0:
            used[image[depth]] = False
            image[depth] = -1
    if depth < 0:
        return None
    return {p: b2.points[j] for p, j in zip(b1.points, image.tolist(), strict=True)}


# ---------------------------------------------------------------------------
# Geodesics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeodesicPath:
    vertices: tuple[VertexId, ...]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def at(self, t: int) -> VertexId:
        return self.vertices[t]

    @property
    def midpoint(self) -> VertexId:
        if self.length % 2:
            raise ValueError(f"odd geodesic of length {self.length} has no midpoint vertex")
        return self.vertices[self.length // 2]


def _distance_to(graph: LevelGraph, target: VertexId) -> Callable[[VertexId], int]:
    if graph.materialized:
        table = bfs_dist(graph, target)
        return table.__getitem__
    oracle = oracle_for(graph.spec)
    return lambda w: oracle.distance(graph.k, w, target)


def iter_geodesics(graph: LevelGraph, u: VertexId, v: VertexId) -> Iterator[GeodesicPath]:
    """Shortest paths from ``u`` to ``v`` in lexicographic order of vertex sequences."""
    to_v = _distance_to(graph, v)
    total = to_v(u)

    def steps(w: VertexId, remaining: int) -> Iterator[VertexId]:
        return (x for x in graph.neighbors(w) if to_v(x) == remaining - 1)

    path = [u]
    pending = [steps(u, total)]
    while pending:
        if len(path) - 1 == total:
            yield GeodesicPath(tuple(path))
            path.pop()
            pending.pop()
            continue
        nxt = next(pending[-1], None)
        if nxt is None:
            pending.pop()
            path.pop()
            continue
        path.append(nxt)
        pending.append(steps(nxt, total - len(path) + 1))


def geodesics_between(
    graph: LevelGraph, u: VertexId, v: VertexId, max_count: int = 1
) -> list[GeodesicPath]:
    found: list[GeodesicPath] = []
    for path in iter_geodesics(graph, u, v):
        found.append(path)
        if len(found) >= max_count:
            break
    return found


def canonical_geodesic(graph: LevelGraph, u: VertexId, v: VertexId) -> GeodesicPath:
    return next(iter_geodesics(graph, u, v))
