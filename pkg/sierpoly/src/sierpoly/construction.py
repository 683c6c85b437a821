"""Level graphs as quotients of the r**k addresses under the gluing identification.

No edges are created by gluing: two addresses are adjacent exactly when
they differ only in the first letter, by +-1 mod r. A level graph is either
materialized (every class enumerated, adjacency stored) or implicit (only
``spec`` and ``k`` kept, neighbors derived on demand). Both answer every
query identically.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from enum import StrEnum

import networkx as nx

from . import conventions
from .core import Address, PolygonSpec, VertexId, canonical, check_address, corner, format_word, members
from .errors import BudgetExceeded

logger = logging.getLogger(__name__)


class BuildMode(StrEnum):
    materialized = "materialized"
    implicit = "implicit"
    auto = "auto"


def neighbors(spec: PolygonSpec, k: int, v: VertexId) -> list[VertexId]:
    """Sorted neighbors of ``v``: first-letter +-1 moves of every member address."""
    r = spec.r
    found: set[VertexId] = set()
    for a in members(spec, v):
        head, rest = a[0], a[1:]
        found.add(canonical(spec, ((head + 1) % r,) + rest))
        found.add(canonical(spec, ((head - 1) % r,) + rest))
    found.discard(v)
    return sorted(found)


def vertex(spec: PolygonSpec, k: int, a: Address) -> VertexId:
    return canonical(spec, check_address(spec, a, k))


def iter_vertices(spec: PolygonSpec, k: int) -> Iterator[VertexId]:
    """Every class of level ``k`` once, in canonical order."""
    for a in itertools.product(spec.alphabet, repeat=k):
        v = canonical(spec, a)
        if v.canonical == a:
            yield v


def expected_vertex_count(spec: PolygonSpec, k: int) -> int:
    count = spec.r
    for _ in range(k - 1):
        count = spec.r * count - spec.r
    return count


def top_gluing(spec: PolygonSpec, k: int) -> dict[int, VertexId]:
    """Class joining copy ``i`` to copy ``i + 1`` at level ``k``, for every ``i``."""
    if k < 2:
        raise ValueError("top gluing vertices exist from level 2 on")
    return {i: canonical(spec, corner(spec.up(i), k - 1) + (i,)) for i in spec.alphabet}


def copy_embedding(spec: PolygonSpec, k: int, i: int) -> Callable[[VertexId], VertexId]:
    """Injection of level ``k - 1`` into copy ``i`` of level ``k``."""
    if k < 2 or not 0 <= i < spec.r:
        raise ValueError(f"no copy {i} at level {k}")

    def embed(v: VertexId) -> VertexId:
        return canonical(spec, v.canonical + (i,))

    return embed


@dataclass(frozen=True, eq=False)
class LevelGraph:
    spec: PolygonSpec
    k: int
    mode: BuildMode
    top: dict[int, VertexId] = field(default_factory=dict)
    _adjacency: dict[VertexId, tuple[VertexId, ...]] | None = field(default=None, repr=False)

    @property
    def materialized(self) -> bool:
        return self._adjacency is not None

    def neighbors(self, v: VertexId) -> list[VertexId]:
        if self._adjacency is not None:
            return list(self._adjacency[v])
        return neighbors(self.spec, self.k, v)

    def vertex(self, a: Address) -> VertexId:
        return vertex(self.spec, self.k, a)

    def __contains__(self, v: object) -> bool:
        if not isinstance(v, VertexId) or len(v.canonical) != self.k:
            return False
        if self._adjacency is not None:
            return v in self._adjacency
        return all(0 <= x < self.spec.r for x in v.canonical) and canonical(self.spec, v.canonical) == v

    def vertices(self) -> Iterator[VertexId]:
        if self._adjacency is not None:
            return iter(sorted(self._adjacency))
        return iter_vertices(self.spec, self.k)

    def edges(self) -> Iterator[tuple[VertexId, VertexId]]:
        for v in self.vertices():
            for w in self.neighbors(v):
                if v < w:
                    yield v, w

    @property
    def vertex_count(self) -> int:
        if self._adjacency is not None:
            return len(self._adjacency)
        return expected_vertex_count(self.spec, self.k)

    @property
    def edge_count(self) -> int:
        if self._adjacency is not None:
            return sum(len(ns) for ns in self._adjacency.values()) // 2
        return self.spec.r**self.k

    def degree_histogram(self) -> dict[int, int]:
        histogram: dict[int, int] = {}
        for v in self.vertices():
            d = len(self.neighbors(v))
            histogram[d] = histogram.get(d, 0) + 1
        return dict(sorted(histogram.items()))

    def label(self, v: VertexId) -> str:
        return format_word(self.spec, v.canonical)

    def to_networkx(self) -> nx.Graph:
        """Materialize as a networkx graph with string node labels."""
        graph = nx.Graph(r=self.spec.r, k=self.k)
        for v in self.vertices():
            graph.add_node(self.label(v), class_size=v.class_size)
        graph.add_edges_from((self.label(u), self.label(w)) for u, w in self.edges())
        return graph


def build_level_graph(
    spec: PolygonSpec,
    k: int,
    mode: BuildMode | str = BuildMode.auto,
    *,
    limit: int = conventions.MATERIALIZE_LIMIT,
) -> LevelGraph:
    if k < 1:
        raise ValueError("level must be at least 1")
    mode = BuildMode(mode)
    size = spec.r**k
    if mode is BuildMode.auto:
        mode = BuildMode.implicit if size > limit else BuildMode.materialized
    top = top_gluing(spec, k) if k >= 2 else {}
    if mode is BuildMode.implicit:
        return LevelGraph(spec, k, mode, top)
    if size > limit:
        raise BudgetExceeded(
            f"level {k} of the {spec.r}-gon has {size} addresses (limit {limit})",
            suggestion="use --mode implicit",
        )

    adjacency: dict[VertexId, tuple[VertexId, ...]] = {}
    for v in iter_vertices(spec, k):
        adjacency[v] = tuple(neighbors(spec, k, v))
    logger.debug("materialized level %d of r=%d: %d vertices", k, spec.r, len(adjacency))
    return LevelGraph(spec, k, mode, top, adjacency)
