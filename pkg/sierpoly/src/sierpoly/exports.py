"""Level-graph exports: edge list, DOT, GraphML and a JSON document."""

from __future__ import annotations

import json
import logging
from enum import StrEnum
from pathlib import Path
from typing import Any

import networkx as nx

from . import conventions
from ._fileutil import atomic_write
from .construction import LevelGraph
from .core import format_word, members

logger = logging.getLogger(__name__)


class ExportFormat(StrEnum):
    edgelist = "edgelist"
    dot = "dot"
    graphml = "graphml"
    json = "json"

    @property
    def suffix(self) -> str:
        return {"edgelist": ".edges", "dot": ".dot", "graphml": ".graphml", "json": ".json"}[self.value]


def graph_document(graph: LevelGraph) -> dict[str, Any]:
    """JSON form: vertices with their member addresses, edges, top-level gluing classes."""
    spec = graph.spec
    return {
        "schemaVersion": conventions.SCHEMA_VERSION,
        "spec": {"r": spec.r, "f": spec.f, "ftilde": spec.ftilde},
        "k": graph.k,
        "vertices": [
            {"id": graph.label(v), "members": [format_word(spec, a) for a in members(spec, v)]}
            for v in graph.vertices()
        ],
        "edges": [[graph.label(u), graph.label(w)] for u, w in graph.edges()],
        "topGluing": {str(i): graph.label(v) for i, v in graph.top.items()},
    }


def render(graph: LevelGraph, fmt: ExportFormat | str) -> str:
    fmt = ExportFormat(fmt)
    if fmt is ExportFormat.json:
        return json.dumps(graph_document(graph), indent=2)
    nxg = graph.to_networkx()
    if fmt is ExportFormat.edgelist:
        return "".join(f"{line}\n" for line in nx.generate_edgelist(nxg, data=False))
    if fmt is ExportFormat.graphml:
        return "\n".join(nx.generate_graphml(nxg)) + "\n"
    return nx.nx_pydot.to_pydot(nxg).to_string()


def default_path(graph: LevelGraph, fmt: ExportFormat | str) -> Path:
    return Path(f"gamma_r{graph.spec.r}_k{graph.k}{ExportFormat(fmt).suffix}")


def export_graph(graph: LevelGraph, fmt: ExportFormat | str, path: Path | None = None) -> Path:
    path = path or default_path(graph, fmt)
    atomic_write(path, render(graph, fmt), prefix=".export-")
    logger.info("wrote %s export of level %d to %s", fmt, graph.k, path)
    return path
