"""Tests for graph exports and census tables."""

from __future__ import annotations

import builtins
import json
from pathlib import Path
from unittest.mock import patch

import networkx as nx
import numpy as np
import pytest

from sierpoly.construction import build_level_graph
from sierpoly.core import PolygonSpec
from sierpoly.exports import ExportFormat, default_path, export_graph, graph_document, render
from sierpoly.plots import profile_matrix, write_census_plots, write_heatmap, write_tables
from sierpoly.reports import (
    AlgebraicSide,
    AlmostFailure,
    AntipodalEntry,
    CensusClaims,
    CensusReport,
    ProfileEntry,
)


def tiny_report() -> CensusReport:
    ball = ["", "3", "5"]
    profiles = {
        "busemann-up": ProfileEntry(kind="gluingUp", ball=ball, values=[0, 1, -1], stabilized_at=2),
        "antipodal": ProfileEntry(kind="antipodal", ball=ball, values=[0, 1, 1], stabilized_at=3),
    }
    return CensusReport(
        spec={"r": 6, "f": 2, "ftilde": 4},
        xi="(4)*",
        params={},
        antipodal=AntipodalEntry(
            levels=[2, 3],
            weakly_n={"": 0},
            weakly_passed=True,
            almost_failures=[AlmostFailure(n=0, s=5, t=17, defect=2)],
            almost_failed_everywhere=True,
            profile_id="antipodal",
        ),
        profile_order=["busemann-up", "antipodal"],
        profiles=profiles,
        claims=CensusClaims(**{name: True for name in CensusClaims.model_fields}),
    )


class TestExports:
    def test_json_document(self, spec6: PolygonSpec) -> None:
        doc = graph_document(build_level_graph(spec6, 2))
        glued = next(v for v in doc["vertices"] if v["id"] == "04")
        assert glued["members"] == ["04", "35"]
        assert len(doc["edges"]) == 36
        assert doc["spec"] == {"r": 6, "f": 2, "ftilde": 4}

    def test_edge_list_reads_back(self, spec5: PolygonSpec) -> None:
        graph = build_level_graph(spec5, 2)
        text = render(graph, ExportFormat.edgelist)
        back = nx.parse_edgelist(text.splitlines(), nodetype=str)
        assert nx.is_isomorphic(back, graph.to_networkx())

    def test_default_path(self, spec6: PolygonSpec) -> None:
        graph = build_level_graph(spec6, 3)
        assert default_path(graph, "graphml") == Path("gamma_r6_k3.graphml")

    def test_export_writes_file(self, spec6: PolygonSpec, tmp_path: Path) -> None:
        path = export_graph(build_level_graph(spec6, 1), "json", tmp_path / "out" / "g.json")
        assert json.loads(path.read_text())["k"] == 1

    def test_unknown_format(self, spec6: PolygonSpec) -> None:
        with pytest.raises(ValueError):
            render(build_level_graph(spec6, 1), "pdf")


class TestPlots:
    def test_profile_matrix_rows_follow_order(self) -> None:
        matrix = profile_matrix(tiny_report())
        assert matrix.shape == (2, 3)
        assert np.array_equal(matrix[1], [0, 1, 1])

    def test_tables(self, tmp_path: Path) -> None:
        profiles, defects = write_tables(tiny_report(), tmp_path)
        lines = profiles.read_text().splitlines()
        assert lines[0] == "profile,,3,5"
        assert lines[1] == "busemann-up,0,1,-1"
        assert defects.read_text().splitlines() == ["N,s,t,defect", "0,5,17,2"]

    def test_heatmap_without_matplotlib(self, tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
        real_import = builtins.__import__

        def no_matplotlib(name, *args, **kwargs):
            if name.startswith("matplotlib"):
                raise ImportError(name)
            return real_import(name, *args, **kwargs)

        with patch("builtins.__import__", side_effect=no_matplotlib):
            assert write_heatmap(tiny_report(), tmp_path / "p.svg") is None
        assert "matplotlib not installed" in caplog.text

    def test_heatmap(self, tmp_path: Path) -> None:
        pytest.importorskip("matplotlib")
        written = write_census_plots(tiny_report(), tmp_path / "plots")
        assert [p.name for p in written] == ["profiles.csv", "defects.csv", "profiles.svg"]
        assert "<svg" in written[-1].read_text()

    def test_witness_columns_follow_the_ball(self, tmp_path: Path) -> None:
        report = tiny_report()
        report.profiles["busemann-up"].witnesses = {"bUp3": -6, "bDown3": 6}
        report.profiles["antipodal"].witnesses = {"bDown3": 2, "bUp3": 2}
        assert np.array_equal(profile_matrix(report)[1], [0, 1, 1, 2, 2])
        profiles, _ = write_tables(report, tmp_path)
        assert profiles.read_text().splitlines()[:2] == ["profile,,3,5,bUp3,bDown3", "busemann-up,0,1,-1,-6,6"]


class TestWireNames:
    def test_capital_n_survives_camel_case(self) -> None:
        assert AlmostFailure(n=0, s=5, t=17, defect=2).dump() == {"N": 0, "s": 5, "t": 17, "defect": 2}
        side = AlgebraicSide(found=True, sigma="r0", n=3).dump()
        assert side["N"] == 3
        assert "n" not in side
        assert AlgebraicSide.model_validate({"found": False, "N": 2}).n == 2
