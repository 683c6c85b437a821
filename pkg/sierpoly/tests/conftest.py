"""Shared fixtures: polygon specs, an isolated cache directory and settings."""

from __future__ import annotations

from pathlib import Path

import pytest

from sierpoly.config import SierpolySettings
from sierpoly.core import PolygonSpec, make_spec


@pytest.fixture
def spec6() -> PolygonSpec:
    return make_spec(6)


@pytest.fixture
def spec5() -> PolygonSpec:
    return make_spec(5)


@pytest.fixture
def spec3() -> PolygonSpec:
    return make_spec(3)


@pytest.fixture
def spec7() -> PolygonSpec:
    return make_spec(7)


@pytest.fixture
def cache_dir(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Point every cache lookup at a per-test directory."""
    directory = tmp_path / "cache"
    monkeypatch.setenv("SIERPOLY_CACHE_DIR", str(directory))
    return directory


@pytest.fixture
def settings(cache_dir: Path) -> SierpolySettings:
    return SierpolySettings()
