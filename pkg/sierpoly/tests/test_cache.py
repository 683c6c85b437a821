"""Tests for the content-addressed result cache."""

from __future__ import annotations

import json
import logging
from pathlib import Path

import pytest

from sierpoly import conventions
from sierpoly.cache import ResultCache, cache_key
from sierpoly.params import CensusParams, RunConfig


def gh_config(**overrides) -> RunConfig:
    fields = {"command": "gh", "r": 6, "xi": "(4)*", "radius": 2}
    fields.update(overrides)
    return RunConfig(**fields)


class TestCacheKey:
    def test_stable_for_equal_configs(self) -> None:
        assert cache_key(gh_config()) == cache_key(gh_config())

    def test_changes_with_any_field(self) -> None:
        keys = {
            cache_key(gh_config()),
            cache_key(gh_config(radius=3)),
            cache_key(gh_config(stability="certified")),
            cache_key(gh_config(command="ball")),
        }
        assert len(keys) == 4

    def test_search_budgets_are_part_of_the_key(self) -> None:
        base = gh_config(window=2, max_level=12, step_budget=2_000_000)
        keys = {
            cache_key(base),
            cache_key(gh_config(window=3, max_level=12, step_budget=2_000_000)),
            cache_key(gh_config(window=2, max_level=10, step_budget=2_000_000)),
            cache_key(gh_config(window=2, max_level=12, step_budget=1000)),
        }
        assert len(keys) == 4

    def test_profile_window_is_part_of_the_key(self) -> None:
        census = CensusParams()
        assert cache_key(RunConfig(command="census", census=census, profile_window=2)) != cache_key(
            RunConfig(command="census", census=census, profile_window=3)
        )

    def test_unset_fields_do_not_matter(self) -> None:
        assert "eta" not in gh_config().normalized()

    def test_nested_census_params(self) -> None:
        base = RunConfig(command="census", xi="(4)*", census=CensusParams())
        wider = RunConfig(command="census", xi="(4)*", census=CensusParams(radius=8))
        assert cache_key(base) != cache_key(wider)


class TestResultCache:
    def test_round_trip(self, cache_dir: Path) -> None:
        cache = ResultCache(cache_dir)
        config = gh_config()
        assert cache.get(config) is None
        path = cache.put(config, {"level": 3})
        assert path.parent == cache_dir
        assert path.suffix == conventions.CACHE_SUFFIX
        assert cache.get(config) == {"level": 3}

    def test_entry_layout(self, cache_dir: Path) -> None:
        cache = ResultCache(cache_dir)
        entry = json.loads(cache.put(gh_config(), {"level": 3}).read_text())
        assert entry["schemaVersion"] == conventions.SCHEMA_VERSION
        assert entry["command"] == "gh"
        assert entry["config"]["radius"] == 2

    def test_corrupt_entry_is_a_miss(self, cache_dir: Path, caplog: pytest.LogCaptureFixture) -> None:
        cache = ResultCache(cache_dir)
        config = gh_config()
        cache.put(config, {"level": 3}).write_text("{not json")
        with caplog.at_level(logging.WARNING, logger="sierpoly.cache"):
            assert cache.get(config) is None
        assert "Unreadable cache entry" in caplog.text

    def test_old_schema_is_a_miss(self, cache_dir: Path) -> None:
        cache = ResultCache(cache_dir)
        config = gh_config()
        path = cache.put(config, {"level": 3})
        entry = json.loads(path.read_text())
        entry["schemaVersion"] = conventions.SCHEMA_VERSION + 1
        path.write_text(json.dumps(entry))
        assert cache.get(config) is None

    def test_clear(self, cache_dir: Path) -> None:
        cache = ResultCache(cache_dir)
        cache.put(gh_config(), {})
        cache.put(gh_config(radius=5), {})
        (cache_dir / "notes.txt").write_text("kept")
        assert cache.clear() == 2
        assert (cache_dir / "notes.txt").exists()
        assert cache.clear() == 0

    def test_no_temp_files_left(self, cache_dir: Path) -> None:
        ResultCache(cache_dir).put(gh_config(), {"level": 1})
        assert [p.name for p in cache_dir.iterdir() if p.name.startswith(".")] == []


class TestSettings:
    def test_env_overrides_cache_dir(self, settings, cache_dir: Path) -> None:
        assert settings.cache_dir == cache_dir

    def test_env_overrides_budgets(self, monkeypatch: pytest.MonkeyPatch) -> None:
        from sierpoly.config import SierpolySettings

        monkeypatch.setenv("SIERPOLY_MAX_LEVEL", "5")
        monkeypatch.setenv("SIERPOLY_PROFILE_WINDOW", "3")
        settings = SierpolySettings()
        assert settings.max_level == 5
        assert settings.profile_window == 3
