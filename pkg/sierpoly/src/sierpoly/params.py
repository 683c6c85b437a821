"""Run parameters as YAML files.

A ``RunConfig`` describes one CLI invocation completely; its normalized
dict is what the result cache hashes. ``CensusParams`` is the nested block
holding the boundary census knobs.

Usage::

    from sierpoly.params import load_census, save

    params = load_census(Path("sierpoly.yaml"))
    params.radius = 8
    save(Path("sierpoly.yaml"), params)
"""

from __future__ import annotations

import dataclasses
import logging
import typing
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import yaml

from . import conventions
from ._fileutil import atomic_write

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Schema
# ---------------------------------------------------------------------------


@dataclass
class LevelRange:
    """Inclusive range of hole levels m."""

    start: int = 2
    stop: int = 7

    def levels(self) -> range:
        return range(self.start, self.stop + 1)


@dataclass
class ShiftRange:
    """Inclusive range of shifts t applied to the antipodal midpoints."""

    low: int = -3
    high: int = 3

    def shifts(self) -> range:
        return range(self.low, self.high + 1)


@dataclass
class CensusParams:
    levels: LevelRange = field(default_factory=LevelRange)
    radius: int = 6
    shifts: ShiftRange = field(default_factory=ShiftRange)
    n_budget: int | None = None  # None = penultimate sample time
    ray_depth: int = 6
    witness_depth: int | None = None  # None = min(levels.stop, ray_depth) - 2

    def effective_witness_depth(self) -> int:
        """Deepest frame level whose gluing vertices join the profile domain."""
        if self.witness_depth is not None:
            return self.witness_depth
        return min(self.levels.stop, self.ray_depth) - 2

    def validate(self) -> None:
        if self.levels.start < 2 or self.levels.stop < self.levels.start:
            raise ValueError(f"bad level range {self.levels.start}..{self.levels.stop}")
        if self.shifts.high < self.shifts.low:
            raise ValueError(f"bad shift range {self.shifts.low}..{self.shifts.high}")
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")
        if self.ray_depth < 2:
            raise ValueError("ray depth must be at least 2")
        deepest = min(self.levels.stop, self.ray_depth) - 2
        if self.witness_depth is not None and self.witness_depth > deepest:
            raise ValueError(
                f"witness depth {self.witness_depth} exceeds {deepest}: profiles there need two later samples"
            )


@dataclass
class RunConfig:
    """Everything that determines the output of one command.

    The budget fields hold the effective settings, so changing any of them
    in the environment selects a different cache entry.
    """

    command: str = ""
    r: int = 6
    xi: str | None = None
    eta: str | None = None
    radius: int | None = None
    stability: str = "heuristic"
    window: int | None = None
    profile_window: int | None = None
    max_level: int | None = None
    step_budget: int | None = None
    census: CensusParams | None = None

    def normalized(self) -> dict[str, Any]:
        """Plain dict without unset fields, in declaration order."""
        return {key: value for key, value in asdict(self).items() if value is not None}


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _optional_dataclass(hint: Any) -> type | None:
    """The dataclass inside ``X`` or ``X | None``, if any."""
    candidates = typing.get_args(hint) or (hint,)
    for candidate in candidates:
        if isinstance(candidate, type) and dataclasses.is_dataclass(candidate):
            return candidate
    return None


def _nested_from_dict(cls: type, data: dict[str, Any]) -> Any:
    """Instantiate a dataclass tree from a dict, ignoring unknown keys."""
    try:
        hints = typing.get_type_hints(cls)
    except (NameError, AttributeError, TypeError):
        hints = {}

    filtered = {}
    for fld in dataclasses.fields(cls):
        if fld.name not in data:
            continue
        value = data[fld.name]
        nested = _optional_dataclass(hints.get(fld.name))
        if nested is not None and isinstance(value, dict):
            value = _nested_from_dict(nested, value)
        filtered[fld.name] = value
    return cls(**filtered)


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------


def params_path(directory: Path) -> Path:
    return directory / conventions.PARAMS_FILENAME


def load_census(path: Path) -> CensusParams:
    """Census block of a parameter file; accepts a bare block or a full RunConfig.

    A missing or unreadable file gives the defaults.
    """
    raw = _read(path)
    block = raw.get("census", raw)
    params = _nested_from_dict(CensusParams, block if isinstance(block, dict) else {})
    params.validate()
    return params


def _read(path: Path) -> dict[str, Any]:
    if not path.exists():
        return {}
    try:
        raw = yaml.safe_load(path.read_text())
    except (OSError, yaml.YAMLError):
        logger.warning("Failed to read run parameters from %s", path, exc_info=True)
        return {}
    return raw if isinstance(raw, dict) else {}


def save(path: Path, config: RunConfig | CensusParams) -> Path:
    content = yaml.dump(asdict(config), default_flow_style=False, sort_keys=False)
    return atomic_write(path, content, prefix=".params-")
