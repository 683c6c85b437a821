"""Content-addressed cache of command results.

An entry is ``<sha256 of the normalized RunConfig>.json`` holding the
schema version, the command, the config and the result document. The cache
only ever saves recomputation; a corrupt or foreign entry is a miss.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any

from . import conventions
from ._fileutil import atomic_write
from .params import RunConfig

logger = logging.getLogger(__name__)


def cache_key(config: RunConfig) -> str:
    canonical_json = json.dumps(config.normalized(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical_json.encode("utf-8")).hexdigest()


class ResultCache:
    def __init__(self, directory: Path) -> None:
        self.directory = Path(directory).expanduser()

    def path_for(self, config: RunConfig) -> Path:
        return self.directory / f"{cache_key(config)}{conventions.CACHE_SUFFIX}"

    def get(self, config: RunConfig) -> dict[str, Any] | None:
        path = self.path_for(config)
        if not path.exists():
            logger.debug("cache miss for %s", config.command)
            return None
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, ValueError):
            logger.warning("Unreadable cache entry %s; recomputing", path, exc_info=True)
            return None
        if (
            not isinstance(entry, dict)
            or entry.get("schemaVersion") != conventions.SCHEMA_VERSION
            or entry.get("config") != config.normalized()
        ):
            logger.warning("Stale cache entry %s; recomputing", path)
            return None
        logger.debug("cache hit for %s at %s", config.command, path)
        return entry["result"]

    def put(self, config: RunConfig, result: dict[str, Any]) -> Path:
        entry = {
            "schemaVersion": conventions.SCHEMA_VERSION,
            "command": config.command,
            "config": config.normalized(),
            "result": result,
        }
        return atomic_write(self.path_for(config), json.dumps(entry, indent=2), prefix=".cache-")

    def clear(self) -> int:
        if not self.directory.is_dir():
            return 0
        removed = 0
        for path in self.directory.glob(f"*{conventions.CACHE_SUFFIX}"):
            path.unlink(missing_ok=True)
            removed += 1
        logger.info("removed %d cache entries from %s", removed, self.directory)
        return removed
