from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

from . import conventions


class SierpolySettings(BaseSettings):
    cache_dir: Path = Path(conventions.CACHE_DIR).expanduser()
    materialize_limit: int = conventions.MATERIALIZE_LIMIT
    max_level: int = conventions.MAX_LEVEL
    probe_window: int = conventions.PROBE_WINDOW
    profile_window: int = conventions.PROFILE_WINDOW
    isometry_step_budget: int = conventions.ISOMETRY_STEP_BUDGET
    max_counterexamples: int = conventions.MAX_COUNTEREXAMPLES
    log_level: str = "warning"

    model_config = SettingsConfigDict(env_prefix="SIERPOLY_")
