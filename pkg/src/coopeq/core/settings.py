"""App paths and settings using appdirs."""

import json
import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

from .errors import ConfigError

try:
    import appdirs
    _appdirs_available = True
except ImportError:
    _appdirs_available = False

logger = logging.getLogger(__name__)

APP_NAME = "CoopEq"

DEFAULT_TOLERANCE = 1e-9
DEFAULT_PIVOT_TOLERANCE = 1e-10
DEFAULT_CASE_TOLERANCE = 1e-10
# slack on the sum of a vector read back from an LP or bilinear solve
SOLVER_SUM_TOLERANCE = 1e-6
DEFAULT_GRID = 20


@dataclass(frozen=True)
class Settings:
    """User-tunable defaults. CLI flags override these."""
    tolerance: float = DEFAULT_TOLERANCE
    grid: int = DEFAULT_GRID
    output_format: str = "text"  # "text" | "json"
    log_level: str = "WARNING"
    log_to_file: bool = True

    def with_overrides(self, **overrides: Any) -> "Settings":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


def _get_app_data_dir() -> Path:
    """Get the per-user data dir, or $COOPEQ_HOME when set."""
    override = os.environ.get("COOPEQ_HOME")
    if override:
        return Path(override)
    if _appdirs_available:
        base = appdirs.user_data_dir(APP_NAME, APP_NAME)
    else:
        base = os.environ.get("APPDATA", os.path.expanduser("~"))
        base = os.path.join(base, APP_NAME)
    return Path(base)


def get_config_path() -> Path:
    """Path to the optional JSON config file."""
    return _get_app_data_dir() / "config.json"


def get_logs_dir() -> Path:
    """Path to logs directory."""
    d = _get_app_data_dir() / "logs"
    d.mkdir(parents=True, exist_ok=True)
    return d


def ensure_app_dirs() -> None:
    """Create app data directories if they don't exist."""
    _get_app_data_dir().mkdir(parents=True, exist_ok=True)
    get_logs_dir()


def load_settings(path: Path | None = None) -> Settings:
    """Read settings from the config file. Missing file means defaults."""
    path = path or get_config_path()
    if not path.exists():
        return Settings()
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    if not isinstance(raw, dict):
        raise ConfigError(f"Config {path} must hold a JSON object")

    known = {f.name for f in fields(Settings)}
    values: dict[str, Any] = {}
    for key, value in raw.items():
        if key not in known:
            logger.warning("Ignoring unknown config key %r in %s", key, path)
            continue
        values[key] = value

    settings = Settings(**values)
    _validate(settings, path)
    return settings


def _validate(settings: Settings, path: Path) -> None:
    if isinstance(settings.tolerance, bool) or not isinstance(settings.tolerance, (int, float)) or not settings.tolerance > 0:
        raise ConfigError(f"{path}: tolerance must be a positive number, got {settings.tolerance!r}")
    if isinstance(settings.grid, bool) or not isinstance(settings.grid, int) or settings.grid < 1:
        raise ConfigError(f"{path}: grid must be a positive integer, got {settings.grid!r}")
    if settings.output_format not in ("text", "json"):
        raise ConfigError(f"{path}: output_format must be 'text' or 'json'")
    if logging.getLevelName(str(settings.log_level).upper()) not in range(0, 60):
        raise ConfigError(f"{path}: unknown log_level {settings.log_level!r}")
