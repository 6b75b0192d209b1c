import json

import pytest

from coopeq.core.errors import ConfigError
from coopeq.core.settings import (
    DEFAULT_GRID,
    DEFAULT_TOLERANCE,
    Settings,
    ensure_app_dirs,
    get_config_path,
    get_logs_dir,
    load_settings,
)


def _write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def test_defaults_without_file(tmp_path):
    s = load_settings(tmp_path / "none.json")
    assert s == Settings()
    assert s.tolerance == DEFAULT_TOLERANCE
    assert s.grid == DEFAULT_GRID


def test_reads_values(tmp_path):
    s = load_settings(_write(tmp_path / "c.json", {"tolerance": 1e-7, "grid": 40, "log_level": "debug"}))
    assert s.tolerance == 1e-7
    assert s.grid == 40
    assert s.log_level == "debug"


def test_unknown_keys_ignored(tmp_path):
    s = load_settings(_write(tmp_path / "c.json", {"colour": "blue"}))
    assert s == Settings()


@pytest.mark.parametrize(
    "data",
    [
        {"tolerance": 0},
        {"tolerance": "small"},
        {"tolerance": True},
        {"grid": 0},
        {"grid": 2.5},
        {"grid": True},
        {"output_format": "yaml"},
        {"log_level": "LOUD"},
    ],
)
def test_invalid_values(tmp_path, data):
    with pytest.raises(ConfigError):
        load_settings(_write(tmp_path / "c.json", data))


def test_malformed_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text("{grid: 3", encoding="utf-8")
    with pytest.raises(ConfigError, match="Cannot read"):
        load_settings(path)


def test_not_an_object(tmp_path):
    with pytest.raises(ConfigError, match="JSON object"):
        load_settings(_write(tmp_path / "c.json", [1, 2]))


def test_overrides_skip_none():
    s = Settings().with_overrides(tolerance=None, grid=7, output_format=None)
    assert s.grid == 7
    assert s.tolerance == DEFAULT_TOLERANCE
    assert s.output_format == "text"


def test_home_override(coopeq_home):
    assert get_config_path() == coopeq_home / "config.json"
    ensure_app_dirs()
    assert coopeq_home.is_dir()
    assert get_logs_dir() == coopeq_home / "logs"
