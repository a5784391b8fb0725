"""Tests for the layered CLI configuration."""

import json
import os

import pytest

from gerbe_holonomy.cli.utils.config import (
    Settings,
    get_config,
    init_config,
    resolve_seed,
    validate_config,
)
from gerbe_holonomy.exceptions import InputError


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch, tmp_path):
    """No user config file and no configuration variables from the outer shell."""
    monkeypatch.setenv("HOME", str(tmp_path))
    for key in list(os.environ):
        if key.startswith("GERBE_HOLONOMY_") or key == "GERBE_SEED":
            monkeypatch.delenv(key)


def test_packaged_defaults_match_the_model():
    settings = validate_config(init_config())
    assert settings == Settings()
    assert settings.samples.paths == 20
    assert settings.quadrature_n == 256


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("GERBE_HOLONOMY_SAMPLES_PATHS", "40")
    monkeypatch.setenv("GERBE_HOLONOMY_LOG_LEVEL", "debug")
    monkeypatch.setenv("GERBE_HOLONOMY_DISPLAY_DECIMAL_PLACES", "6")
    settings = validate_config(init_config())
    assert settings.samples.paths == 40
    assert settings.log_level == "DEBUG"
    assert settings.display.decimal_places == 6


def test_explicit_file_is_merged(tmp_path):
    path = tmp_path / "custom.json"
    path.write_text(json.dumps({"samples": {"points": 7}, "tolerance": 1e-6}), encoding="utf-8")
    settings = validate_config(init_config(str(path)))
    assert settings.samples.points == 7
    assert settings.samples.paths == 20
    assert settings.tolerance == 1e-6
    assert get_config("samples.points", config_file=str(path)) == 7
    assert get_config("samples.missing", default="none", config_file=str(path)) == "none"


def test_missing_explicit_file(tmp_path):
    with pytest.raises(InputError):
        init_config(str(tmp_path / "absent.json"))


def test_malformed_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(InputError):
        init_config(str(path))


@pytest.mark.parametrize(
    "variable, value, key",
    [
        ("GERBE_HOLONOMY_QUADRATURE_N", "7", "quadrature_n"),
        ("GERBE_HOLONOMY_TOLERANCE", "-1", "tolerance"),
        ("GERBE_HOLONOMY_LOG_LEVEL", "chatty", "log_level"),
    ],
)
def test_invalid_values(monkeypatch, variable, value, key):
    monkeypatch.setenv(variable, value)
    with pytest.raises(InputError) as info:
        validate_config(init_config())
    assert key in str(info.value)


def test_scenario_overrides():
    settings = Settings().with_overrides({"paths": 3, "tolerance": 1e-6, "resolution": 2})
    assert settings.samples.paths == 3
    assert settings.tolerance == 1e-6
    assert settings.resolution == 2
    assert Settings().samples.paths == 20


def test_seed_precedence(monkeypatch):
    settings = Settings(seed=9)
    assert resolve_seed(None, None, settings) == 9
    assert resolve_seed(None, 4, settings) == 4
    monkeypatch.setenv("GERBE_SEED", "11")
    assert resolve_seed(None, 4, settings) == 11
    assert resolve_seed(2, 4, settings) == 2
    monkeypatch.setenv("GERBE_SEED", "eleven")
    with pytest.raises(InputError):
        resolve_seed(None, 4, settings)
