"""
Configuration management for the gerbe-holonomy CLI.

Settings come from the packaged defaults, a user or explicit config
file, environment variables and finally the scenario's own ``settings``
section, in increasing order of precedence.
"""

import copy
import json
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from ...exceptions import InputError

ENV_PREFIX = "GERBE_HOLONOMY_"
SEED_VARIABLE = "GERBE_SEED"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class SampleSettings(BaseModel):
    paths: int = Field(20, ge=0, description="Sampled paths for exponentiated checks")
    points: int = Field(100, ge=0, description="Sampled points for pointwise checks")
    random_loops: int = Field(50, ge=0, description="Random loops per sampled identity")


class DisplaySettings(BaseModel):
    decimal_places: int = Field(3, ge=0, le=17, description="Digits shown for residuals")
    table_max_width: int = Field(120, ge=40)


class Settings(BaseModel):
    """Validated configuration of one run."""

    log_level: str = Field("WARNING", description="Level of the gerbe_holonomy logger")
    log_file: Optional[str] = Field(None, description="Optional plain-text log file")
    tolerance: float = Field(1e-8, gt=0, description="Tolerance of numerical checks")
    exact_tolerance: float = Field(0.0, ge=0, description="Tolerance of exact checks")
    quadrature_n: int = Field(256, ge=2, description="Starting Simpson subintervals per segment")
    fd_step: float = Field(1e-3, gt=0, description="Finite-difference step along families")
    fd_tolerance: float = Field(1e-4, gt=0, description="Tolerance of finite-difference checks")
    nerve_cap: int = Field(10**7, ge=1, description="Largest nerve level enumerated")
    group_order_cap: int = Field(64, ge=1, description="Largest group handled by h2")
    resolution: int = Field(0, ge=0, description="Grid for positive-dimensional fixed sets")
    seed: int = Field(0, description="Default seed of sampled checks")
    samples: SampleSettings = Field(default_factory=SampleSettings)
    display: DisplaySettings = Field(default_factory=DisplaySettings)

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"log level must be one of {', '.join(LOG_LEVELS)}")
        return level

    @field_validator("quadrature_n")
    @classmethod
    def validate_even(cls, v: int) -> int:
        if v % 2:
            raise ValueError("Simpson's rule needs an even number of subintervals")
        return v

    def with_overrides(self, overrides: Dict[str, Any]) -> "Settings":
        """Copy with a scenario's flat ``settings`` section applied."""
        data = self.model_dump()
        for key, value in overrides.items():
            if key in data["samples"]:
                data["samples"][key] = value
            else:
                data[key] = value
        return validate_config(data)


def get_config_path(config_file: Optional[str] = None) -> Path:
    """
    Get the path to the configuration file.

    Args:
        config_file: Optional path to a specific config file

    Returns:
        The explicit file, else the user config if present, else the
        packaged defaults
    """
    if config_file:
        return Path(config_file)

    user_config_file = Path.home() / ".config" / "gerbe-holonomy" / "config.json"
    if user_config_file.exists():
        return user_config_file

    return default_config_path()


def default_config_path() -> Path:
    return Path(__file__).parent.parent / "config" / "default.json"


def load_config(config_file: Optional[str] = None) -> Dict[str, Any]:
    """
    Load configuration from file.

    Raises:
        InputError: the file exists but is not valid JSON
    """
    config_path = get_config_path(config_file)

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError:
        if config_file:
            raise InputError(f"Configuration file not found: {config_path}") from None
        return {}
    except json.JSONDecodeError as e:
        raise InputError(f"Error parsing configuration file {config_path}: {e}") from e


def merge_config(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive merge; values of ``override`` win."""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            merged[key] = value
    return merged


def get_config(key: str, default: Any = None, config_file: Optional[str] = None) -> Any:
    """
    Get a specific configuration value.

    Args:
        key: Configuration key (supports dot notation for nested keys)
        default: Default value if key is not found
        config_file: Optional path to a specific config file
    """
    config = init_config(config_file)

    value: Any = config
    try:
        for k in key.split("."):
            value = value[k]
        return value
    except (KeyError, TypeError):
        return default


def init_config(config_file: Optional[str] = None) -> Dict[str, Any]:
    """
    Packaged defaults, overlaid with the config file and the environment.

    Args:
        config_file: Optional path to a specific config file

    Returns:
        Configuration dictionary
    """
    defaults = load_config(str(default_config_path()))
    config = merge_config(defaults, load_config(config_file))
    return override_with_env_vars(config)


def _env_key_path(config: Dict[str, Any], parts: List[str]) -> List[str]:
    """Split ``LOG_LEVEL``-style parts into config keys, preferring existing keys."""
    path: List[str] = []
    current: Any = config
    i = 0
    while i < len(parts):
        for j in range(len(parts), i, -1):
            candidate = "_".join(parts[i:j])
            if isinstance(current, dict) and candidate in current:
                break
        else:
            j = i + 1
            candidate = parts[i]
        path.append(candidate)
        current = current.get(candidate) if isinstance(current, dict) else None
        i = j
    return path


def override_with_env_vars(config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Override configuration with environment variables.

    Environment variables are prefixed with GERBE_HOLONOMY_ and use
    underscores between nested keys (GERBE_HOLONOMY_SAMPLES_PATHS=40);
    values are parsed as JSON when possible.
    """
    for env_key, env_value in sorted(os.environ.items()):
        if not env_key.startswith(ENV_PREFIX):
            continue
        parts = env_key[len(ENV_PREFIX):].lower().split("_")
        keys = _env_key_path(config, parts)

        try:
            parsed_value = json.loads(env_value)
        except json.JSONDecodeError:
            parsed_value = env_value

        current = config
        for k in keys[:-1]:
            if not isinstance(current.get(k), dict):
                current[k] = {}
            current = current[k]
        current[keys[-1]] = parsed_value

    return config


def validate_config(config: Dict[str, Any]) -> Settings:
    """
    Validate configuration values.

    Raises:
        InputError: a value is missing its expected type or range
    """
    try:
        return Settings.model_validate(config)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first["loc"])
        raise InputError(f"invalid configuration value for '{key}': {first['msg']}") from e


def resolve_seed(option_seed: Optional[int], scenario_seed: Optional[int], settings: Settings) -> int:
    """--seed, then GERBE_SEED, then the scenario's seed, then the configured seed."""
    if option_seed is not None:
        return option_seed
    env_seed = os.environ.get(SEED_VARIABLE)
    if env_seed is not None:
        try:
            return int(env_seed)
        except ValueError:
            raise InputError(f"{SEED_VARIABLE} must be an integer, got '{env_seed}'") from None
    if scenario_seed is not None:
        return scenario_seed
    return settings.seed
