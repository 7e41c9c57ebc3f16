"""Run configuration: shipped YAML defaults, then environment, then explicit overrides."""

import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

from ..models import RunConfig

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).with_name("defaults.yaml")

ENV_OVERRIDES = {
    "PLABIC_SEED": "seed",
    "PLABIC_THREADS": "threads",
}


def load_defaults(path: Optional[Path] = None) -> Dict[str, Any]:
    with open(path or DEFAULTS_PATH) as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{path or DEFAULTS_PATH} must hold a mapping")
    return data


def load_config(overrides: Optional[Mapping[str, Any]] = None, path: Optional[Path] = None) -> RunConfig:
    """
    Build the run configuration.

    Args:
        overrides: explicit values, e.g. from command-line flags; None entries are ignored
        path: YAML file to read instead of the shipped defaults

    Returns:
        Validated RunConfig
    """
    data = load_defaults(path)
    for variable, field in ENV_OVERRIDES.items():
        value = os.getenv(variable)
        if value:
            logger.debug("%s=%s overrides %s", variable, value, field)
            data[field] = value
    for key, value in (overrides or {}).items():
        if value is not None:
            data[key] = value
    return RunConfig(**data)


__all__ = ["DEFAULTS_PATH", "load_config", "load_defaults"]
