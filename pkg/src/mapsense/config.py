"""Deployment configuration: data paths, filter parameters, listen address.

Configuration comes from a JSON file; every field can be overridden by a
`MAPSENSE_*` environment variable, and the CLI adds flag-level overrides on
top. Relative paths are resolved against the config file's directory.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping

from .errors import FormatError
from .geo import BoundingBox

ENV_PREFIX = "MAPSENSE_"


@dataclass(frozen=True, slots=True)
class EngineConfig:
    ontology: Path
    lemmas: Path | None = None
    stopwords: Path | None = None
    synonyms: Path | None = None
    gazetteer: Path | None = None
    snapshot: Path | None = None
    beta: float = 0.5
    gamma: float = 0.20
    rounding: str = "nearest"
    related_radius: float = 0.01
    default_bbox: BoundingBox | None = None
    host: str = "127.0.0.1"
    port: int = 8000


_PATH_KEYS = ("ontology", "lemmas", "stopwords", "synonyms", "gazetteer", "snapshot")
_FLOAT_KEYS = ("beta", "gamma", "related_radius")


def _parse_bbox(value) -> BoundingBox:
    if isinstance(value, str):
        value = [part.strip() for part in value.split(",")]
    return BoundingBox.from_sequence(value)


def load_config(path: str | Path) -> EngineConfig:
    """Read a JSON config file and apply MAPSENSE_* environment overrides."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise FormatError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", line=exc.lineno, source=str(path)) from exc
    if not isinstance(raw, Mapping):
        raise FormatError("config must be a JSON object", source=str(path))
    return _build(raw, base_dir=path.parent)


_ALL_KEYS = (
    "ontology", "lemmas", "stopwords", "synonyms", "gazetteer", "snapshot",
    "beta", "gamma", "rounding", "related_radius", "default_bbox", "host", "port",
)


def _build(raw: Mapping, base_dir: Path) -> EngineConfig:
    values: dict = dict(raw)
    for key in _ALL_KEYS:
        env = os.environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            values[key] = env

    unknown = set(values) - set(_ALL_KEYS)
    if unknown:
        raise FormatError(f"unknown config keys: {sorted(unknown)}")
    if "ontology" not in values:
        raise FormatError("config needs at least an 'ontology' path")

    kwargs: dict = {}
    try:
        for key in _PATH_KEYS:
            if values.get(key) is not None:
                candidate = Path(values[key])
                kwargs[key] = candidate if candidate.is_absolute() else (base_dir / candidate)
        for key in _FLOAT_KEYS:
            if key in values and values[key] is not None:
                kwargs[key] = float(values[key])
        if values.get("rounding") is not None:
            kwargs["rounding"] = str(values["rounding"])
        if values.get("default_bbox") is not None:
            kwargs["default_bbox"] = _parse_bbox(values["default_bbox"])
        if values.get("host") is not None:
            kwargs["host"] = str(values["host"])
        if values.get("port") is not None:
            kwargs["port"] = int(values["port"])
    except (TypeError, ValueError) as exc:
        raise FormatError(f"invalid config value: {exc}") from exc
    return EngineConfig(**kwargs)


def with_overrides(
    config: EngineConfig,
    beta: float | None = None,
    gamma: float | None = None,
    rounding: str | None = None,
    bbox: str | None = None,
) -> EngineConfig:
    """Apply CLI flag overrides on top of a loaded config."""
    changes: dict = {}
    if beta is not None:
        changes["beta"] = beta
    if gamma is not None:
        changes["gamma"] = gamma
    if rounding is not None:
        changes["rounding"] = rounding
    if bbox is not None:
        changes["default_bbox"] = _parse_bbox(bbox)
    return replace(config, **changes) if changes else config
