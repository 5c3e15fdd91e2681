# -*- coding: utf-8 -*-
"""
runconfig.py - Run configuration
================================

A run configuration is one YAML document. Every key is optional; missing
keys take the defaults in foalconf. Unknown keys and invalid values raise
ConfigError naming the dotted field.

    seed: 0
    out_dir: out
    jobs: 1
    palette: {road: 0, ...}
    categories: {soc: [traffic light, ...], road: road, area_threshold: 64, ...}
    loss: {lambda_sl1: 10.0, ...}
    traffic_light: {tau: 0.05, red_hue_ranges: [[0.0, 0.0556], ...], ...}
    apce: {high_thresholds: [0.1, ...], strict: false, ...}
    schedule: {warmup_iterations: 0, all_pool_size: 100, soc_pool_size: 10}

Lookup order: explicit path, then $FOALKIT_CONFIG, then defaults only.
"""

import logging
import os
from dataclasses import dataclass, field, fields, replace
from typing import Any, Callable, Dict, Mapping, Optional

import yaml

from .foalconf import (
    CONFIG_ENV_VAR, DEFAULT_PALETTE, UNCERTAIN_ID,
    SOC_NAMES, VEHICLE_NAMES, OBJECT_NAMES,
    ROAD_NAME, VEGETATION_NAME, STREETLIGHT_NAME, TRAFFIC_LIGHT_NAME,
)
from .imagecore import ConfigError
from .losses import LossWeights
from .metrics import ApceConfig
from .oamix import CategoryConfig
from .scheduler import ScheduleSettings
from .trafficlight import TlColorParams

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = ("seed", "out_dir", "jobs", "palette", "categories", "loss",
                  "traffic_light", "apce", "schedule")

CATEGORY_NAME_KEYS = {
    "soc": list(SOC_NAMES),
    "vehicles": list(VEHICLE_NAMES),
    "objects": list(OBJECT_NAMES),
    "road": ROAD_NAME,
    "vegetation": VEGETATION_NAME,
    "streetlight": STREETLIGHT_NAME,
    "traffic_light": TRAFFIC_LIGHT_NAME,
}
CATEGORY_VALUE_KEYS = ("area_threshold", "reference_area", "p_flip", "uncertain_id")


@dataclass
class RunConfig:
    seed: int = 0
    out_dir: str = "."
    jobs: int = 1
    palette: Dict[str, int] = field(default_factory=lambda: dict(DEFAULT_PALETTE))
    categories: CategoryConfig = field(default_factory=CategoryConfig.from_palette)
    loss: LossWeights = field(default_factory=LossWeights)
    traffic_light: TlColorParams = field(default_factory=TlColorParams)
    apce: ApceConfig = field(default_factory=ApceConfig)
    schedule: ScheduleSettings = field(default_factory=ScheduleSettings)
    source: str = ""     # file the values came from, "" for defaults

    def category_names(self) -> Dict[int, str]:
        return {v: k for k, v in self.palette.items()}

    def with_overrides(self, seed: Optional[int] = None, out_dir: Optional[str] = None,
                       strict_apce: Optional[bool] = None, jobs: Optional[int] = None) -> "RunConfig":
        """Copy with command-line overrides applied; None leaves a value alone"""
        cfg = self
        if seed is not None:
            cfg = replace(cfg, seed=int(seed))
        if out_dir is not None:
            cfg = replace(cfg, out_dir=out_dir)
        if strict_apce is not None:
            cfg = replace(cfg, apce=replace(cfg.apce, strict=bool(strict_apce)))
        if jobs is not None:
            if jobs < 1:
                raise ConfigError("must be >= 1", "jobs")
            cfg = replace(cfg, jobs=int(jobs))
        return cfg


# =============================================================================
# Coercion helpers
# =============================================================================

def _coerce(value: Any, kind: Callable, name: str):
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"expected true/false, got {value!r}", name)
        return value
    if kind is int and isinstance(value, float) and not value.is_integer():
        raise ConfigError(f"expected an integer, got {value!r}", name)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", name)
    return kind(value)


def _section(doc: Mapping, name: str, allowed) -> Dict:
    section = doc.get(name)
    if section is None:
        return {}
    if not isinstance(section, Mapping):
        raise ConfigError("expected a mapping", name)
    for key in section:
        if key not in allowed:
            raise ConfigError("unknown key", f"{name}.{key}")
    return dict(section)


def _names(value: Any, name: str):
    if isinstance(value, str):
        return [value]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ConfigError("expected a category name or a list of names", name)
    return value


def _hue_ranges(value: Any, name: str):
    if not isinstance(value, list):
        raise ConfigError("expected a list of [low, high] pairs", name)
    out = []
    for i, pair in enumerate(value):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError("expected a [low, high] pair", f"{name}[{i}]")
        out.append((_coerce(pair[0], float, f"{name}[{i}]"), _coerce(pair[1], float, f"{name}[{i}]")))
    return tuple(out)


def _simple(cls, section: Dict, prefix: str, converters: Optional[Dict[str, Callable]] = None):
    """Build a flat settings dataclass from its section, numbers coerced by field type"""
    converters = converters or {}
    kwargs = {}
    for f in fields(cls):
        if f.name not in section:
            continue
        name = f"{prefix}.{f.name}"
        value = section[f.name]
        if f.name in converters:
            kwargs[f.name] = converters[f.name](value, name)
        else:
            kind = type(f.default) if f.default is not None else float
            kwargs[f.name] = _coerce(value, kind, name)
    return cls(**kwargs)


# =============================================================================
# Sections
# =============================================================================

def _palette(doc: Mapping) -> Dict[str, int]:
    raw = doc.get("palette")
    if raw is None:
        return dict(DEFAULT_PALETTE)
    if not isinstance(raw, Mapping) or not raw:
        raise ConfigError("expected a non-empty mapping of name: id", "palette")
    palette = {}
    for name, value in raw.items():
        ident = _coerce(value, int, f"palette.{name}")
        if not 0 <= ident < UNCERTAIN_ID:
            raise ConfigError(f"id must lie in [0, {UNCERTAIN_ID})", f"palette.{name}")
        palette[str(name)] = ident
    if len(set(palette.values())) != len(palette):
        raise ConfigError("category ids must be unique", "palette")
    return palette


def _categories(doc: Mapping, palette: Dict[str, int]) -> CategoryConfig:
    section = _section(doc, "categories", tuple(CATEGORY_NAME_KEYS) + CATEGORY_VALUE_KEYS)
    names = {}
    for key, default in CATEGORY_NAME_KEYS.items():
        value = section.get(key, default)
        if isinstance(default, str):
            if not isinstance(value, str):
                raise ConfigError("expected a category name", f"categories.{key}")
            names[key] = value
        else:
            names[key] = _names(value, f"categories.{key}")
    values = {}
    for key in CATEGORY_VALUE_KEYS:
        if key in section:
            kind = float if key == "p_flip" else int
            values[key] = _coerce(section[key], kind, f"categories.{key}")
    return CategoryConfig.from_palette(palette, names["soc"], names["vehicles"], names["objects"],
                                       names["road"], names["vegetation"], names["streetlight"],
                                       names["traffic_light"], **values)


def _thresholds(value: Any, name: str):
    if not isinstance(value, list):
        raise ConfigError("expected a list of numbers", name)
    return tuple(_coerce(v, float, f"{name}[{i}]") for i, v in enumerate(value))


def config_from_dict(doc: Optional[Mapping], source: str = "") -> RunConfig:
    doc = doc or {}
    if not isinstance(doc, Mapping):
        raise ConfigError("top level must be a mapping", source or "config")
    for key in doc:
        if key not in TOP_LEVEL_KEYS:
            raise ConfigError("unknown key", str(key))

    palette = _palette(doc)
    seed = _coerce(doc.get("seed", 0), int, "seed")
    jobs = _coerce(doc.get("jobs", 1), int, "jobs")
    if jobs < 1:
        raise ConfigError("must be >= 1", "jobs")
    out_dir = doc.get("out_dir", ".")
    if not isinstance(out_dir, str):
        raise ConfigError("expected a path", "out_dir")

    loss = _simple(LossWeights, _section(doc, "loss", [f.name for f in fields(LossWeights)]), "loss")
    tl = _simple(TlColorParams,
                 _section(doc, "traffic_light", [f.name for f in fields(TlColorParams)]),
                 "traffic_light",
                 {"red_hue_ranges": _hue_ranges, "green_hue_ranges": _hue_ranges})
    apce_cfg = _simple(ApceConfig, _section(doc, "apce", [f.name for f in fields(ApceConfig)]),
                       "apce", {"high_thresholds": _thresholds})
    schedule = _simple(ScheduleSettings,
                       _section(doc, "schedule", [f.name for f in fields(ScheduleSettings)]),
                       "schedule")

    return RunConfig(seed=seed, out_dir=out_dir, jobs=jobs, palette=palette,
                     categories=_categories(doc, palette), loss=loss, traffic_light=tl,
                     apce=apce_cfg, schedule=schedule, source=source)


def resolve_config_path(path: Optional[str], environ: Optional[Mapping[str, str]] = None) -> Optional[str]:
    if path:
        return path
    environ = os.environ if environ is None else environ
    return environ.get(CONFIG_ENV_VAR) or None


def load_config(path: Optional[str] = None, environ: Optional[Mapping[str, str]] = None) -> RunConfig:
    """Load the run configuration from path, $FOALKIT_CONFIG, or defaults"""
    path = resolve_config_path(path, environ)
    if path is None:
        logger.debug("no configuration file, using defaults")
        return RunConfig()
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = yaml.safe_load(f)
    except FileNotFoundError:
        raise ConfigError(f"cannot open {path}: No such file or directory", "config")
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML ({e})", "config")
    logger.info("configuration loaded from %s", path)
    return config_from_dict(doc, path)
