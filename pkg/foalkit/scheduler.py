# -*- coding: utf-8 -*-
"""
scheduler.py - Dual feedback sample scheduling
==============================================

Each domain keeps the SOC appearance loss and the global reconstruction
loss of its previous iteration. When the SOC loss is strictly larger the
next sample is drawn from the SOC pool (samples showing a large enough
small-object region), otherwise from the whole dataset.

A SchedulerState has one writer: the training loop that owns it.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .foalconf import WARMUP_ITERATIONS, SYNTHETIC_ALL_POOL, SYNTHETIC_SOC_POOL
from .imagecore import ConfigError, FoalError, LabelMap, as_labels, connected_components
from .oamix import DOMAINS, CategoryConfig

logger = logging.getLogger(__name__)

POOL_SOC = "soc"
POOL_ALL = "all"


class EmptyDatasetError(FoalError):
    """A sample pool that must hold at least one id is empty"""
    pass


class NegativeLossError(FoalError):
    """Feedback signal is negative or not a finite number"""
    def __init__(self, name: str, value: float):
        self.name = name
        self.value = value
        super().__init__(f"{name} must be a finite value >= 0, got {value}")


# =============================================================================
# Sample index
# =============================================================================

@dataclass
class SampleIndex:
    id: str
    label_path: str = ""
    image_path: str = ""
    has_soc: bool = False
    soc_area: int = 0
    height: int = 0
    width: int = 0

    @classmethod
    def from_labels(cls, sample_id: str, labels: LabelMap, cfg: CategoryConfig,
                    label_path: str = "", image_path: str = "") -> "SampleIndex":
        """Index one label map: soc_area is its largest SOC component"""
        labels = as_labels(labels)
        h, w = labels.shape
        area = 0
        for category in sorted(cfg.soc_set):
            for region in connected_components(labels == category, category):
                area = max(area, region.area)
        return cls(sample_id, label_path, image_path,
                   area > cfg.effective_threshold(h, w), area, h, w)

    def to_dict(self) -> Dict:
        return {
            "id": self.id,
            "label_path": self.label_path,
            "image_path": self.image_path,
            "has_soc": self.has_soc,
            "soc_area": self.soc_area,
            "height": self.height,
            "width": self.width,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "SampleIndex":
        return cls(str(d["id"]), d.get("label_path", ""), d.get("image_path", ""),
                   bool(d.get("has_soc", False)), int(d.get("soc_area", 0)),
                   int(d.get("height", 0)), int(d.get("width", 0)))


def build_soc_sets(index: Sequence[SampleIndex],
                   cfg: Optional[CategoryConfig] = None) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """
    (soc_ids, all_ids) in index order.

    With cfg, membership is re-evaluated against cfg's threshold for each
    sample's frame size; without it the stored has_soc flags are used.
    """
    if not index:
        raise EmptyDatasetError("sample index is empty")
    soc_ids = []
    for entry in index:
        if cfg is None:
            member = entry.has_soc
        elif entry.height and entry.width:
            member = entry.soc_area > cfg.effective_threshold(entry.height, entry.width)
        else:
            member = entry.soc_area > cfg.area_threshold
        if member:
            soc_ids.append(entry.id)
    return tuple(soc_ids), tuple(entry.id for entry in index)


# =============================================================================
# State
# =============================================================================

@dataclass(frozen=True)
class ScheduleSettings:
    warmup_iterations: int = WARMUP_ITERATIONS
    all_pool_size: int = SYNTHETIC_ALL_POOL
    soc_pool_size: int = SYNTHETIC_SOC_POOL

    def __post_init__(self):
        if self.warmup_iterations < 0:
            raise ConfigError("must be >= 0", "schedule.warmup_iterations")
        if self.all_pool_size < 1:
            raise ConfigError("must be >= 1", "schedule.all_pool_size")
        if not 0 <= self.soc_pool_size <= self.all_pool_size:
            raise ConfigError("must lie in [0, all_pool_size]", "schedule.soc_pool_size")


@dataclass
class DomainState:
    all_ids: Tuple[str, ...]
    soc_ids: Tuple[str, ...]
    rng: np.random.Generator
    z_soc_prev: Optional[float] = None      # None until the first update
    z_global_prev: Optional[float] = None
    iteration: int = 0


@dataclass
class SchedulerState:
    domains: Dict[str, DomainState]
    rng_seed: int
    settings: ScheduleSettings = field(default_factory=ScheduleSettings)

    def domain(self, name: str) -> DomainState:
        if name not in self.domains:
            raise ConfigError(f"unknown domain {name!r}", "domain")
        return self.domains[name]


@dataclass
class Draw:
    domain: str
    sample_id: str
    pool: str
    iteration: int


def new_state(pools: Mapping[str, Tuple[Sequence[str], Sequence[str]]], seed: int,
              settings: Optional[ScheduleSettings] = None) -> SchedulerState:
    """
    Fresh state from per-domain (soc_ids, all_ids).

    Every domain gets its own random stream spawned from seed, so feeding one
    domain never shifts the draws of the other.
    """
    settings = settings or ScheduleSettings()
    streams = np.random.SeedSequence(seed).spawn(len(DOMAINS))
    domains = {}
    for name, stream in zip(DOMAINS, streams):
        if name not in pools:
            raise EmptyDatasetError(f"no sample pool for domain {name}")
        soc_ids, all_ids = (tuple(ids) for ids in pools[name])
        if not all_ids:
            raise EmptyDatasetError(f"domain {name}: sample pool is empty")
        stray = set(soc_ids) - set(all_ids)
        if stray:
            raise ConfigError(f"domain {name}: SOC ids not in the sample pool: {sorted(stray)}",
                              "schedule.pools")
        domains[name] = DomainState(all_ids, soc_ids, np.random.default_rng(stream))
    return SchedulerState(domains, seed, settings)


def synthetic_pools(settings: ScheduleSettings) -> Dict[str, Tuple[List[str], List[str]]]:
    """Marker-id pools: SOC ids and the remaining ids are distinguishable by name"""
    pools = {}
    for name in DOMAINS:
        soc = [f"{name}-soc-{i:04d}" for i in range(settings.soc_pool_size)]
        rest = [f"{name}-any-{i:04d}" for i in range(settings.all_pool_size - settings.soc_pool_size)]
        pools[name] = (soc, soc + rest)
    return pools


# =============================================================================
# Feedback rule
# =============================================================================

def choose_pool(state: SchedulerState, domain: str) -> str:
    ds = state.domain(domain)
    if ds.iteration < state.settings.warmup_iterations:
        return POOL_ALL
    if ds.z_soc_prev is None or ds.z_global_prev is None:
        return POOL_ALL
    if not ds.soc_ids:
        return POOL_ALL
    return POOL_SOC if ds.z_soc_prev > ds.z_global_prev else POOL_ALL


def next_draw(state: SchedulerState, domain: str) -> Draw:
    ds = state.domain(domain)
    pool = choose_pool(state, domain)
    ids = ds.soc_ids if pool == POOL_SOC else ds.all_ids
    sample_id = ids[int(ds.rng.integers(len(ids)))]
    logger.debug("domain %s iteration %d: %s from %s pool", domain, ds.iteration, sample_id, pool)
    return Draw(domain, sample_id, pool, ds.iteration)


def next_sample(state: SchedulerState, domain: str) -> str:
    return next_draw(state, domain).sample_id


def _check_signal(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0.0:
        raise NegativeLossError(name, value)
    return value


def update_state(state: SchedulerState, domain: str, z_soc: float, z_global: float) -> SchedulerState:
    """Record this iteration's losses as the previous-iteration signals"""
    ds = state.domain(domain)
    ds.z_soc_prev = _check_signal("z_soc", z_soc)
    ds.z_global_prev = _check_signal("z_global", z_global)
    ds.iteration += 1
    return state


def replay(state: SchedulerState, trace: Iterable[Tuple[str, float, float]]) -> List[Draw]:
    """Feed (domain, z_soc, z_global) rows in order; one update and one draw per row"""
    draws = []
    for domain, z_soc, z_global in trace:
        update_state(state, domain, z_soc, z_global)
        draws.append(next_draw(state, domain))
    return draws
