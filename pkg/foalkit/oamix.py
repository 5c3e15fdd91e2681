# -*- coding: utf-8 -*-
"""
oamix.py - Occlusion-aware mixup
================================

Pastes small-object regions of a fake image into a real image of the same
domain, refusing any region that would cover an object of the real scene
and any vehicle region that does not touch the real road. Regions come from
the fake image itself and from its horizontal mirror; on overlap the
unmirrored source wins.

In the thermal domain the pasted pixels are rescaled so their mean matches
the mean of the real road (adaptive luminance adjustment), and traffic-light
instances of the fake image can be flipped vertically beforehand.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from .foalconf import (
    AREA_THRESHOLD, REFERENCE_AREA, P_FLIP, UNCERTAIN_ID, DEFAULT_PALETTE,
    SOC_NAMES, VEHICLE_NAMES, OBJECT_NAMES,
    ROAD_NAME, VEGETATION_NAME, STREETLIGHT_NAME, TRAFFIC_LIGHT_NAME,
)
from .imagecore import (
    BinaryMask, ChannelMismatchError, ConfigError, ConnectedRegion,
    EmptyMaskError, Image, LabelMap, ShapeMismatchError,
    as_image, as_labels, as_mask, check_same_shape, check_same_size,
    connected_components, flip_horizontal, masked_mean, mask_union,
)

logger = logging.getLogger(__name__)

DOMAIN_A = "A"    # daytime color
DOMAIN_B = "B"    # nighttime thermal
DOMAINS = (DOMAIN_A, DOMAIN_B)


# =============================================================================
# Category configuration
# =============================================================================

@dataclass(frozen=True)
class CategoryConfig:
    """Which label ids play which role during mixing and indexing"""
    soc_set: FrozenSet[int]
    vehicle_set: FrozenSet[int]
    object_ids: FrozenSet[int]
    road_id: int
    vegetation_id: int
    streetlight_id: int
    traffic_light_id: int
    area_threshold: int = AREA_THRESHOLD
    reference_area: int = REFERENCE_AREA
    p_flip: float = P_FLIP
    uncertain_id: int = UNCERTAIN_ID

    def __post_init__(self):
        if not self.soc_set:
            raise ConfigError("SOC set must not be empty", "categories.soc")
        if self.area_threshold < 1:
            raise ConfigError("must be >= 1", "categories.area_threshold")
        if self.reference_area < 1:
            raise ConfigError("must be >= 1", "categories.reference_area")
        if not 0.0 <= self.p_flip <= 1.0:
            raise ConfigError("must lie in [0, 1]", "categories.p_flip")

    @classmethod
    def from_palette(cls, palette: Mapping[str, int] = DEFAULT_PALETTE,
                     soc: Iterable[str] = SOC_NAMES,
                     vehicles: Iterable[str] = VEHICLE_NAMES,
                     objects: Iterable[str] = OBJECT_NAMES,
                     road: str = ROAD_NAME,
                     vegetation: str = VEGETATION_NAME,
                     streetlight: str = STREETLIGHT_NAME,
                     traffic_light: str = TRAFFIC_LIGHT_NAME,
                     **kwargs) -> "CategoryConfig":
        def ids(names: Iterable[str], key: str) -> FrozenSet[int]:
            return frozenset(resolve(n, key) for n in names)

        def resolve(name: str, key: str) -> int:
            if name not in palette:
                raise ConfigError(f"unknown category '{name}'", f"categories.{key}")
            return palette[name]

        return cls(
            soc_set=ids(soc, "soc"),
            vehicle_set=ids(vehicles, "vehicles"),
            object_ids=ids(objects, "objects"),
            road_id=resolve(road, "road"),
            vegetation_id=resolve(vegetation, "vegetation"),
            streetlight_id=resolve(streetlight, "streetlight"),
            traffic_light_id=resolve(traffic_light, "traffic_light"),
            **kwargs,
        )

    def effective_threshold(self, height: int, width: int) -> int:
        """Area threshold scaled from the reference frame to height x width"""
        return max(1, int(round(self.area_threshold * height * width / self.reference_area)))


# =============================================================================
# Results
# =============================================================================

@dataclass
class MixResult:
    mixed: Image
    q_orig: BinaryMask
    q_flip: BinaryMask
    context: BinaryMask
    ala_factor: float = 1.0


@dataclass
class TlFlipResult:
    image: Image
    labels: Optional[LabelMap]
    flipped: List[int] = field(default_factory=list)   # indices into the region list


@dataclass
class OamixOutput:
    result: MixResult
    regions_orig: List[ConnectedRegion]
    regions_flip: List[ConnectedRegion]
    tl_flips: Optional[TlFlipResult] = None

    def inventory(self) -> List[Dict]:
        rows = []
        for source, regions in (("orig", self.regions_orig), ("flip", self.regions_flip)):
            for r in regions:
                rows.append({
                    "source": source,
                    "category": int(r.category),
                    "area": int(r.area),
                    "bbox": [int(v) for v in r.bbox],
                })
        return rows


# =============================================================================
# Masks
# =============================================================================

def object_and_road_masks(labels: LabelMap, cfg: CategoryConfig) -> Tuple[BinaryMask, BinaryMask]:
    labels = as_labels(labels)
    obj = np.isin(labels, sorted(cfg.object_ids))
    road = labels == cfg.road_id
    return obj, road


def select_mixing_regions(fake_labels: LabelMap, obj: BinaryMask, road: BinaryMask,
                          cfg: CategoryConfig) -> List[ConnectedRegion]:
    """Connected SOC regions of the fake label map that may be pasted"""
    fake_labels = as_labels(fake_labels)
    obj = as_mask(obj)
    road = as_mask(road)
    check_same_size(fake_labels, obj, "fake labels/object mask")
    check_same_size(fake_labels, road, "fake labels/road mask")

    threshold = cfg.effective_threshold(*fake_labels.shape)
    accepted = []
    for category in sorted(cfg.soc_set):
        for region in connected_components(fake_labels == category, category):
            if region.area <= threshold:
                continue
            if (region.mask & obj).any():
                continue
            if category in cfg.vehicle_set and not (region.mask & road).any():
                continue
            accepted.append(region)
    return accepted


def build_mixing_mask(fake_labels: LabelMap, obj: BinaryMask, road: BinaryMask,
                      cfg: CategoryConfig) -> BinaryMask:
    regions = select_mixing_regions(fake_labels, obj, road, cfg)
    q = np.zeros(np.shape(fake_labels), dtype=bool)
    for region in regions:
        q |= region.mask
    return q


def _check_masks(shape, q_o: BinaryMask, q_f: BinaryMask) -> Tuple[BinaryMask, BinaryMask]:
    q_o = as_mask(q_o, "q_orig")
    q_f = as_mask(q_f, "q_flip")
    if q_o.shape != shape[:2]:
        raise ShapeMismatchError(shape, q_o.shape, "image/q_orig")
    check_same_shape(q_o, q_f, "q_orig/q_flip")
    return q_o, q_f


# =============================================================================
# Composition
# =============================================================================

def _paste_sources(fake: Image, q_o: BinaryMask, q_f: BinaryMask) -> Image:
    """Object image: fake on q_o, mirrored fake on q_f minus q_o, 0 elsewhere"""
    mirrored = flip_horizontal(fake)
    qo = q_o[:, :, np.newaxis]
    qf = (q_f & ~q_o)[:, :, np.newaxis]
    return np.where(qo, fake, np.where(qf, mirrored, 0.0))


def compose_mix_a(x_fa: Image, x_ra: Image, q_o: BinaryMask, q_f: BinaryMask) -> MixResult:
    """Color-domain mix: pasted objects over the real image, no rescaling"""
    x_fa = as_image(x_fa, "x_fa")
    x_ra = as_image(x_ra, "x_ra")
    check_same_shape(x_fa, x_ra, "x_fa/x_ra")
    q_o, q_f = _check_masks(x_ra.shape, q_o, q_f)

    paste = q_o | q_f
    obj = _paste_sources(x_fa, q_o, q_f)
    mixed = np.where(paste[:, :, np.newaxis], obj, x_ra)
    return MixResult(mixed, q_o.copy(), q_f.copy(), ~paste, 1.0)


def compose_mix_b(x_fb: Image, x_rb: Image, q_o: BinaryMask, q_f: BinaryMask,
                  road_b: BinaryMask) -> MixResult:
    """
    Thermal-domain mix with adaptive luminance adjustment.

    The pasted pixels are multiplied by mean(road of x_rb) / mean(pasted
    pixels) and clamped to [0, 1]. An empty paste set returns x_rb unchanged
    with factor 1 and does not look at the road mask.
    """
    x_fb = as_image(x_fb, "x_fb")
    x_rb = as_image(x_rb, "x_rb")
    for img in (x_fb, x_rb):
        if img.shape[2] != 1:
            raise ChannelMismatchError(1, img.shape[2])
    check_same_shape(x_fb, x_rb, "x_fb/x_rb")
    q_o, q_f = _check_masks(x_rb.shape, q_o, q_f)
    road_b = as_mask(road_b, "road_b")
    check_same_size(x_rb, road_b, "x_rb/road_b")

    paste = q_o | q_f
    if not paste.any():
        return MixResult(x_rb.copy(), q_o.copy(), q_f.copy(), ~paste, 1.0)

    obj = _paste_sources(x_fb, q_o, q_f)
    mu_obj = float(obj[paste].mean())
    if mu_obj == 0.0:
        raise EmptyMaskError("pasted object pixels (zero mean)")
    mu_road = masked_mean(x_rb, road_b, "road mask of x_rb")
    factor = mu_road / mu_obj

    scaled = np.clip(obj * factor, 0.0, 1.0)
    mixed = np.where(paste[:, :, np.newaxis], scaled, x_rb)
    logger.debug("ALA factor %.6f (road %.6f / object %.6f)", factor, mu_road, mu_obj)
    return MixResult(mixed, q_o.copy(), q_f.copy(), ~paste, factor)


# =============================================================================
# Traffic-light flips
# =============================================================================

def flip_tl_instances(image: Image, labels: Optional[LabelMap],
                      regions: List[ConnectedRegion], rng: np.random.Generator,
                      p_flip: float = P_FLIP) -> TlFlipResult:
    """
    Flip each region's bbox upside down with probability p_flip.

    One draw is consumed per region whatever the outcome, so the record only
    depends on the seed and the number of regions.
    """
    if not 0.0 <= p_flip <= 1.0:
        raise ConfigError(f"p_flip must lie in [0, 1], got {p_flip}", "categories.p_flip")
    image = np.array(image, copy=True)
    labels = None if labels is None else np.array(labels, copy=True)

    flipped = []
    for index, region in enumerate(regions):
        if rng.random() < p_flip:
            rows, cols = region.slices
            image[rows, cols] = image[rows, cols][::-1]
            if labels is not None:
                labels[rows, cols] = labels[rows, cols][::-1]
            flipped.append(index)
    return TlFlipResult(image, labels, flipped)


# =============================================================================
# Pipeline
# =============================================================================

def oamix_pipeline(real: Image, fake: Image, real_labels: LabelMap, fake_labels: LabelMap,
                   domain: str, cfg: CategoryConfig,
                   rng: Optional[np.random.Generator] = None) -> OamixOutput:
    """
    Full mixing pass for one domain.

    For domain B with an rng, traffic-light instances of the fake image are
    flipped first, then mixing masks are built on the flipped label map.
    """
    if domain not in DOMAINS:
        raise ConfigError(f"domain must be one of {DOMAINS}, got {domain!r}", "domain")
    real = as_image(real, "real")
    fake = as_image(fake, "fake")
    real_labels = as_labels(real_labels, "real labels")
    fake_labels = as_labels(fake_labels, "fake labels")
    check_same_size(real, real_labels, "real image/real labels")
    check_same_size(fake, fake_labels, "fake image/fake labels")
    check_same_shape(real, fake, "real/fake")

    obj, road = object_and_road_masks(real_labels, cfg)

    tl_flips = None
    if domain == DOMAIN_B and rng is not None:
        tl_regions = connected_components(fake_labels == cfg.traffic_light_id, cfg.traffic_light_id)
        tl_flips = flip_tl_instances(fake, fake_labels, tl_regions, rng, cfg.p_flip)
        fake, fake_labels = tl_flips.image, tl_flips.labels
        logger.info("flipped %d of %d traffic-light instances", len(tl_flips.flipped), len(tl_regions))

    regions_o = select_mixing_regions(fake_labels, obj, road, cfg)
    regions_f = select_mixing_regions(flip_horizontal(fake_labels), obj, road, cfg)
    shape = fake_labels.shape
    q_o = mask_union(np.zeros(shape, dtype=bool), *(r.mask for r in regions_o))
    q_f = mask_union(np.zeros(shape, dtype=bool), *(r.mask for r in regions_f))

    if domain == DOMAIN_A:
        result = compose_mix_a(fake, real, q_o, q_f)
    else:
        result = compose_mix_b(fake, real, q_o, q_f, road)
    logger.info("domain %s: pasted %d original and %d mirrored regions",
                domain, len(regions_o), len(regions_f))
    return OamixOutput(result, regions_o, regions_f, tl_flips)
