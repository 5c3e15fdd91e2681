# -*- coding: utf-8 -*-
"""
trafficlight.py - Traffic-light appearance
==========================================

Region extraction, red/green detection and conversion, mean-color features
and the luminance and color losses for traffic lights, plus the vegetation
relabeling rule used on thermal pseudo-labels.

Hue is the normalized HSV hue in [0, 1). Red and green are recognized only
on pixels that pass both the saturation and the value gate, which keeps
the gray lamp housing out of either class.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .foalconf import (
    TL_TAU, TL_ASPECT_THRESHOLD, TL_SATURATION_GATE, TL_VALUE_GATE, TL_LUMINANCE_EPS,
    RED_HUE_RANGES, GREEN_HUE_RANGES, HUE_SHIFT,
    DEFAULT_PALETTE, VEGETATION_NAME, UNCERTAIN_ID, MEAN_TIE_EPS,
)
from .imagecore import (
    BinaryMask, ChannelMismatchError, ConfigError, EmptyMaskError, Image, LabelMap,
    as_image, as_labels, as_mask, check_same_size, connected_components,
    flip_vertical, hsv_to_rgb, masked_mean, masked_min, popcount, rgb_to_hsv,
    to_grayscale,
)

ColorFeature = np.ndarray
HueRanges = Tuple[Tuple[float, float], ...]

RED = "red"
GREEN = "green"
UNKNOWN = "unknown"


@dataclass
class TlRegionMasks:
    """Bright/dark and upper/lower partitions of a traffic-light mask"""
    bright: Optional[BinaryMask] = None
    dark: Optional[BinaryMask] = None
    upper: Optional[BinaryMask] = None
    lower: Optional[BinaryMask] = None


@dataclass(frozen=True)
class TlColorParams:
    tau: float = TL_TAU
    aspect_threshold: float = TL_ASPECT_THRESHOLD
    red_hue_ranges: HueRanges = RED_HUE_RANGES
    green_hue_ranges: HueRanges = GREEN_HUE_RANGES
    saturation_gate: float = TL_SATURATION_GATE
    value_gate: float = TL_VALUE_GATE

    def __post_init__(self):
        if self.tau <= 0:
            raise ConfigError("must be > 0", "traffic_light.tau")
        if self.aspect_threshold <= 0:
            raise ConfigError("must be > 0", "traffic_light.aspect_threshold")
        for name in ("saturation_gate", "value_gate"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError("must lie in [0, 1]", f"traffic_light.{name}")
        for name in ("red_hue_ranges", "green_hue_ranges"):
            for lo, hi in getattr(self, name):
                if not 0.0 <= lo < hi <= 1.0:
                    raise ConfigError(f"bad hue interval [{lo}, {hi})", f"traffic_light.{name}")
        for rlo, rhi in self.red_hue_ranges:
            for glo, ghi in self.green_hue_ranges:
                if rlo < ghi and glo < rhi:
                    raise ConfigError("red and green hue ranges overlap", "traffic_light.green_hue_ranges")


DEFAULT_PARAMS = TlColorParams()


# =============================================================================
# Region masks
# =============================================================================

def bright_dark_masks(x_rb: Image, tl_mask: BinaryMask) -> TlRegionMasks:
    """Split the traffic-light mask at the mean thermal luminance of the region"""
    tl_mask = as_mask(tl_mask, "tl_mask")
    gray = to_grayscale(x_rb)
    mean = masked_mean(gray, tl_mask, "traffic-light mask")
    bright = tl_mask & (gray[:, :, 0] >= mean - MEAN_TIE_EPS)
    return TlRegionMasks(bright=bright, dark=tl_mask & ~bright)


def split_upper_lower(tl_mask: BinaryMask) -> TlRegionMasks:
    """
    Per 8-connected instance, rows strictly above the bbox vertical center
    are upper, the rest lower.
    """
    tl_mask = as_mask(tl_mask, "tl_mask")
    upper = np.zeros(tl_mask.shape, dtype=bool)
    rows = np.arange(tl_mask.shape[0])[:, np.newaxis]
    for region in connected_components(tl_mask):
        top, _, h, _ = region.bbox
        # row r's center r + 0.5 lies above top + h/2
        upper |= region.mask & (2 * rows + 1 < 2 * top + h)
    return TlRegionMasks(upper=upper, lower=tl_mask & ~upper)


def _in_ranges(hue: np.ndarray, ranges: HueRanges) -> np.ndarray:
    out = np.zeros(hue.shape, dtype=bool)
    for lo, hi in ranges:
        out |= (hue >= lo) & (hue < hi)
    return out


def _red_green(hsv: np.ndarray, params: TlColorParams) -> Tuple[BinaryMask, BinaryMask]:
    hue, sat, val = hsv[:, :, 0], hsv[:, :, 1], hsv[:, :, 2]
    lit = (sat >= params.saturation_gate) & (val >= params.value_gate)
    return lit & _in_ranges(hue, params.red_hue_ranges), lit & _in_ranges(hue, params.green_hue_ranges)


def detect_red_green(instance: Image, params: TlColorParams = DEFAULT_PARAMS) -> Tuple[BinaryMask, BinaryMask]:
    return _red_green(rgb_to_hsv(instance), params)


def color_bright_mask(x_ra: Image, tl_mask: BinaryMask, params: TlColorParams = DEFAULT_PARAMS) -> BinaryMask:
    """Lit (red or green) pixels of every traffic-light instance in a color image"""
    x_ra = as_image(x_ra, "x_ra")
    tl_mask = as_mask(tl_mask, "tl_mask")
    check_same_size(x_ra, tl_mask, "x_ra/tl_mask")
    out = np.zeros(tl_mask.shape, dtype=bool)
    for region in connected_components(tl_mask):
        rows, cols = region.slices
        red, green = detect_red_green(x_ra[rows, cols], params)
        out[rows, cols] |= (red | green) & region.mask[rows, cols]
    return out


def color_region_masks(x_ra: Image, tl_mask: BinaryMask,
                       params: TlColorParams = DEFAULT_PARAMS) -> TlRegionMasks:
    """Lit/unlit and upper/lower partitions of the lights in a color image"""
    bright = color_bright_mask(x_ra, tl_mask, params)
    split = split_upper_lower(tl_mask)
    tl_mask = as_mask(tl_mask)
    return TlRegionMasks(bright=bright, dark=tl_mask & ~bright, upper=split.upper, lower=split.lower)


def thermal_region_masks(x_rb: Image, tl_mask: BinaryMask) -> TlRegionMasks:
    """
    Bright/dark partition from the thermal frame, plus upper/lower.

    Used for the translated color image: its lit lamps are located in the
    real thermal frame, so a lamp left gray by the generator still counts.
    """
    br = bright_dark_masks(x_rb, tl_mask)
    split = split_upper_lower(tl_mask)
    return TlRegionMasks(bright=br.bright, dark=br.dark, upper=split.upper, lower=split.lower)


# =============================================================================
# Color conversion
# =============================================================================

def classify_light_color(instance: Image, params: TlColorParams = DEFAULT_PARAMS) -> str:
    red, green = detect_red_green(instance, params)
    n_red, n_green = popcount(red), popcount(green)
    if n_red > n_green:
        return RED
    if n_green > n_red:
        return GREEN
    return UNKNOWN


def convert_color(instance: Image, params: TlColorParams = DEFAULT_PARAMS) -> Image:
    """
    Turn a red light green or a green light red.

    Tall crops (height/width above the aspect threshold) are flipped
    vertically first so the lamp order matches the new color. Only hue
    changes, and only on gated pixels inside the converted range.
    """
    instance = as_image(instance, "instance")
    if instance.shape[2] != 3:
        raise ChannelMismatchError(3, instance.shape[2])
    h, w = instance.shape[:2]
    if h / w > params.aspect_threshold:
        instance = flip_vertical(instance)

    hsv = rgb_to_hsv(instance)
    red, green = _red_green(hsv, params)
    hue = hsv[:, :, 0]
    if popcount(red) > popcount(green):
        hue[red] = np.mod(hue[red] + HUE_SHIFT, 1.0)
    else:
        hue[green] = np.mod(hue[green] - HUE_SHIFT, 1.0)
    return hsv_to_rgb(hsv)


def convert_light_instances(image: Image, tl_mask: BinaryMask,
                            params: TlColorParams = DEFAULT_PARAMS) -> Tuple[Image, List[Dict]]:
    """Apply convert_color to the bbox of every traffic-light instance of a frame"""
    image = np.array(as_image(image, "image"), copy=True)
    tl_mask = as_mask(tl_mask, "tl_mask")
    check_same_size(image, tl_mask, "image/tl_mask")
    record = []
    for region in connected_components(tl_mask):
        rows, cols = region.slices
        before = classify_light_color(image[rows, cols], params)
        image[rows, cols] = convert_color(image[rows, cols], params)
        record.append({
            "bbox": [int(v) for v in region.bbox],
            "before": before,
            "after": classify_light_color(image[rows, cols], params),
        })
    return image, record


# =============================================================================
# Losses
# =============================================================================

def mean_color_feature(img: Image, m: BinaryMask) -> ColorFeature:
    img = as_image(img)
    m = as_mask(m)
    check_same_size(img, m, "image/mask")
    if not m.any():
        raise EmptyMaskError("color feature mask")
    return img[m].mean(axis=0)


def color_loss_weight(d_ll: float, d_lu: float, tau: float = TL_TAU) -> float:
    return 1.0 / (min(d_ll, d_lu) + tau)


@dataclass
class ColorLossTerms:
    d_uu: Optional[float]
    d_ll: Optional[float]
    d_lu: Optional[float]
    beta: float
    loss: float


def _distance(a: Optional[ColorFeature], b: Optional[ColorFeature]) -> Optional[float]:
    if a is None or b is None:
        return None
    return float(np.linalg.norm(a - b))


def color_loss_terms(f_ub_ra: Optional[ColorFeature], f_lb_ra: Optional[ColorFeature],
                     f_ub_fa: Optional[ColorFeature], f_lb_fa: Optional[ColorFeature],
                     tau: float = TL_TAU) -> ColorLossTerms:
    """
    Distances between lit upper/lower features and the weighted color loss.

    A missing feature (None) drops every distance that needs it; a dropped
    distance contributes 0 and is left out of the weight's minimum.
    """
    d_uu = _distance(f_ub_fa, f_ub_ra)
    d_ll = _distance(f_lb_fa, f_lb_ra)
    d_lu = _distance(f_lb_fa, f_ub_ra)

    candidates = [d for d in (d_ll, d_lu) if d is not None]
    beta = 1.0 / (min(candidates) + tau) if candidates else 1.0 / tau
    loss = (d_uu or 0.0) + beta * (d_ll or 0.0)
    return ColorLossTerms(d_uu, d_ll, d_lu, beta, loss)


def _feature_or_none(img: Image, m: BinaryMask) -> Optional[ColorFeature]:
    if not m.any():
        return None
    return mean_color_feature(img, m)


def traffic_light_color_loss(x_ra: Image, x_fa: Image, masks_ra: TlRegionMasks,
                             masks_fa: TlRegionMasks, params: TlColorParams = DEFAULT_PARAMS) -> float:
    """
    Color loss between lit upper and lower lamps of a real and a fake
    color image.

    Each TlRegionMasks needs bright, upper and lower.
    """
    x_ra = as_image(x_ra, "x_ra")
    x_fa = as_image(x_fa, "x_fa")
    for img, masks in ((x_ra, masks_ra), (x_fa, masks_fa)):
        for m in (masks.bright, masks.upper, masks.lower):
            if m is None:
                raise EmptyMaskError("traffic-light region masks")
            check_same_size(img, as_mask(m), "image/traffic-light mask")

    def features(img: Image, masks: TlRegionMasks):
        bright = as_mask(masks.bright)
        return (_feature_or_none(img, bright & as_mask(masks.upper)),
                _feature_or_none(img, bright & as_mask(masks.lower)))

    f_ub_ra, f_lb_ra = features(x_ra, masks_ra)
    f_ub_fa, f_lb_fa = features(x_fa, masks_fa)
    return color_loss_terms(f_ub_ra, f_lb_ra, f_ub_fa, f_lb_fa, params.tau).loss


def traffic_light_luminance_loss(x_fa: Image, masks: TlRegionMasks,
                                 eps: float = TL_LUMINANCE_EPS) -> float:
    """Dark-region mean above the bright-region minimum, relative to that minimum"""
    if masks.bright is None or masks.dark is None:
        raise EmptyMaskError("traffic-light bright/dark masks")
    gray = to_grayscale(x_fa)
    delta = masked_min(gray, masks.bright, "traffic-light bright mask")
    mu = masked_mean(gray, masks.dark, "traffic-light dark mask")
    return max(mu - delta, 0.0) / (delta + eps)


# =============================================================================
# Vegetation relabeling
# =============================================================================

def vegetation_uncertainty_correction(labels: LabelMap, x_fb: Image,
                                      vegetation_id: int = DEFAULT_PALETTE[VEGETATION_NAME],
                                      uncertain_id: int = UNCERTAIN_ID) -> LabelMap:
    """Vegetation pixels warmer than the frame mean become uncertain"""
    labels = as_labels(labels)
    plane = to_grayscale(x_fb)[:, :, 0]
    check_same_size(labels, plane, "labels/x_fb")
    out = labels.copy()
    out[(labels == vegetation_id) & (plane > plane.mean() + MEAN_TIE_EPS)] = uncertain_id
    return out
