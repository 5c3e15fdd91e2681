# -*- coding: utf-8 -*-
"""
imagecore.py - Pixel and mask numerics
======================================

Foundation for every other module:

- raster validation (Image, LabelMap, BinaryMask)
- mask algebra and connected components
- masked statistics
- SSIM and smooth-L1 distances
- HSV conversion
- Sobel gradients and the Canny detector

Images are float64 arrays shaped (H, W, C) with C in {1, 3}, label maps are
uint8 arrays shaped (H, W), masks are bool arrays shaped (H, W). Every
function here is pure.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy import ndimage
from skimage import color

from .foalconf import (
    LUMA_WEIGHTS,
    SSIM_WINDOW, SSIM_SIGMA, SSIM_K1, SSIM_K2, SSIM_DATA_RANGE,
    SMOOTH_L1_DELTA,
    CANNY_SIGMA, CANNY_KERNEL, CANNY_LOW_RATIO, SOBEL_SCALE,
)

Image = np.ndarray
LabelMap = np.ndarray
BinaryMask = np.ndarray

# 8-connectivity
CONNECTIVITY = np.ones((3, 3), dtype=bool)


# =============================================================================
# Errors
# =============================================================================

class FoalError(Exception):
    """Base class of every error raised by foalkit"""
    def __init__(self, msg: str):
        self.msg = msg
        super().__init__(msg)


class ConfigError(FoalError):
    """Configuration value is missing, unknown or out of range"""
    def __init__(self, msg: str, field: str = ""):
        self.field = field
        super().__init__(f"{field}: {msg}" if field else msg)


class InvalidImageError(FoalError):
    """Raster does not satisfy the Image/LabelMap/BinaryMask invariants"""
    pass


class EmptyMaskError(FoalError):
    """A statistic was requested over a mask with no set pixel"""
    def __init__(self, what: str = "mask"):
        self.what = what
        super().__init__(f"{what} is empty")


class ShapeMismatchError(FoalError):
    """Two rasters that must agree in shape do not"""
    def __init__(self, first: Tuple[int, ...], second: Tuple[int, ...], what: str = ""):
        self.first = tuple(first)
        self.second = tuple(second)
        self.what = what
        prefix = f"{what}: " if what else ""
        super().__init__(f"{prefix}shape mismatch {self.first} vs {self.second}")


class ChannelMismatchError(FoalError):
    """Image has the wrong number of channels for the operation"""
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"expected {expected}-channel image, got {got} channels")


class BadThresholdsError(FoalError):
    """Canny thresholds violate 0 <= low <= high <= 1"""
    def __init__(self, low: float, high: float):
        self.low = low
        self.high = high
        super().__init__(f"bad thresholds low={low} high={high}")


# =============================================================================
# Validation
# =============================================================================

def as_image(arr, what: str = "image") -> Image:
    """Return arr as a float64 (H, W, C) image, promoting 2-D input"""
    img = np.asarray(arr, dtype=np.float64)
    if img.ndim == 2:
        img = img[:, :, np.newaxis]
    if img.ndim != 3 or img.shape[2] not in (1, 3):
        raise InvalidImageError(f"{what}: expected (H, W[, 1|3]) array, got shape {img.shape}")
    if img.shape[0] * img.shape[1] == 0:
        raise InvalidImageError(f"{what}: empty raster")
    if img.size and (img.min() < 0.0 or img.max() > 1.0 or np.isnan(img).any()):
        raise InvalidImageError(f"{what}: values outside [0, 1]")
    return img


def as_mask(arr, what: str = "mask") -> BinaryMask:
    m = np.asarray(arr)
    if m.ndim != 2:
        raise InvalidImageError(f"{what}: expected (H, W) mask, got shape {m.shape}")
    return m.astype(bool, copy=False)


def as_labels(arr, what: str = "labels") -> LabelMap:
    lab = np.asarray(arr)
    if lab.ndim != 2:
        raise InvalidImageError(f"{what}: expected (H, W) label map, got shape {lab.shape}")
    if lab.dtype != np.uint8:
        if lab.size and (lab.min() < 0 or lab.max() > 255):
            raise InvalidImageError(f"{what}: label ids must fit in 0..255")
        lab = lab.astype(np.uint8)
    return lab


def check_same_size(a: np.ndarray, b: np.ndarray, what: str = "") -> None:
    """Raise ShapeMismatchError unless a and b share height and width"""
    if a.shape[:2] != b.shape[:2]:
        raise ShapeMismatchError(a.shape, b.shape, what)


def check_same_shape(a: np.ndarray, b: np.ndarray, what: str = "") -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(a.shape, b.shape, what)


def _plane(img: Image) -> np.ndarray:
    """2-D view of a single-channel image"""
    img = as_image(img)
    if img.shape[2] != 1:
        raise ChannelMismatchError(1, img.shape[2])
    return img[:, :, 0]


# =============================================================================
# Mask algebra
# =============================================================================

def popcount(m: BinaryMask) -> int:
    return int(np.count_nonzero(m))


def mask_union(*masks: BinaryMask) -> BinaryMask:
    out = np.zeros(masks[0].shape, dtype=bool)
    for m in masks:
        out |= m
    return out


def mask_intersection(a: BinaryMask, b: BinaryMask) -> BinaryMask:
    return np.logical_and(a, b)


def mask_difference(a: BinaryMask, b: BinaryMask) -> BinaryMask:
    """a minus b"""
    return np.logical_and(a, np.logical_not(b))


def mask_complement(m: BinaryMask) -> BinaryMask:
    return np.logical_not(m)


def flip_horizontal(arr: np.ndarray) -> np.ndarray:
    return arr[:, ::-1].copy()


def flip_vertical(arr: np.ndarray) -> np.ndarray:
    return arr[::-1].copy()


def dilate_mask(m: BinaryMask, radius: int) -> BinaryMask:
    """Dilate with a (2r+1)x(2r+1) square"""
    m = as_mask(m)
    if radius <= 0:
        return m.copy()
    structure = np.ones((2 * radius + 1, 2 * radius + 1), dtype=bool)
    return ndimage.binary_dilation(m, structure=structure)


# =============================================================================
# Connected components
# =============================================================================

@dataclass
class ConnectedRegion:
    """One maximal 8-connected component of a mask"""
    mask: BinaryMask
    area: int
    bbox: Tuple[int, int, int, int]   # top, left, height, width
    category: int

    @property
    def slices(self) -> Tuple[slice, slice]:
        top, left, h, w = self.bbox
        return slice(top, top + h), slice(left, left + w)


def connected_components(m: BinaryMask, category: int = -1) -> List[ConnectedRegion]:
    """
    Partition the set pixels of m into 8-connected regions.

    Regions come out in raster order of their first (top-most, then
    left-most) pixel, which is the order scipy assigns labels in.
    """
    m = as_mask(m)
    labels, count = ndimage.label(m, structure=CONNECTIVITY)
    regions = []
    for index, sl in enumerate(ndimage.find_objects(labels), start=1):
        if sl is None:
            continue
        region = labels == index
        rows, cols = sl
        bbox = (rows.start, cols.start, rows.stop - rows.start, cols.stop - cols.start)
        regions.append(ConnectedRegion(region, popcount(region), bbox, category))
    return regions


# =============================================================================
# Grayscale and masked statistics
# =============================================================================

def to_grayscale(img: Image) -> Image:
    """BT.601 luma for 3-channel input; 1-channel input is returned as is"""
    img = as_image(img)
    if img.shape[2] == 1:
        return img
    gray = img @ np.asarray(LUMA_WEIGHTS, dtype=np.float64)
    return np.clip(gray, 0.0, 1.0)[:, :, np.newaxis]


def _masked_values(img: Image, m: BinaryMask, what: str) -> np.ndarray:
    plane = _plane(img)
    m = as_mask(m)
    check_same_size(plane, m, what)
    if not m.any():
        raise EmptyMaskError(what)
    return plane[m]


def masked_mean(img: Image, m: BinaryMask, what: str = "mask") -> float:
    return float(np.mean(_masked_values(img, m, what)))


def masked_min(img: Image, m: BinaryMask, what: str = "mask") -> float:
    return float(np.min(_masked_values(img, m, what)))


# =============================================================================
# Image distances
# =============================================================================

def gaussian_kernel(size: int, sigma: float) -> np.ndarray:
    """Normalized 2-D Gaussian, size x size"""
    half = (size - 1) / 2.0
    x = np.arange(size, dtype=np.float64) - half
    g = np.exp(-(x * x) / (2.0 * sigma * sigma))
    k = np.outer(g, g)
    return k / k.sum()


_SSIM_KERNEL = gaussian_kernel(SSIM_WINDOW, SSIM_SIGMA)


def _ssim_plane(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    c1 = (SSIM_K1 * SSIM_DATA_RANGE) ** 2
    c2 = (SSIM_K2 * SSIM_DATA_RANGE) ** 2

    def filt(x):
        return ndimage.correlate(x, _SSIM_KERNEL, mode="reflect")

    mu_a = filt(a)
    mu_b = filt(b)
    var_a = filt(a * a) - mu_a * mu_a
    var_b = filt(b * b) - mu_b * mu_b
    cov = filt(a * b) - mu_a * mu_b

    num = (2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)
    den = (mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2)
    return num / den


def ssim_loss(a: Image, b: Image) -> float:
    """
    1 - mean local SSIM.

    Local statistics use an 11x11 Gaussian window (sigma 1.5) with reflected
    borders and the map is averaged over every pixel and channel, so frames
    smaller than the window are still valid.
    """
    a = as_image(a, "a")
    b = as_image(b, "b")
    check_same_shape(a, b, "ssim_loss")
    maps = [_ssim_plane(a[:, :, c], b[:, :, c]) for c in range(a.shape[2])]
    return float(1.0 - np.mean(maps))


def smooth_l1_loss(a: Image, b: Image, delta: float = SMOOTH_L1_DELTA) -> float:
    """Mean Huber loss over all elements"""
    a = as_image(a, "a")
    b = as_image(b, "b")
    check_same_shape(a, b, "smooth_l1_loss")
    d = np.abs(a - b)
    per = np.where(d < delta, 0.5 * d * d / delta, d - 0.5 * delta)
    return float(per.mean())


# =============================================================================
# Color space
# =============================================================================

def _rgb(img: Image) -> Image:
    img = as_image(img)
    if img.shape[2] != 3:
        raise ChannelMismatchError(3, img.shape[2])
    return img


def rgb_to_hsv(img: Image) -> Image:
    """Hexcone HSV, every channel in [0, 1] (hue normalized to [0, 1))"""
    return color.rgb2hsv(_rgb(img))


def hsv_to_rgb(img: Image) -> Image:
    return np.clip(color.hsv2rgb(_rgb(img)), 0.0, 1.0)


# =============================================================================
# Gradients and edges
# =============================================================================

def _sobel_xy(plane: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    gx = ndimage.sobel(plane, axis=1, mode="nearest")
    gy = ndimage.sobel(plane, axis=0, mode="nearest")
    return gx, gy


def sobel_gradient(img: Image) -> Image:
    """Sobel magnitude scaled so a unit step reads 1, clipped to [0, 1]"""
    gx, gy = _sobel_xy(_plane(img))
    mag = np.hypot(gx, gy) / SOBEL_SCALE
    return np.clip(mag, 0.0, 1.0)[:, :, np.newaxis]


_CANNY_KERNEL = gaussian_kernel(CANNY_KERNEL, CANNY_SIGMA)


def _non_max_suppression(mag: np.ndarray, gx: np.ndarray, gy: np.ndarray) -> np.ndarray:
    """Keep pixels that are >= both neighbours along the gradient direction"""
    angle = np.rad2deg(np.arctan2(gy, gx)) % 180.0
    padded = np.pad(mag, 1, mode="constant")
    h, w = mag.shape

    def shifted(dr: int, dc: int) -> np.ndarray:
        return padded[1 + dr:1 + dr + h, 1 + dc:1 + dc + w]

    horizontal = (angle < 22.5) | (angle >= 157.5)
    diag_down = (angle >= 22.5) & (angle < 67.5)
    vertical = (angle >= 67.5) & (angle < 112.5)
    diag_up = (angle >= 112.5) & (angle < 157.5)

    keep = np.zeros_like(mag, dtype=bool)
    keep |= horizontal & (mag >= shifted(0, -1)) & (mag >= shifted(0, 1))
    keep |= diag_down & (mag >= shifted(1, 1)) & (mag >= shifted(-1, -1))
    keep |= vertical & (mag >= shifted(-1, 0)) & (mag >= shifted(1, 0))
    keep |= diag_up & (mag >= shifted(1, -1)) & (mag >= shifted(-1, 1))
    return np.where(keep & (mag > 0.0), mag, 0.0)


def canny_edges(img: Image, low: Optional[float] = None, high: float = 0.2) -> BinaryMask:
    """
    Canny detector: 5x5 Gaussian (sigma 1.4), Sobel, non-maximum
    suppression, hysteresis.

    Thresholds are on the Sobel magnitude scaled as in sobel_gradient. With
    low omitted, low = 0.4 * high.
    """
    if low is None:
        low = CANNY_LOW_RATIO * high
    if not (0.0 <= low <= high <= 1.0):
        raise BadThresholdsError(low, high)

    plane = _plane(img)
    smoothed = ndimage.correlate(plane, _CANNY_KERNEL, mode="nearest")
    gx, gy = _sobel_xy(smoothed)
    thin = _non_max_suppression(np.hypot(gx, gy), gx, gy) / SOBEL_SCALE

    candidate = thin > 0.0
    weak = candidate & (thin >= low)
    strong = candidate & (thin >= high)

    labels, count = ndimage.label(weak, structure=CONNECTIVITY)
    if count == 0:
        return np.zeros(plane.shape, dtype=bool)
    keep = np.zeros(count + 1, dtype=bool)
    keep[np.unique(labels[strong])] = True
    keep[0] = False
    return keep[labels]
