# -*- coding: utf-8 -*-
"""
foalconf.py - Default constants for foalkit
===========================================

Every tunable the toolkit exposes has its default here. Values that come
from the method itself are marked "method constant"; the rest are
documented choices and can be overridden through a run configuration.
"""

from typing import Dict, Tuple


# =============================================================================
# Raster conventions
# =============================================================================

UNCERTAIN_ID: int = 255      # reserved "no loss" label id
PNG_MAX: int = 255           # 8-bit PNG full scale

# ITU-R BT.601 luma weights
LUMA_WEIGHTS: Tuple[float, float, float] = (0.299, 0.587, 0.114)

# values this close to a region mean compare as equal to it
MEAN_TIE_EPS: float = 1e-12


# =============================================================================
# Image distances
# =============================================================================

SSIM_WINDOW: int = 11
SSIM_SIGMA: float = 1.5
SSIM_K1: float = 0.01
SSIM_K2: float = 0.03
SSIM_DATA_RANGE: float = 1.0

SMOOTH_L1_DELTA: float = 1.0


# =============================================================================
# Edge extraction
# =============================================================================

CANNY_SIGMA: float = 1.4
CANNY_KERNEL: int = 5
CANNY_LOW_RATIO: float = 0.4     # low = ratio * high when only high is given

# A unit step seen by a 3x3 Sobel kernel has magnitude 4.
SOBEL_SCALE: float = 4.0


# =============================================================================
# Loss weights (method constants unless noted)
# =============================================================================

LAMBDA_SL1: float = 10.0
LAMBDA_SGA: float = 0.5
THETA_TEM: float = 0.25
THETA_SIM: float = 0.8
EDGE_THRESHOLD: float = 0.2      # choice: Canny high threshold for EM_ra


# =============================================================================
# Mixing
# =============================================================================

AREA_THRESHOLD: int = 64
REFERENCE_AREA: int = 256 * 256
P_FLIP: float = 0.5


# =============================================================================
# Traffic lights
# =============================================================================

TL_TAU: float = 0.05             # method constant
TL_ASPECT_THRESHOLD: float = 2.0
TL_SATURATION_GATE: float = 0.3
TL_VALUE_GATE: float = 0.3
TL_LUMINANCE_EPS: float = 1e-6

# normalized hue intervals, half open
RED_HUE_RANGES: Tuple[Tuple[float, float], ...] = ((0.0, 1.0 / 18.0), (17.0 / 18.0, 1.0))
GREEN_HUE_RANGES: Tuple[Tuple[float, float], ...] = ((2.0 / 9.0, 4.0 / 9.0),)
HUE_SHIFT: float = 1.0 / 3.0


# =============================================================================
# Metrics
# =============================================================================

APCE_HIGH_THRESHOLDS: Tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
APCE_LOW_RATIO: float = 0.4
APCE_TOLERANCE_RADIUS: int = 1


# =============================================================================
# Preprocessing / augmentation
# =============================================================================

RESIZE_WH: Tuple[int, int] = (500, 400)
CROP_WH: Tuple[int, int] = (360, 288)
AUGMENT_CROP: int = 256
AUGMENT_FLIP_P: float = 0.5


# =============================================================================
# Scheduling
# =============================================================================

WARMUP_ITERATIONS: int = 0
SYNTHETIC_ALL_POOL: int = 100
SYNTHETIC_SOC_POOL: int = 10


# =============================================================================
# Category palette
# =============================================================================

# Cityscapes train ids with streetlight appended as its own category.
DEFAULT_PALETTE: Dict[str, int] = {
    "road": 0,
    "sidewalk": 1,
    "building": 2,
    "wall": 3,
    "fence": 4,
    "pole": 5,
    "traffic light": 6,
    "traffic sign": 7,
    "vegetation": 8,
    "terrain": 9,
    "sky": 10,
    "person": 11,
    "rider": 12,
    "car": 13,
    "truck": 14,
    "bus": 15,
    "tram": 16,
    "motorcycle": 17,
    "bicycle": 18,
    "streetlight": 19,
}

SOC_NAMES: Tuple[str, ...] = ("traffic light", "traffic sign", "motorcycle")
VEHICLE_NAMES: Tuple[str, ...] = ("car", "truck", "bus", "motorcycle", "tram")
OBJECT_NAMES: Tuple[str, ...] = (
    "traffic light", "traffic sign", "person", "rider", "car", "truck",
    "bus", "tram", "motorcycle", "bicycle", "streetlight",
)
ROAD_NAME: str = "road"
VEGETATION_NAME: str = "vegetation"
STREETLIGHT_NAME: str = "streetlight"
TRAFFIC_LIGHT_NAME: str = "traffic light"

CONFIG_ENV_VAR: str = "FOALKIT_CONFIG"
