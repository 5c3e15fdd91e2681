# -*- coding: utf-8 -*-
"""
losses.py - Forward loss evaluation
===================================

Scalar evaluators for the mask-based image distance and every loss built on
it: bias correction (streetlight and traffic-light luminance, edge
alignment, reconstruction color), appearance consistency of mixed images,
and the partial objective that sums them.

Nothing here differentiates; the functions are reference evaluators an
external autodiff framework can be checked against.

SGA and CGR penalties are hooks: any deterministic callable
(a, b) -> float >= 0 that returns 0 for identical inputs. The stand-ins
below are NOT the published formulations.
"""

from dataclasses import dataclass, fields
from typing import Callable, Dict, Mapping, Optional

import numpy as np

from .foalconf import LAMBDA_SL1, LAMBDA_SGA, THETA_TEM, THETA_SIM, EDGE_THRESHOLD, MEAN_TIE_EPS
from .imagecore import (
    BinaryMask, ConfigError, FoalError, Image,
    as_image, as_mask, canny_edges, check_same_shape, check_same_size,
    mask_union, masked_mean, masked_min, smooth_l1_loss, sobel_gradient,
    ssim_loss, to_grayscale,
)

PenaltyHook = Callable[[np.ndarray, np.ndarray], float]


class MissingTermError(FoalError):
    """aggregate() was called without every leaf term"""
    def __init__(self, missing):
        self.missing = sorted(missing)
        super().__init__(f"missing loss terms: {', '.join(self.missing)}")


# =============================================================================
# Weights
# =============================================================================

@dataclass(frozen=True)
class LossWeights:
    lambda_sl1: float = LAMBDA_SL1
    lambda_sga: float = LAMBDA_SGA
    theta_tem: float = THETA_TEM
    theta_sim: float = THETA_SIM
    edge_threshold: float = EDGE_THRESHOLD

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise ConfigError("must be >= 0", f"loss.{f.name}")
        if self.theta_sim > 1.0:
            raise ConfigError("must lie in [0, 1]", "loss.theta_sim")
        if self.edge_threshold > 1.0:
            raise ConfigError("must lie in [0, 1]", "loss.edge_threshold")


DEFAULT_WEIGHTS = LossWeights()


# =============================================================================
# Penalty stand-ins
# =============================================================================

def sga_standin(gradient_map: np.ndarray, edge_map: np.ndarray) -> float:
    """Mean absolute difference between a gradient map and an edge map"""
    gm = np.asarray(gradient_map, dtype=np.float64)
    em = np.asarray(edge_map, dtype=np.float64)
    check_same_shape(gm, em, "sga")
    return float(np.mean(np.abs(gm - em)))


def cgr_standin(a: Image, b: Image) -> float:
    """Smooth-L1 between the Sobel magnitudes of the two (grayscale) images"""
    ga = sobel_gradient(to_grayscale(a))
    gb = sobel_gradient(to_grayscale(b))
    return smooth_l1_loss(ga, gb)


# =============================================================================
# Mask-based image distance
# =============================================================================

def apply_mask(mask: BinaryMask, img: Image) -> Image:
    """Elementwise product with channel broadcasting"""
    return img * as_mask(mask)[:, :, np.newaxis]


def midf(mask: BinaryMask, rec: Image, ori: Image, w: LossWeights = DEFAULT_WEIGHTS) -> float:
    rec = as_image(rec, "rec")
    ori = as_image(ori, "ori")
    check_same_shape(rec, ori, "rec/ori")
    mask = as_mask(mask)
    check_same_size(rec, mask, "image/mask")
    a = apply_mask(mask, rec)
    b = apply_mask(mask, ori)
    return ssim_loss(a, b) + w.lambda_sl1 * smooth_l1_loss(a, b)


def global_reconstruction_loss(x_rec: Image, x: Image, w: LossWeights = DEFAULT_WEIGHTS) -> float:
    """MIDF over the full frame; the scheduler's global signal"""
    x = as_image(x, "x")
    return midf(np.ones(x.shape[:2], dtype=bool), x_rec, x, w)


# =============================================================================
# Artifact bias correction
# =============================================================================

def streetlight_bright_mask(gray_ra: Image, sl_mask: BinaryMask) -> BinaryMask:
    """Streetlight pixels at or above the streetlight mean of the DC image"""
    sl_mask = as_mask(sl_mask)
    gray = to_grayscale(gray_ra)
    mean = masked_mean(gray, sl_mask, "streetlight mask")
    return sl_mask & (gray[:, :, 0] >= mean - MEAN_TIE_EPS)


def street_light_luminance_loss(x_fb: Image, sl_bright: BinaryMask, veg: BinaryMask,
                                w: LossWeights = DEFAULT_WEIGHTS) -> float:
    veg_mean = masked_mean(x_fb, veg, "vegetation mask")
    sl_min = masked_min(x_fb, sl_bright, "streetlight bright mask")
    return max(veg_mean - sl_min + w.theta_tem, 0.0)


def _centered_vector(img: Image, tl_mask: BinaryMask) -> np.ndarray:
    plane = as_image(img)[:, :, 0]
    mean = masked_mean(img, tl_mask, "traffic-light mask")
    return ((plane - mean) * tl_mask).ravel()


def traffic_light_luminance_adjust_loss(gray_ra: Image, x_fb: Image, tl_mask: BinaryMask,
                                        w: LossWeights = DEFAULT_WEIGHTS) -> float:
    """
    Cosine hinge between mean-centered traffic-light luminance patterns.

    A flat region (zero-norm vector) counts as maximally dissimilar and
    returns theta_sim.
    """
    gray_ra = as_image(gray_ra, "gray_ra")
    x_fb = as_image(x_fb, "x_fb")
    check_same_shape(gray_ra, x_fb, "gray_ra/x_fb")
    tl_mask = as_mask(tl_mask)
    v_ra = _centered_vector(gray_ra, tl_mask)
    v_fb = _centered_vector(x_fb, tl_mask)
    n_ra = float(np.linalg.norm(v_ra))
    n_fb = float(np.linalg.norm(v_fb))
    if n_ra == 0.0 or n_fb == 0.0:
        return w.theta_sim
    cosine = float(np.clip(np.dot(v_ra, v_fb) / (n_ra * n_fb), -1.0, 1.0))
    return max(w.theta_sim - cosine, 0.0)


def combine_artifact_terms(sla: float, tla: float, sga: float,
                           w: LossWeights = DEFAULT_WEIGHTS) -> float:
    return sla + tla + w.lambda_sga * sga


def artifact_bias_correction_terms(x_fb: Image, x_ra: Image, sl_mask: BinaryMask,
                                   veg_mask: BinaryMask, tl_mask: BinaryMask,
                                   sga: PenaltyHook = sga_standin,
                                   w: LossWeights = DEFAULT_WEIGHTS) -> Dict[str, float]:
    """sla, tla_cos, sga and their weighted sum abc"""
    x_fb = as_image(x_fb, "x_fb")
    gray_ra = to_grayscale(as_image(x_ra, "x_ra"))
    check_same_shape(gray_ra, x_fb, "x_ra/x_fb")

    sl_bright = streetlight_bright_mask(gray_ra, sl_mask)
    sla = street_light_luminance_loss(x_fb, sl_bright, veg_mask, w)
    tla = traffic_light_luminance_adjust_loss(gray_ra, x_fb, tl_mask, w)

    lights = mask_union(as_mask(sl_mask), as_mask(tl_mask))
    gm = sobel_gradient(x_fb)[:, :, 0] * lights
    em = canny_edges(gray_ra, high=w.edge_threshold).astype(np.float64) * lights
    penalty = float(sga(gm, em))
    return {
        "sla": sla,
        "tla_cos": tla,
        "sga": penalty,
        "abc": combine_artifact_terms(sla, tla, penalty, w),
    }


def artifact_bias_correction_loss(x_fb: Image, x_ra: Image, sl_mask: BinaryMask,
                                  veg_mask: BinaryMask, tl_mask: BinaryMask,
                                  sga: PenaltyHook = sga_standin,
                                  w: LossWeights = DEFAULT_WEIGHTS) -> float:
    return artifact_bias_correction_terms(x_fb, x_ra, sl_mask, veg_mask, tl_mask, sga, w)["abc"]


# =============================================================================
# Color bias and appearance consistency
# =============================================================================

def color_bias_correction_loss(m_soc: BinaryMask, x_rec: Image, x_ra: Image,
                               w: LossWeights = DEFAULT_WEIGHTS) -> float:
    return midf(m_soc, x_rec, x_ra, w)


def appearance_consistency_a(q_ao: BinaryMask, x_ab_mix: Image, x_rb: Image,
                             w: LossWeights = DEFAULT_WEIGHTS) -> float:
    return midf(q_ao, x_ab_mix, x_rb, w)


def appearance_consistency_b(q_bo: BinaryMask, q_con: BinaryMask, x_ba_mix: Image,
                             x_ra: Image, x_rb: Image, cgr: PenaltyHook = cgr_standin,
                             w: LossWeights = DEFAULT_WEIGHTS) -> float:
    """
    Object term against the DC image plus a context gradient term.

    The context term compares the translated mix with the thermal source
    x_rb, across modalities.
    """
    x_ba_mix = as_image(x_ba_mix, "x_ba_mix")
    x_rb = as_image(x_rb, "x_rb")
    check_same_size(x_ba_mix, x_rb, "x_ba_mix/x_rb")
    q_con = as_mask(q_con, "q_con")
    objects = midf(q_bo, x_ba_mix, x_ra, w)
    context = float(cgr(apply_mask(q_con, x_ba_mix), apply_mask(q_con, x_rb)))
    return objects + context


# =============================================================================
# Aggregation
# =============================================================================

LEAF_TERMS = ("abc", "cbc", "ac_a", "ac_b", "tll", "tlc")
REPORT_KEYS = ("sla", "tla_cos", "abc", "cbc", "ac_a", "ac_b", "tll", "tlc", "total_partial")


@dataclass
class LossReport:
    abc: float
    cbc: float
    ac_a: float
    ac_b: float
    tll: float
    tlc: float
    total_partial: float
    sla: Optional[float] = None
    tla_cos: Optional[float] = None

    def to_dict(self) -> Dict[str, Optional[float]]:
        return {key: getattr(self, key) for key in REPORT_KEYS}


def aggregate(terms: Mapping[str, float]) -> LossReport:
    """
    Partial objective: (abc + cbc) + (ac_a + ac_b) + (tll + tlc).

    The baseline GAN objective is not part of the sum. sla and tla_cos are
    carried for reporting only; they are already inside abc.
    """
    missing = [k for k in LEAF_TERMS if terms.get(k) is None]
    if missing:
        raise MissingTermError(missing)
    bc = terms["abc"] + terms["cbc"]
    ac = terms["ac_a"] + terms["ac_b"]
    tla = terms["tll"] + terms["tlc"]
    return LossReport(
        abc=terms["abc"], cbc=terms["cbc"],
        ac_a=terms["ac_a"], ac_b=terms["ac_b"],
        tll=terms["tll"], tlc=terms["tlc"],
        total_partial=bc + ac + tla,
        sla=terms.get("sla"), tla_cos=terms.get("tla_cos"),
    )
