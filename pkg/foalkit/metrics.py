# -*- coding: utf-8 -*-
"""
metrics.py - Translation quality metrics
========================================

- apce: mean precision of the translated image's Canny edges against the
  (slightly dilated) edges of the thermal source, over several thresholds
- class_iou / ConfusionMatrix: per-class IoU and mIoU of label maps
- light_color_accuracy: how often a translated traffic light shows the
  annotated color
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .foalconf import APCE_HIGH_THRESHOLDS, APCE_LOW_RATIO, APCE_TOLERANCE_RADIUS, UNCERTAIN_ID
from .imagecore import (
    ConfigError, FoalError, Image, LabelMap,
    as_image, as_labels, canny_edges, check_same_size, dilate_mask, popcount, to_grayscale,
)
from .trafficlight import DEFAULT_PARAMS, TlColorParams, classify_light_color

logger = logging.getLogger(__name__)

N_IDS = 256


class NoValidPixelsError(FoalError):
    """Nothing left to score once uncertain pixels are excluded"""
    pass


# =============================================================================
# APCE
# =============================================================================

@dataclass(frozen=True)
class ApceConfig:
    high_thresholds: Tuple[float, ...] = APCE_HIGH_THRESHOLDS
    low_ratio: float = APCE_LOW_RATIO
    tolerance_radius: int = APCE_TOLERANCE_RADIUS
    strict: bool = False     # empty translated edge map always scores 0

    def __post_init__(self):
        t = self.high_thresholds
        if not t:
            raise ConfigError("must not be empty", "apce.high_thresholds")
        if any(not 0.0 < v <= 1.0 for v in t):
            raise ConfigError("values must lie in (0, 1]", "apce.high_thresholds")
        if any(b <= a for a, b in zip(t, t[1:])):
            raise ConfigError("must be strictly increasing", "apce.high_thresholds")
        if not 0.0 < self.low_ratio <= 1.0:
            raise ConfigError("must lie in (0, 1]", "apce.low_ratio")
        if self.tolerance_radius < 0:
            raise ConfigError("must be >= 0", "apce.tolerance_radius")


def edge_precision(translated_edges: np.ndarray, source_edges: np.ndarray,
                   radius: int, strict: bool = False) -> float:
    """
    Share of translated edge pixels within radius of a source edge.

    An empty translated map scores 1 only when the source has no edges
    either (0 in strict mode); edges lost to blur count against it.
    """
    n = popcount(translated_edges)
    if n == 0:
        return 1.0 if not strict and popcount(source_edges) == 0 else 0.0
    hits = popcount(translated_edges & dilate_mask(source_edges, radius))
    return hits / n


def apce(translated: Image, source_ntir: Image, cfg: ApceConfig = ApceConfig()) -> float:
    translated = to_grayscale(as_image(translated, "translated"))
    source = to_grayscale(as_image(source_ntir, "source"))
    check_same_size(translated, source, "translated/source")

    scores = []
    for high in cfg.high_thresholds:
        low = cfg.low_ratio * high
        e_tr = canny_edges(translated, low, high)
        e_src = canny_edges(source, low, high)
        scores.append(edge_precision(e_tr, e_src, cfg.tolerance_radius, cfg.strict))
    return float(np.mean(scores))


# =============================================================================
# IoU
# =============================================================================

@dataclass
class SegReport:
    per_class: Dict[int, float] = field(default_factory=dict)
    miou: float = 0.0
    miou_soc: Optional[float] = None

    def to_dict(self, names: Optional[Dict[int, str]] = None) -> Dict:
        names = names or {}
        return {
            "per_class": {names.get(c, str(c)): v for c, v in sorted(self.per_class.items())},
            "miou": self.miou,
            "miou_soc": self.miou_soc,
        }


class ConfusionMatrix:
    """Pixel counts, rows = ground truth, columns = prediction"""

    def __init__(self, uncertain_id: int = UNCERTAIN_ID):
        self.uncertain_id = uncertain_id
        self.counts = np.zeros((N_IDS, N_IDS), dtype=np.int64)

    def add(self, pred: LabelMap, gt: LabelMap) -> None:
        pred = as_labels(pred, "pred")
        gt = as_labels(gt, "gt")
        check_same_size(pred, gt, "pred/gt")
        valid = gt != self.uncertain_id
        index = N_IDS * gt[valid].astype(np.int64) + pred[valid]
        self.counts += np.bincount(index, minlength=N_IDS * N_IDS).reshape(N_IDS, N_IDS)

    def reset(self) -> None:
        self.counts[:] = 0

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def report(self, classes: Optional[Iterable[int]] = None,
               soc_ids: Iterable[int] = ()) -> SegReport:
        """
        IoU per class present in prediction or ground truth.

        classes restricts the scored ids; by default every id seen except
        the uncertain id.
        """
        if self.total == 0:
            raise NoValidPixelsError("no ground-truth pixel outside the uncertain id")
        inter = np.diag(self.counts)
        union = self.counts.sum(axis=0) + self.counts.sum(axis=1) - inter
        if classes is None:
            classes = [c for c in np.flatnonzero(union) if c != self.uncertain_id]

        per_class = {}
        for c in sorted(set(int(c) for c in classes)):
            if union[c] > 0:
                per_class[c] = float(inter[c] / union[c])
        if not per_class:
            raise NoValidPixelsError("no scored class occurs in prediction or ground truth")

        soc = [per_class[c] for c in sorted(set(soc_ids)) if c in per_class]
        return SegReport(
            per_class=per_class,
            miou=float(np.mean(list(per_class.values()))),
            miou_soc=float(np.mean(soc)) if soc else None,
        )


def class_iou(pred: LabelMap, gt: LabelMap, classes: Optional[Iterable[int]] = None,
              soc_ids: Iterable[int] = (), uncertain_id: int = UNCERTAIN_ID) -> SegReport:
    cm = ConfusionMatrix(uncertain_id)
    cm.add(pred, gt)
    return cm.report(classes, soc_ids)


# =============================================================================
# Traffic-light color
# =============================================================================

def light_color_accuracy(pairs: Iterable[Tuple[Image, str]],
                         params: TlColorParams = DEFAULT_PARAMS) -> float:
    """Fraction of (translated crop, annotated color) pairs classified as annotated"""
    total = 0
    correct = 0
    for crop, expected in pairs:
        total += 1
        if classify_light_color(crop, params) == expected:
            correct += 1
    if total == 0:
        raise NoValidPixelsError("no traffic-light instances to score")
    logger.info("light color accuracy %d/%d", correct, total)
    return correct / total
