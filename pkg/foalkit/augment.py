# -*- coding: utf-8 -*-
"""
augment.py - Paired preprocessing and augmentation
==================================================

Image and label map always move together: the image is resampled
bilinearly, the label map by nearest neighbour so ids survive.
"""

from typing import Tuple

import numpy as np
from skimage.transform import resize

from .foalconf import RESIZE_WH, CROP_WH, AUGMENT_CROP, AUGMENT_FLIP_P
from .imagecore import (
    Image, LabelMap, ShapeMismatchError, as_image, as_labels, check_same_size,
    flip_horizontal,
)


def _pair(image: Image, labels: LabelMap) -> Tuple[Image, LabelMap]:
    image = as_image(image)
    labels = as_labels(labels)
    check_same_size(image, labels, "image/labels")
    return image, labels


def _crop(image: Image, labels: LabelMap, top: int, left: int, h: int, w: int):
    return image[top:top + h, left:left + w].copy(), labels[top:top + h, left:left + w].copy()


def resize_center_crop(image: Image, labels: LabelMap,
                       resize_wh: Tuple[int, int] = RESIZE_WH,
                       crop_wh: Tuple[int, int] = CROP_WH) -> Tuple[Image, LabelMap]:
    """Resize to resize_wh (W, H) then cut the centered crop_wh window"""
    image, labels = _pair(image, labels)
    rw, rh = resize_wh
    cw, ch = crop_wh
    if cw > rw or ch > rh:
        raise ShapeMismatchError((ch, cw), (rh, rw), "crop larger than resized frame")

    out_img = resize(image, (rh, rw, image.shape[2]), order=1, mode="edge",
                     anti_aliasing=False, preserve_range=True)
    out_lab = resize(labels, (rh, rw), order=0, mode="edge",
                     anti_aliasing=False, preserve_range=True).astype(np.uint8)
    out_img = np.clip(out_img, 0.0, 1.0)

    top = (rh - ch) // 2
    left = (rw - cw) // 2
    return _crop(out_img, out_lab, top, left, ch, cw)


def random_hflip(image: Image, labels: LabelMap, rng: np.random.Generator,
                 p: float = AUGMENT_FLIP_P) -> Tuple[Image, LabelMap, bool]:
    image, labels = _pair(image, labels)
    if rng.random() < p:
        return flip_horizontal(image), flip_horizontal(labels), True
    return image.copy(), labels.copy(), False


def random_crop(image: Image, labels: LabelMap, rng: np.random.Generator,
                size: int = AUGMENT_CROP) -> Tuple[Image, LabelMap]:
    image, labels = _pair(image, labels)
    h, w = labels.shape
    if size > h or size > w:
        raise ShapeMismatchError((size, size), (h, w), "crop larger than frame")
    top = int(rng.integers(0, h - size + 1))
    left = int(rng.integers(0, w - size + 1))
    return _crop(image, labels, top, left, size, size)
