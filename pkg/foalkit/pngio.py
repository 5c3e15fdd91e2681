# -*- coding: utf-8 -*-
"""
pngio.py - Raster and report I/O
================================

PNG conventions:

- images: 8-bit gray or RGB, v/255 on read, round(v*255) on write
- label maps: single-channel 8-bit PNG of category ids
- masks: single-channel PNG with {0, 255}

Every write goes to a temporary file in the target directory and is then
renamed over the destination.
"""

import csv
import io
import json
import logging
import os
import tempfile
from typing import Any, Iterable, List, Optional, Sequence

import numpy as np
from PIL import Image as PILImage, UnidentifiedImageError

from .foalconf import PNG_MAX
from .imagecore import FoalError, Image, LabelMap, BinaryMask, as_image, as_labels, as_mask

logger = logging.getLogger(__name__)


class ParseError(FoalError):
    """Input file could not be parsed as the declared format"""
    def __init__(self, msg: str, path: str = "", field: str = "", line: int = 0):
        self.path = path
        self.field = field
        self.line = line
        where = path
        if line:
            where = f"{where}:{line}"
        if field:
            where = f"{where} [{field}]" if where else f"[{field}]"
        super().__init__(f"{where}: {msg}" if where else msg)


# =============================================================================
# Atomic writes
# =============================================================================

def atomic_write_bytes(path: str, data: bytes) -> None:
    """Write data to path via a sibling temporary file and os.replace"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug("wrote %s (%d bytes)", path, len(data))


def _png_bytes(arr: np.ndarray) -> bytes:
    buf = io.BytesIO()
    # no timestamps or text chunks, so reruns are byte identical
    PILImage.fromarray(arr).save(buf, format="PNG")
    return buf.getvalue()


# =============================================================================
# Reading
# =============================================================================

def _open(path: str, field: str) -> PILImage.Image:
    try:
        with PILImage.open(path) as im:
            im.load()
            return im.copy()
    except FileNotFoundError:
        raise ParseError("no such file", path, field)
    except (UnidentifiedImageError, OSError) as e:
        raise ParseError(f"not a readable PNG ({e})", path, field)


def read_image(path: str, field: str = "image", channels: Optional[int] = None) -> Image:
    """Read an 8-bit PNG as a unit-interval (H, W, C) image"""
    im = _open(path, field)
    if channels is None:
        channels = 1 if im.mode in ("L", "I", "I;16", "1", "LA") else 3
    im = im.convert("L" if channels == 1 else "RGB")
    arr = np.asarray(im, dtype=np.float64) / PNG_MAX
    return as_image(arr, field)


def read_labels(path: str, field: str = "labels") -> LabelMap:
    im = _open(path, field)
    if im.mode not in ("L", "P"):
        raise ParseError(f"label map must be single-channel 8-bit, got mode {im.mode}", path, field)
    return as_labels(np.asarray(im, dtype=np.uint8), field)


def read_mask(path: str, field: str = "mask") -> BinaryMask:
    im = _open(path, field)
    arr = np.asarray(im.convert("L"), dtype=np.uint8)
    return as_mask(arr > PNG_MAX // 2, field)


# =============================================================================
# Writing
# =============================================================================

def write_image(path: str, img: Image) -> None:
    img = as_image(img)
    arr = np.round(img * PNG_MAX).astype(np.uint8)
    if arr.shape[2] == 1:
        arr = arr[:, :, 0]
    atomic_write_bytes(path, _png_bytes(arr))


def write_labels(path: str, labels: LabelMap) -> None:
    atomic_write_bytes(path, _png_bytes(as_labels(labels)))


def write_mask(path: str, m: BinaryMask) -> None:
    arr = as_mask(m).astype(np.uint8) * PNG_MAX
    atomic_write_bytes(path, _png_bytes(arr))


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_json(path: str, obj: Any) -> None:
    atomic_write_bytes(path, dumps_json(obj).encode("utf-8"))


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    atomic_write_bytes(path, buf.getvalue().encode("utf-8"))


def list_pngs(directory: str) -> List[str]:
    """Sorted PNG file names (not paths) in directory"""
    try:
        names = os.listdir(directory)
    except FileNotFoundError:
        raise ParseError("no such directory", directory)
    return sorted(n for n in names if n.lower().endswith(".png"))
