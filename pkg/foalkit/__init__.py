# -*- coding: utf-8 -*-
"""
foalkit - Thermal-to-color translation toolkit
==============================================

Reference implementations of the data-side machinery around a
night-thermal to day-color image translator: occlusion-aware mixing,
forward loss evaluators, the dual feedback sample scheduler and the
evaluation metrics. No network, no training loop.

Package Structure:
- foalconf.py     : Default constants and category palette
- imagecore.py    : Raster validation, masks, components, SSIM, Canny
- pngio.py        : PNG/JSON/CSV reading and atomic writing
- augment.py      : Paired resize/crop/flip preprocessing
- oamix.py        : Occlusion-aware mixup and luminance adjustment
- losses.py       : Mask-based distances and the loss suite
- trafficlight.py : Traffic-light regions, color conversion and losses
- scheduler.py    : Dual feedback sample scheduling
- metrics.py      : APCE, IoU / mIoU, light color accuracy
- runconfig.py    : YAML run configuration
- cli.py          : Command line front end
"""

__version__ = "0.1.0"

from .imagecore import (
    FoalError, ConfigError, InvalidImageError, EmptyMaskError,
    ShapeMismatchError, ChannelMismatchError, BadThresholdsError,
)
from .oamix import CategoryConfig, MixResult, oamix_pipeline
from .losses import LossWeights, LossReport, MissingTermError, aggregate, midf
from .trafficlight import TlColorParams, TlRegionMasks, convert_color
from .scheduler import (
    SchedulerState, SampleIndex, ScheduleSettings, EmptyDatasetError, NegativeLossError,
    build_soc_sets, new_state, next_sample, update_state,
)
from .metrics import ApceConfig, SegReport, NoValidPixelsError, apce, class_iou
from .runconfig import RunConfig, load_config
