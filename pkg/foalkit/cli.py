#!/usr/bin/env python3
"""
foalkit command line interface

Usage:
    foalkit <command> [common options] [arguments]

Commands:
    mix            occlusion-aware mix of a real and a fake image of one domain
    loss           evaluate every loss a manifest has inputs for
    schedule       replay a (domain, z_soc, z_global) trace through the scheduler
    apce           edge consistency of translations against thermal sources
    iou            per-class IoU / mIoU of predicted label maps
    convert-light  red <-> green conversion of traffic lights
    prep           resize and center-crop an image/label directory pair
    soc-index      index label directories into SOC sample sets

Common options:
    --config PATH   YAML run configuration (default: $FOALKIT_CONFIG)
    --seed N        random seed
    --out-dir DIR   where output files go
    --strict-apce   an empty translated edge map always scores 0
    --jobs N        worker processes for directory modes
    -v, --verbose   log progress to stderr (-vv for debug)

Examples:
    foalkit mix --domain B real.png fake.png real_labels.png fake_labels.png
    foalkit loss manifest.yaml --out-dir report
    foalkit schedule trace.txt --seed 7
    foalkit apce translated/ thermal/ --jobs 4
    foalkit iou pred/ gt/

Reports go to --out-dir and, for loss, schedule, apce and iou, to stdout as
JSON. Diagnostics go to stderr. Exit status is 0 on success, 1 on any error.
"""

import argparse
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from . import __version__
from .augment import resize_center_crop
from .foalconf import RESIZE_WH, CROP_WH
from .imagecore import EmptyMaskError, FoalError, ShapeMismatchError, mask_union
from .losses import (
    LEAF_TERMS, REPORT_KEYS,
    aggregate, appearance_consistency_a, appearance_consistency_b,
    artifact_bias_correction_terms, color_bias_correction_loss,
)
from .metrics import ConfusionMatrix, apce
from .oamix import DOMAINS, DOMAIN_A, DOMAIN_B, oamix_pipeline
from .pngio import (
    ParseError, dumps_json, list_pngs, read_image, read_labels, read_mask,
    write_csv, write_image, write_json, write_labels, write_mask,
)
from .runconfig import RunConfig, load_config
from .scheduler import (
    POOL_SOC, SampleIndex, build_soc_sets, new_state, replay, synthetic_pools,
)
from .trafficlight import (
    bright_dark_masks, classify_light_color, color_region_masks, convert_color,
    convert_light_instances, thermal_region_masks, traffic_light_color_loss,
    traffic_light_luminance_loss,
)

logger = logging.getLogger(__name__)


class MissingInputError(FoalError):
    """A manifest provides no input for anything that was asked"""
    pass


def get_version_string() -> str:
    return f"foalkit {__version__}"


# =============================================================================
# Shared helpers
# =============================================================================

def _out_path(cfg: RunConfig, name: str) -> str:
    return os.path.join(cfg.out_dir, name)


def _emit(obj: Any) -> None:
    sys.stdout.write(dumps_json(obj))


def _pair_inputs(first: str, second: str) -> List[Tuple[str, str, str]]:
    """(name, first_path, second_path) for two files or two directories paired by name"""
    if os.path.isdir(first) and os.path.isdir(second):
        pairs = []
        available = set(list_pngs(second))
        for name in list_pngs(first):
            if name not in available:
                raise ParseError(f"no counterpart for {name}", second)
            pairs.append((name, os.path.join(first, name), os.path.join(second, name)))
        if not pairs:
            raise ParseError("no PNG files", first)
        return pairs
    if os.path.isdir(first) or os.path.isdir(second):
        raise ParseError("expected two files or two directories", f"{first}, {second}")
    return [(os.path.basename(first), first, second)]


def _run_jobs(fn: Callable, items: Sequence, jobs: int) -> List:
    """fn over items, in order; jobs > 1 uses worker processes"""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _same_size(a: np.ndarray, b: np.ndarray, path_a: str, path_b: str) -> None:
    if a.shape[:2] != b.shape[:2]:
        raise ShapeMismatchError(a.shape, b.shape, f"{path_a} vs {path_b}")


# =============================================================================
# mix
# =============================================================================

def run_mix(cfg: RunConfig, real_path: str, fake_path: str, real_labels_path: str,
            fake_labels_path: str, domain: str) -> Dict:
    channels = 1 if domain == DOMAIN_B else 3
    real = read_image(real_path, "real", channels)
    fake = read_image(fake_path, "fake", channels)
    real_labels = read_labels(real_labels_path, "real labels")
    fake_labels = read_labels(fake_labels_path, "fake labels")
    _same_size(real, real_labels, real_path, real_labels_path)
    _same_size(fake, fake_labels, fake_path, fake_labels_path)
    _same_size(real, fake, real_path, fake_path)

    rng = np.random.default_rng(cfg.seed)
    out = oamix_pipeline(real, fake, real_labels, fake_labels, domain, cfg.categories, rng)
    res = out.result

    write_image(_out_path(cfg, "mixed.png"), res.mixed)
    write_mask(_out_path(cfg, "q_orig.png"), res.q_orig)
    write_mask(_out_path(cfg, "q_flip.png"), res.q_flip)
    write_mask(_out_path(cfg, "context.png"), res.context)
    sidecar = {
        "domain": domain,
        "seed": cfg.seed,
        "ala_factor": res.ala_factor,
        "regions": out.inventory(),
        "tl_flips": None if out.tl_flips is None else out.tl_flips.flipped,
    }
    write_json(_out_path(cfg, "mix.json"), sidecar)
    logger.info("mix written to %s", cfg.out_dir)
    return sidecar


# =============================================================================
# loss
# =============================================================================

MANIFEST_IMAGES = {
    "x_ra": 3, "x_fa": 3, "x_rec": 3, "x_ba_mix": 3,
    "x_rb": 1, "x_fb": 1, "x_ab_mix": 1,
}
MANIFEST_LABELS = ("labels_a", "labels_b")
MANIFEST_MASKS = ("q_ao", "q_bo", "q_bf", "q_con")

TERM_INPUTS = {
    "abc": ("x_fb", "x_ra", "labels_a"),
    "cbc": ("x_rec", "x_ra", "labels_a"),
    "ac_a": ("q_ao", "x_ab_mix", "x_rb"),
    "ac_b": ("q_bo", "q_con", "x_ba_mix", "x_ra", "x_rb"),
    "tll": ("x_fa", "x_rb", "labels_b"),
    "tlc": ("x_ra", "x_fa", "x_rb", "labels_a", "labels_b"),
}


def load_manifest(path: str) -> Dict[str, str]:
    """Manifest keys mapped to paths, relative paths taken from the manifest's directory"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = yaml.safe_load(f)
    except FileNotFoundError:
        raise ParseError("no such file", path)
    except yaml.YAMLError as e:
        raise ParseError(f"invalid manifest ({e})", path)
    if not isinstance(doc, dict):
        raise ParseError("manifest must be a mapping of input name to path", path)

    known = set(MANIFEST_IMAGES) | set(MANIFEST_LABELS) | set(MANIFEST_MASKS)
    base = os.path.dirname(os.path.abspath(path))
    entries = {}
    for key, value in doc.items():
        if key not in known:
            raise ParseError("unknown manifest key", path, str(key))
        if not isinstance(value, str):
            raise ParseError("expected a file path", path, key)
        entries[key] = value if os.path.isabs(value) else os.path.join(base, value)
        if not os.path.isfile(entries[key]):
            raise ParseError(f"no such file {entries[key]}", path, key)
    return entries


def _load_inputs(entries: Dict[str, str]) -> Dict[str, np.ndarray]:
    inputs = {}
    for key, path in entries.items():
        if key in MANIFEST_IMAGES:
            inputs[key] = read_image(path, key, MANIFEST_IMAGES[key])
        elif key in MANIFEST_LABELS:
            inputs[key] = read_labels(path, key)
        else:
            inputs[key] = read_mask(path, key)
    if "q_con" not in inputs and "q_bo" in inputs and "q_bf" in inputs:
        inputs["q_con"] = ~mask_union(inputs["q_bo"], inputs["q_bf"])
    return inputs


def _loss_terms(name: str, inp: Dict[str, np.ndarray], cfg: RunConfig) -> Dict[str, float]:
    cats = cfg.categories
    w = cfg.loss
    if name == "abc":
        la = inp["labels_a"]
        terms = artifact_bias_correction_terms(
            inp["x_fb"], inp["x_ra"], la == cats.streetlight_id, la == cats.vegetation_id,
            la == cats.traffic_light_id, w=w)
        return {"abc": terms["abc"], "sla": terms["sla"], "tla_cos": terms["tla_cos"]}
    if name == "cbc":
        m_soc = np.isin(inp["labels_a"], sorted(cats.soc_set))
        return {"cbc": color_bias_correction_loss(m_soc, inp["x_rec"], inp["x_ra"], w)}
    if name == "ac_a":
        return {"ac_a": appearance_consistency_a(inp["q_ao"], inp["x_ab_mix"], inp["x_rb"], w)}
    if name == "ac_b":
        return {"ac_b": appearance_consistency_b(inp["q_bo"], inp["q_con"], inp["x_ba_mix"],
                                                 inp["x_ra"], inp["x_rb"], w=w)}
    if name == "tll":
        masks = bright_dark_masks(inp["x_rb"], inp["labels_b"] == cats.traffic_light_id)
        return {"tll": traffic_light_luminance_loss(inp["x_fa"], masks)}
    masks_ra = color_region_masks(inp["x_ra"], inp["labels_a"] == cats.traffic_light_id, cfg.traffic_light)
    masks_fa = thermal_region_masks(inp["x_rb"], inp["labels_b"] == cats.traffic_light_id)
    return {"tlc": traffic_light_color_loss(inp["x_ra"], inp["x_fa"], masks_ra, masks_fa, cfg.traffic_light)}


def run_loss(cfg: RunConfig, manifest_path: str) -> Dict:
    """
    Every loss the manifest has inputs for.

    A term without its inputs, or whose region is empty in the given label
    maps, is reported as {"skipped": [reasons]}; it is never a silent zero.
    """
    inputs = _load_inputs(load_manifest(manifest_path))
    values: Dict[str, float] = {}
    skipped: Dict[str, Dict[str, List[str]]] = {}
    for name in LEAF_TERMS:
        missing = [k for k in TERM_INPUTS[name] if k not in inputs]
        if missing:
            skipped[name] = {"skipped": missing}
            continue
        try:
            values.update(_loss_terms(name, inputs, cfg))
        except EmptyMaskError as e:
            skipped[name] = {"skipped": [e.msg]}
    if not values:
        raise MissingInputError(f"{manifest_path}: no loss term has all of its inputs")

    if "abc" in skipped:
        skipped["sla"] = skipped["tla_cos"] = skipped["abc"]
    incomplete = [k for k in LEAF_TERMS if k in skipped]
    if incomplete:
        skipped["total_partial"] = {"skipped": incomplete}
    else:
        values["total_partial"] = aggregate(values).total_partial

    report = {key: values[key] if key in values else skipped[key] for key in REPORT_KEYS}
    write_json(_out_path(cfg, "loss.json"), report)
    return report


# =============================================================================
# schedule
# =============================================================================

def parse_trace(text: str, path: str = "") -> List[Tuple[str, float, float]]:
    """Trace rows 'domain, z_soc, z_global'; commas or blanks separate, '#' starts a comment"""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p for p in re.split(r"[,\s]+", line) if p]
        if len(parts) != 3:
            raise ParseError(f"expected 'domain, z_soc, z_global', got {raw.strip()!r}", path, line=lineno)
        domain = parts[0]
        if domain not in DOMAINS:
            raise ParseError(f"unknown domain {domain!r}", path, "domain", lineno)
        values = []
        for field, text_value in zip(("z_soc", "z_global"), parts[1:]):
            try:
                value = float(text_value)
            except ValueError:
                raise ParseError(f"not a number: {text_value!r}", path, field, lineno)
            if not np.isfinite(value) or value < 0.0:
                raise ParseError(f"must be a finite value >= 0, got {text_value}", path, field, lineno)
            values.append(value)
        rows.append((domain, values[0], values[1]))
    return rows


def _load_index(path: str) -> Dict[str, List[SampleIndex]]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = yaml.safe_load(f)
    except FileNotFoundError:
        raise ParseError("no such file", path)
    except yaml.YAMLError as e:
        raise ParseError(f"invalid index ({e})", path)
    if not isinstance(doc, dict):
        raise ParseError("expected a mapping of domain to samples", path)
    index = {}
    for domain in DOMAINS:
        entries = doc.get(domain)
        if not isinstance(entries, list):
            raise ParseError("expected a list of samples", path, domain)
        try:
            index[domain] = [SampleIndex.from_dict(e) for e in entries]
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"bad sample entry ({e})", path, domain)
    return index


def run_schedule(cfg: RunConfig, trace_path: str, index_path: Optional[str] = None) -> Dict:
    try:
        with open(trace_path, "r", encoding="utf-8") as f:
            rows = parse_trace(f.read(), trace_path)
    except FileNotFoundError:
        raise ParseError("no such file", trace_path)

    if index_path:
        index = _load_index(index_path)
        pools = {d: build_soc_sets(index[d], cfg.categories) for d in DOMAINS}
    else:
        pools = synthetic_pools(cfg.schedule)
    state = new_state(pools, cfg.seed, cfg.schedule)
    draws = replay(state, rows)

    summary = {}
    for domain in DOMAINS:
        mine = [d for d in draws if d.domain == domain]
        soc = sum(1 for d in mine if d.pool == POOL_SOC)
        summary[domain] = {
            "draws": len(mine),
            "soc_draws": soc,
            "soc_frequency": soc / len(mine) if mine else None,
        }
    report = {
        "seed": cfg.seed,
        "decisions": [
            {"step": i, "domain": d.domain, "pool": d.pool, "sample": d.sample_id}
            for i, d in enumerate(draws, start=1)
        ],
        "summary": summary,
    }
    write_json(_out_path(cfg, "schedule.json"), report)
    return report


def run_soc_index(cfg: RunConfig, label_dirs: Dict[str, str]) -> Dict:
    doc = {}
    for domain, directory in label_dirs.items():
        entries = []
        for name in list_pngs(directory):
            path = os.path.join(directory, name)
            entry = SampleIndex.from_labels(os.path.splitext(name)[0], read_labels(path),
                                            cfg.categories, label_path=path)
            entries.append(entry.to_dict())
        doc[domain] = entries
        logger.info("domain %s: %d samples, %d with SOC", domain, len(entries),
                    sum(1 for e in entries if e["has_soc"]))
    write_json(_out_path(cfg, "soc_index.json"), doc)
    return doc


# =============================================================================
# apce / iou
# =============================================================================

def _apce_job(item):
    name, translated_path, source_path, apce_cfg = item
    translated = read_image(translated_path, "translated")
    source = read_image(source_path, "source", channels=1)
    _same_size(translated, source, translated_path, source_path)
    return name, apce(translated, source, apce_cfg)


def run_apce(cfg: RunConfig, translated: str, source: str) -> Dict:
    items = [(n, a, b, cfg.apce) for n, a, b in _pair_inputs(translated, source)]
    rows = _run_jobs(_apce_job, items, cfg.jobs)
    mean = float(np.mean([v for _, v in rows]))
    report = {
        "images": [{"name": n, "apce": v} for n, v in rows],
        "mean": mean,
        "strict": cfg.apce.strict,
    }
    write_json(_out_path(cfg, "apce.json"), report)
    write_csv(_out_path(cfg, "apce.csv"), ["name", "apce"], list(rows) + [["mean", mean]])
    return report


def _confusion_job(item):
    name, pred_path, gt_path, uncertain_id = item
    pred = read_labels(pred_path, "pred")
    gt = read_labels(gt_path, "gt")
    _same_size(pred, gt, pred_path, gt_path)
    cm = ConfusionMatrix(uncertain_id)
    cm.add(pred, gt)
    return name, cm.counts


def run_iou(cfg: RunConfig, pred: str, gt: str) -> Dict:
    uncertain = cfg.categories.uncertain_id
    items = [(n, a, b, uncertain) for n, a, b in _pair_inputs(pred, gt)]
    results = _run_jobs(_confusion_job, items, cfg.jobs)

    classes = sorted(cfg.palette.values())
    soc = cfg.categories.soc_set
    names = cfg.category_names()
    total = ConfusionMatrix(uncertain)
    images = []
    for name, counts in results:
        one = ConfusionMatrix(uncertain)
        one.counts += counts
        total.counts += counts
        images.append((name, one.report(classes, soc)))
    dataset = total.report(classes, soc)

    header = ["name", "miou", "miou_soc"] + [names[c] for c in classes]

    def row(name, rep):
        return [name, rep.miou, "" if rep.miou_soc is None else rep.miou_soc] + \
               ["" if c not in rep.per_class else rep.per_class[c] for c in classes]

    report = {
        "images": [dict(rep.to_dict(names), name=n) for n, rep in images],
        "dataset": dataset.to_dict(names),
    }
    write_json(_out_path(cfg, "iou.json"), report)
    write_csv(_out_path(cfg, "iou.csv"), header,
              [row(n, rep) for n, rep in images] + [row("dataset", dataset)])
    return report


# =============================================================================
# convert-light / prep
# =============================================================================

def run_convert_light(cfg: RunConfig, source: str, labels: Optional[str] = None) -> Dict:
    """
    Convert traffic-light colors.

    Without labels each input is one instance crop; with labels every
    traffic-light instance of each full frame is converted in place.
    """
    params = cfg.traffic_light
    if labels is None:
        if os.path.isdir(source):
            paths = [(n, os.path.join(source, n)) for n in list_pngs(source)]
        else:
            paths = [(os.path.basename(source), source)]
        pairs = [(n, p, None) for n, p in paths]
    else:
        pairs = _pair_inputs(source, labels)

    records = []
    for name, image_path, labels_path in pairs:
        image = read_image(image_path, "image", channels=3)
        if labels_path is None:
            out = convert_color(image, params)
            instances = [{"before": classify_light_color(image, params),
                          "after": classify_light_color(out, params)}]
        else:
            lab = read_labels(labels_path, "labels")
            _same_size(image, lab, image_path, labels_path)
            out, instances = convert_light_instances(image, lab == cfg.categories.traffic_light_id, params)
        write_image(_out_path(cfg, name), out)
        records.append({"name": name, "instances": instances})
    report = {"images": records}
    write_json(_out_path(cfg, "convert-light.json"), report)
    return report


def run_prep(cfg: RunConfig, images: str, labels: str,
             resize_wh: Tuple[int, int] = RESIZE_WH, crop_wh: Tuple[int, int] = CROP_WH) -> int:
    count = 0
    for name, image_path, labels_path in _pair_inputs(images, labels):
        image = read_image(image_path, "image")
        lab = read_labels(labels_path, "labels")
        _same_size(image, lab, image_path, labels_path)
        out_img, out_lab = resize_center_crop(image, lab, resize_wh, crop_wh)
        write_image(os.path.join(cfg.out_dir, "images", name), out_img)
        write_labels(os.path.join(cfg.out_dir, "labels", name), out_lab)
        count += 1
    logger.info("prepared %d pairs into %s", count, cfg.out_dir)
    return count


# =============================================================================
# Argument parsing
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="YAML run configuration")
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--out-dir", default=None, help="output directory")
    common.add_argument("--strict-apce", action="store_true", default=None,
                        help="empty translated edge maps score 0")
    common.add_argument("--jobs", type=int, default=None, help="worker processes")
    common.add_argument("-v", "--verbose", action="count", default=0, help="more logging")

    parser = argparse.ArgumentParser(prog="foalkit", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=get_version_string())
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mix", parents=[common], help="occlusion-aware mix")
    p.add_argument("--domain", choices=DOMAINS, required=True)
    p.add_argument("real")
    p.add_argument("fake")
    p.add_argument("real_labels")
    p.add_argument("fake_labels")

    p = sub.add_parser("loss", parents=[common], help="loss report from a manifest")
    p.add_argument("manifest")

    p = sub.add_parser("schedule", parents=[common], help="replay a feedback trace")
    p.add_argument("trace")
    p.add_argument("--index", default=None, help="soc_index.json from soc-index")

    p = sub.add_parser("apce", parents=[common], help="edge consistency")
    p.add_argument("translated")
    p.add_argument("source")

    p = sub.add_parser("iou", parents=[common], help="per-class IoU")
    p.add_argument("pred")
    p.add_argument("gt")

    p = sub.add_parser("convert-light", parents=[common], help="traffic-light color conversion")
    p.add_argument("source", help="instance crop(s), or full frames with --labels")
    p.add_argument("--labels", default=None)

    p = sub.add_parser("prep", parents=[common], help="resize and center-crop")
    p.add_argument("images")
    p.add_argument("labels")
    p.add_argument("--resize", type=int, nargs=2, metavar=("W", "H"), default=list(RESIZE_WH))
    p.add_argument("--crop", type=int, nargs=2, metavar=("W", "H"), default=list(CROP_WH))

    p = sub.add_parser("soc-index", parents=[common], help="index label directories")
    p.add_argument("labels_a")
    p.add_argument("labels_b")
    return parser


def _setup_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr,
                        format="%(levelname)s [%(name)s] %(message)s")
    logging.getLogger("foalkit").setLevel(level)


# Path arguments per command, checked before any work starts
INPUT_ARGS = {
    "mix": ("real", "fake", "real_labels", "fake_labels"),
    "loss": ("manifest",),
    "schedule": ("trace", "index"),
    "apce": ("translated", "source"),
    "iou": ("pred", "gt"),
    "convert-light": ("source", "labels"),
    "prep": ("images", "labels"),
    "soc-index": ("labels_a", "labels_b"),
}


def check_input_paths(opts: argparse.Namespace) -> None:
    for name in INPUT_ARGS[opts.command]:
        path = getattr(opts, name, None)
        if path is not None and not os.path.exists(path):
            raise ParseError("no such file or directory", path, name)


def _dispatch(opts: argparse.Namespace, cfg: RunConfig) -> Optional[Dict]:
    cmd = opts.command
    if cmd == "mix":
        run_mix(cfg, opts.real, opts.fake, opts.real_labels, opts.fake_labels, opts.domain)
        return None
    if cmd == "loss":
        return run_loss(cfg, opts.manifest)
    if cmd == "schedule":
        return run_schedule(cfg, opts.trace, opts.index)
    if cmd == "apce":
        return run_apce(cfg, opts.translated, opts.source)
    if cmd == "iou":
        return run_iou(cfg, opts.pred, opts.gt)
    if cmd == "convert-light":
        run_convert_light(cfg, opts.source, opts.labels)
        return None
    if cmd == "prep":
        run_prep(cfg, opts.images, opts.labels, tuple(opts.resize), tuple(opts.crop))
        return None
    run_soc_index(cfg, {DOMAIN_A: opts.labels_a, DOMAIN_B: opts.labels_b})
    return None


def main(args: Optional[List[str]] = None) -> int:
    """Main entry point"""
    if args is None:
        args = sys.argv[1:]
    parser = build_parser()
    try:
        opts = parser.parse_args(args)
    except SystemExit as e:
        return int(e.code or 0)

    _setup_logging(opts.verbose)
    try:
        cfg = load_config(opts.config).with_overrides(
            seed=opts.seed, out_dir=opts.out_dir, strict_apce=opts.strict_apce, jobs=opts.jobs)
        check_input_paths(opts)
        report = _dispatch(opts, cfg)
    except FoalError as e:
        print(f"foalkit: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"foalkit: {e}", file=sys.stderr)
        return 1
    if report is not None:
        _emit(report)
    return 0


if __name__ == '__main__':
    sys.exit(main())
