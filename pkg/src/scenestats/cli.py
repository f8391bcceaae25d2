"""Command-line surface: ingest, analyze, calibrate, compare, synth, resolve-labels.

Exit codes: 0 success, 1 I/O error, 2 input-format error, 3 insufficient
data, 4 configuration error, 5 failed comparison (compare only).

Every flag can also be set through ``--config FILE`` (flat TOML-style
key = value lines, see :mod:`scenestats.configfile`); explicit flags win.
The embedding table path may come from the SCENESTATS_EMBEDDINGS
environment variable when ``--embeddings`` is absent.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import multiprocessing
import os
import sys
from dataclasses import replace
from functools import partial
from pathlib import Path
from typing import Any, Optional, Sequence

from . import __version__
from .calibration import calibrate, mean_absolute_error
from .coco import parse_coco
from .configfile import load_config
from .errors import (
    AlignmentError,
    ConfigurationError,
    EmptyInputError,
    InsufficientDataError,
    ParseError,
    ScenestatsError,
)
from .filtering import FilterConfig, filter_scene
from .interchange import read_detections, write_detections
from .lexicon import EmbeddingTable, Taxonomy, parse_llm_response, resolve_labels
from .magnitudes import MagnitudeVector, extract_magnitudes
from .manifest import RunManifest, file_digest
from .raster import mask_to_bitmap
from .stats import (
    MAGNITUDE_ALIASES,
    CorrelationMatrix,
    boxplot_summary,
    correlation_matrix,
    fit_zipf,
    matrix_consistency,
    numerosity_distribution,
)
from .store import (
    STORE_FILENAME,
    detection_set_to_record,
    read_store,
    record_categories,
    record_to_detection_set,
    record_to_scene,
    scene_to_record,
    write_store,
)
from .synth import ItemSizeLaw, ScoreBands, SynthConfig, annotations_to_coco, generate
from .voc import parse_voc

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_FORMAT = 2
EXIT_INSUFFICIENT = 3
EXIT_CONFIG = 4
EXIT_COMPARE_FAIL = 5

ENV_EMBEDDINGS = "SCENESTATS_EMBEDDINGS"

BOXPLOT_MAGNITUDES = ("cum_area_rel", "item_size_rel", "hull_rel", "density")


def fmt6(value: float) -> str:
    """Numeric report values are serialized with 6 significant digits."""
    return f"{value:.6g}"


def round6(value: float) -> float:
    if value is None or isinstance(value, bool):
        return value
    if math.isnan(value) or math.isinf(value):
        return value
    return float(f"{value:.6g}")


def _write_json(path: Path, payload: Any) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_stuff_list(path: str | None) -> list[str]:
    if not path:
        return []
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [ln.strip() for ln in lines if ln.strip() and not ln.startswith("#")]


# ---------------------------------------------------------------------------
# flag/config resolution

def _resolved(args: argparse.Namespace, key: str, default: Any) -> Any:
    """Value priority: explicit flag > config file > built-in default."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    cfg = getattr(args, "_config_values", {})
    if key in cfg:
        return cfg[key]
    return default


def _load_config_values(args: argparse.Namespace) -> None:
    values: dict[str, Any] = {}
    if getattr(args, "config", None):
        values = load_config(args.config)
    args._config_values = values


# ---------------------------------------------------------------------------
# ingest

def _ingest_records(fmt: str, input_path: Path, stuff_names: list[str]):
    if fmt == "coco":
        dataset = parse_coco(input_path.read_text(encoding="utf-8"), stuff_names)
        return [scene_to_record(s, dataset.taxonomy) for s in dataset.scenes]
    if fmt == "voc":
        files = [input_path]
        if input_path.is_dir():
            files = sorted(input_path.glob("*.xml"))
            if not files:
                raise ParseError(f"no .xml files under {input_path}")
        records = []
        for f in files:
            scene = parse_voc(f.read_text(encoding="utf-8"), image_id=f.stem)
            records.append(scene_to_record(scene))
        return records
    if fmt == "detections":
        return [detection_set_to_record(ds)
                for ds in read_detections(input_path)]
    raise ConfigurationError(f"unknown ingest format {fmt!r}")


def cmd_ingest(args: argparse.Namespace) -> int:
    _load_config_values(args)
    fmt = _resolved(args, "format", None)
    if fmt not in ("coco", "voc", "detections"):
        raise ConfigurationError("--format must be coco, voc or detections")
    input_raw = _resolved(args, "input", None)
    out_raw = _resolved(args, "out", None)
    if not input_raw or not out_raw:
        raise ConfigurationError("--input and --out are required")
    input_path = Path(input_raw)
    out_dir = Path(out_raw)
    stuff_names = _read_stuff_list(_resolved(args, "stuff_list", None))

    records = _ingest_records(fmt, input_path, stuff_names)
    out_dir.mkdir(parents=True, exist_ok=True)
    n = write_store(records, out_dir / STORE_FILENAME)
    objects = sum(len(r.get("objects", [])) for r in records)
    RunManifest(
        command="ingest",
        argv=list(args._argv),
        config={"format": fmt, "input": str(input_path),
                "stuff_list": _resolved(args, "stuff_list", None)},
        inputs=[file_digest(input_path)] if input_path.is_file() else [],
        counts={"scenes": n, "objects": objects, "skipped": 0},
    ).write(out_dir)
    print(f"ingested {n} scenes ({objects} objects) -> {out_dir / STORE_FILENAME}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze

def _scene_metrics(record: dict, cfg: Optional[FilterConfig],
                   area_mode: str) -> dict:
    """Per-scene worker: numerosity, category count, magnitude vector.

    Detection records run through the filter first; scenes whose retained
    objects are not fully masked are counted for numerosity only.
    """
    rtype = record.get("type")
    if rtype == "detection":
        ds = record_to_detection_set(record)
        filtered = filter_scene(ds.detections, ds.image,
                                cfg if cfg is not None else FilterConfig())
        image = ds.image
        objects = [(d.mask, str(d.label)) for d in filtered.kept]
    else:
        scene = record_to_scene(record)
        image = scene.image
        objects = [(o.mask, str(o.category_id)) for o in scene.objects]

    n = len(objects)
    categories = record_categories(record) if rtype == "annotation" else \
        {label for _, label in objects}
    row = {
        "image_id": image.id,
        "source": image.source_dataset,
        "numerosity": n,
        "n_categories": len(categories),
        "magnitudes": None,
        "skip": None,
    }
    if n == 0:
        row["skip"] = "empty"
        return row
    if any(mask is None for mask, _ in objects):
        row["skip"] = "missing_masks"
        return row
    bitmaps = [mask_to_bitmap(mask, image) for mask, _ in objects]
    vec = extract_magnitudes(image, bitmaps, area_mode=area_mode)
    row["magnitudes"] = vec.as_tuple()
    return row


def _split_selector(split: str):
    if split == "all":
        return lambda row: True
    if split == "homogeneous":
        return lambda row: row["n_categories"] == 1
    if split == "heterogeneous":
        return lambda row: row["n_categories"] >= 2
    raise ConfigurationError(f"unknown split {split!r}")


def _rows_to_vectors(rows: list[dict]) -> list[MagnitudeVector]:
    out = []
    for row in rows:
        if row["magnitudes"] is None:
            continue
        n, cum, item, hull, dens = row["magnitudes"]
        out.append(MagnitudeVector(numerosity=int(n), cumulative_area_rel=cum,
                                   item_size_rel=item, hull_rel=hull,
                                   density=dens))
    return out


def _correlation_block(vectors, min_n, min_group_size, method) -> dict:
    try:
        matrix = correlation_matrix(vectors, min_n=min_n,
                                    min_group_size=min_group_size,
                                    method=method)
    except (InsufficientDataError, EmptyInputError) as e:
        return {"error": str(e)}
    block = matrix.to_dict()
    block["r"] = [[round6(v) for v in row] for row in block["r"]]
    block["p_raw"] = [[round6(v) for v in row] for row in block["p_raw"]]
    block["p_holm"] = [[round6(v) for v in row] for row in block["p_holm"]]
    return block


def cmd_analyze(args: argparse.Namespace) -> int:
    _load_config_values(args)
    store_raw = _resolved(args, "store", None)
    out_raw = _resolved(args, "out", None)
    if not store_raw or not out_raw:
        raise ConfigurationError("--store and --out are required")
    store_path = Path(store_raw)
    out_dir = Path(out_raw)
    split = _resolved(args, "split", "all")
    min_n = int(_resolved(args, "min_numerosity", 5))
    min_group_size = int(_resolved(args, "min_group_size", 1))
    zipf_method = _resolved(args, "zipf_method", "loglog_ls")
    zipf_nmin = int(_resolved(args, "zipf_nmin", 1))
    area_mode = _resolved(args, "area_mode", "union")
    corr_method = _resolved(args, "correlation_method", "pearson")
    jobs = int(_resolved(args, "jobs", 1))

    records = read_store(store_path)
    kind = records[0]["type"] if records else "annotation"
    cfg = None
    if kind == "detection":
        cfg = FilterConfig(
            threshold=float(_resolved(args, "threshold", 0.22)),
            floor=float(_resolved(args, "floor", 0.05)),
            dedup_iou=float(_resolved(args, "dedup_iou", 0.95)),
            max_area_frac=float(_resolved(args, "max_area_frac", 0.95)),
        )

    worker = partial(_scene_metrics, cfg=cfg, area_mode=area_mode)
    if jobs > 1 and len(records) > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(processes=jobs) as pool:
            rows = list(pool.imap(worker, records, chunksize=64))
    else:
        rows = [worker(r) for r in records]

    selector = _split_selector(split)
    selected = [row for row in rows if selector(row)]
    if not selected:
        raise InsufficientDataError(f"no scenes match split {split!r}")

    dist = numerosity_distribution(row["numerosity"] for row in selected)
    zipf = fit_zipf(dist, method=zipf_method, n_min=zipf_nmin)
    vectors_all = _rows_to_vectors(selected)

    blocks: dict[str, dict] = {}
    if split == "all":
        blocks["all"] = _correlation_block(vectors_all, min_n, min_group_size,
                                           corr_method)
        for name in ("homogeneous", "heterogeneous"):
            sub = [row for row in selected if _split_selector(name)(row)]
            blocks[name] = _correlation_block(_rows_to_vectors(sub), min_n,
                                              min_group_size, corr_method)
        if "error" in blocks["all"]:
            raise InsufficientDataError(blocks["all"]["error"])
    else:
        blocks[split] = _correlation_block(vectors_all, min_n, min_group_size,
                                           corr_method)
        if "error" in blocks[split]:
            raise InsufficientDataError(blocks[split]["error"])

    out_dir.mkdir(parents=True, exist_ok=True)

    with open(out_dir / "distribution.csv", "w", encoding="utf-8") as fh:
        fh.write("n,frequency,proportion\n")
        proportions = dist.proportions()
        for n in sorted(dist.counts):
            fh.write(f"{n},{int(dist.counts[n])},{fmt6(proportions[n])}\n")

    _write_json(out_dir / "zipf.json", {
        "method": zipf.method,
        "alpha": round6(zipf.alpha),
        "intercept": round6(zipf.intercept) if zipf.intercept is not None else None,
        "r_squared": round6(zipf.r_squared) if zipf.r_squared is not None else None,
        "n_min": zipf.n_min,
        "max_n": dist.max_n,
        "tail_fraction_above_40": round6(dist.tail_fraction(40)),
        "scenes": int(dist.total),
    })

    _write_json(out_dir / "correlations.json", {
        "split": split,
        "min_numerosity": min_n,
        "method": corr_method,
        "blocks": blocks,
    })

    with open(out_dir / "magnitudes.csv", "w", encoding="utf-8") as fh:
        fh.write("image_id,numerosity,cum_area_rel,item_size_rel,hull_rel,"
                 "density,source\n")
        for row in selected:
            if row["magnitudes"] is None:
                continue
            n, cum, item, hull, dens = row["magnitudes"]
            fh.write(f"{row['image_id']},{int(n)},{fmt6(cum)},{fmt6(item)},"
                     f"{fmt6(hull)},{fmt6(dens)},{row['source']}\n")
    with open(out_dir / "magnitudes.ndjson", "w", encoding="utf-8") as fh:
        for row in selected:
            if row["magnitudes"] is None:
                continue
            n, cum, item, hull, dens = row["magnitudes"]
            fh.write(json.dumps({
                "image_id": row["image_id"], "numerosity": int(n),
                "cum_area_rel": round6(cum), "item_size_rel": round6(item),
                "hull_rel": round6(hull), "density": round6(dens),
                "source": row["source"],
            }, sort_keys=True, separators=(",", ":")) + "\n")

    for short in BOXPLOT_MAGNITUDES:
        summary = boxplot_summary(vectors_all, short)
        with open(out_dir / f"boxplot_{short}.csv", "w", encoding="utf-8") as fh:
            fh.write("n,count,q1,median,q3,whisker_low,whisker_high,outliers\n")
            for row in summary:
                fh.write(f"{row.n},{row.count},{fmt6(row.q1)},{fmt6(row.median)},"
                         f"{fmt6(row.q3)},{fmt6(row.whisker_low)},"
                         f"{fmt6(row.whisker_high)},{row.outliers}\n")

    skipped = sum(1 for row in selected if row["magnitudes"] is None)
    RunManifest(
        command="analyze",
        argv=list(args._argv),
        config={
            "store": str(store_path), "split": split, "min_numerosity": min_n,
            "min_group_size": min_group_size, "zipf_method": zipf_method,
            "zipf_nmin": zipf_nmin, "area_mode": area_mode,
            "correlation_method": corr_method,
            "filter": None if cfg is None else {
                "threshold": cfg.threshold, "floor": cfg.floor,
                "dedup_iou": cfg.dedup_iou, "max_area_frac": cfg.max_area_frac,
            },
        },
        inputs=[file_digest(p) for p in [Path(store_path)] if p.is_file()],
        counts={"scenes": len(selected), "magnitude_rows": len(vectors_all),
                "magnitude_skipped": skipped},
    ).write(out_dir)
    print(f"analyzed {len(selected)} scenes -> {out_dir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# calibrate

def _reference_counts(path: Path, stuff_names: list[str]):
    """Reference numerosities: a COCO file or a one-count-per-line text file."""
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        dataset = parse_coco(text, stuff_names)
        return {s.image.id: len(s.objects) for s in dataset.scenes}
    counts = []
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            counts.append(int(line))
        except ValueError as e:
            raise ParseError(f"reference count must be an integer: {line!r}",
                             line=ln, source=str(path)) from e
    return counts


def cmd_calibrate(args: argparse.Namespace) -> int:
    _load_config_values(args)
    det_raw = _resolved(args, "detections", None)
    ref_raw = _resolved(args, "reference", None)
    out_raw = _resolved(args, "out", None)
    if not det_raw or not ref_raw or not out_raw:
        raise ConfigurationError("--detections, --reference and --out are required")
    det_path = Path(det_raw)
    ref_path = Path(ref_raw)
    out_dir = Path(out_raw)
    tmin = float(_resolved(args, "tmin", 0.10))
    tmax = float(_resolved(args, "tmax", 0.45))
    step = float(_resolved(args, "step", 0.01))
    floor = float(_resolved(args, "floor", 0.05))
    cfg = FilterConfig(threshold=max(floor, tmin), floor=floor,
                       dedup_iou=float(_resolved(args, "dedup_iou", 0.95)),
                       max_area_frac=float(_resolved(args, "max_area_frac", 0.95)))

    detection_sets = read_detections(det_path)
    reference = _reference_counts(ref_path, [])
    ref_counts = list(reference.values()) if isinstance(reference, dict) \
        else reference

    report = calibrate(detection_sets, ref_counts, cfg, tmin=tmin, tmax=tmax,
                       step=step)

    mae = None
    if isinstance(reference, dict):
        pred = {}
        best_cfg = replace(cfg, threshold=report.best_tau)
        for ds in detection_sets:
            scene = filter_scene(ds.detections, ds.image, best_cfg)
            pred[ds.image.id] = len(scene.kept)
        if set(pred.keys()) == set(reference.keys()):
            mae = mean_absolute_error(pred, reference)
        else:
            log.warning("detection and reference image ids differ; MAE skipped")

    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "calibration.json", {
        "best_tau": report.best_tau,
        "best": {
            "statistic": round6(report.best.statistic),
            "p_value": round6(report.best.p_value),
            "n1": report.best.n1,
            "n2": report.best.n2,
            "effective_n": round6(report.best.effective_n),
        },
        "mae_at_best": round6(mae) if mae is not None else None,
        "grid": [
            {"tau": tau, "statistic": round6(res.statistic),
             "p_value": round6(res.p_value)}
            for tau, res in report.grid
        ],
    })
    with open(out_dir / "grid.csv", "w", encoding="utf-8") as fh:
        fh.write("tau,statistic\n")
        for tau, res in report.grid:
            fh.write(f"{tau},{fmt6(res.statistic)}\n")
    RunManifest(
        command="calibrate",
        argv=list(args._argv),
        config={"detections": str(det_path), "reference": str(ref_path),
                "tmin": tmin, "tmax": tmax, "step": step, "floor": floor},
        inputs=[file_digest(det_path), file_digest(ref_path)],
        counts={"scenes": len(detection_sets), "grid_points": len(report.grid)},
    ).write(out_dir)
    print(f"best tau = {report.best_tau} "
          f"(D = {fmt6(report.best.statistic)}, "
          f"p = {fmt6(report.best.p_value)}, n_e = {fmt6(report.best.effective_n)})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# compare

def _load_correlation_block(path: Path, block: str | None) -> CorrelationMatrix:
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", offset=e.pos,
                         source=str(path)) from e
    blocks = payload.get("blocks")
    if not isinstance(blocks, dict) or not blocks:
        raise ParseError(f"{path}: no correlation blocks found")
    if block is None:
        block = "all" if "all" in blocks else sorted(blocks)[0]
    if block not in blocks:
        raise AlignmentError(f"{path}: no block named {block!r} "
                             f"(has {sorted(blocks)})")
    chosen = blocks[block]
    if "error" in chosen:
        raise InsufficientDataError(f"{path}: block {block!r}: {chosen['error']}")
    return CorrelationMatrix.from_dict(chosen)


def cmd_compare(args: argparse.Namespace) -> int:
    _load_config_values(args)
    min_consistency = float(_resolved(args, "min_consistency", 0.977))
    block = _resolved(args, "block", None)
    a = _load_correlation_block(Path(args.file_a), block)
    b = _load_correlation_block(Path(args.file_b), block)
    r = matrix_consistency(a, b)
    verdict = "PASS" if r >= min_consistency else "FAIL"
    print(f"consistency r = {fmt6(r)} (minimum {fmt6(min_consistency)}): {verdict}")
    return EXIT_OK if verdict == "PASS" else EXIT_COMPARE_FAIL


# ---------------------------------------------------------------------------
# synth

def cmd_synth(args: argparse.Namespace) -> int:
    _load_config_values(args)
    out_annotations = _resolved(args, "out_annotations", None)
    out_detections = _resolved(args, "out_detections", None)
    if not out_annotations or not out_detections:
        raise ConfigurationError("--out-annotations and --out-detections are required")

    n_scenes = _resolved(args, "n_scenes", None)
    if n_scenes is None:
        raise ConfigurationError("n_scenes is required (flag or config file)")
    cfg = SynthConfig(
        n_scenes=int(n_scenes),
        zipf_alpha=float(_resolved(args, "zipf_alpha", 2.0)),
        n_max=int(_resolved(args, "n_max", 20)),
        image_size=(int(_resolved(args, "image_width", 128)),
                    int(_resolved(args, "image_height", 128))),
        item_size_law=ItemSizeLaw(
            base_fraction=float(_resolved(args, "base_fraction", 0.02)),
            exponent=float(_resolved(args, "size_exponent", -1.0)),
            jitter_sigma=float(_resolved(args, "size_jitter", 0.1)),
        ),
        spurious_rate=float(_resolved(args, "spurious_rate", 0.0)),
        score_bands=ScoreBands(
            true_range=(float(_resolved(args, "true_score_min", 0.22)),
                        float(_resolved(args, "true_score_max", 1.0))),
            spurious_range=(float(_resolved(args, "spurious_score_min", 0.05)),
                            float(_resolved(args, "spurious_score_max", 0.215))),
        ),
        seed=int(_resolved(args, "seed", 0)),
    )
    annotations, detections = generate(cfg)
    ann_path = Path(out_annotations)
    det_path = Path(out_detections)
    ann_path.parent.mkdir(parents=True, exist_ok=True)
    det_path.parent.mkdir(parents=True, exist_ok=True)
    with open(ann_path, "w", encoding="utf-8") as fh:
        json.dump(annotations_to_coco(annotations), fh, sort_keys=True,
                  separators=(",", ":"))
        fh.write("\n")
    write_detections(detections, det_path)
    print(f"generated {cfg.n_scenes} scenes -> {ann_path}, {det_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# resolve-labels

def cmd_resolve_labels(args: argparse.Namespace) -> int:
    _load_config_values(args)
    taxonomy_path = _resolved(args, "taxonomy", None)
    if not taxonomy_path:
        raise ConfigurationError("--taxonomy is required")
    embeddings_path = _resolved(args, "embeddings", None) \
        or os.environ.get(ENV_EMBEDDINGS)
    if not embeddings_path:
        raise ConfigurationError(
            f"--embeddings flag or {ENV_EMBEDDINGS} environment variable required"
        )
    input_path = _resolved(args, "input", None)
    if not input_path:
        raise ConfigurationError("--input is required")
    expected_code = _resolved(args, "expected_code", None)

    stuff_names = _read_stuff_list(_resolved(args, "stuff_list", None))
    taxonomy = Taxonomy.from_file(taxonomy_path, stuff_names)
    embeddings = EmbeddingTable.from_file(embeddings_path)

    lines = Path(input_path).read_text(encoding="utf-8").splitlines()
    words: list[str] = []
    for line in lines:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if expected_code is not None:
            words.extend(parse_llm_response(line, expected_code))
        else:
            words.append(line)

    resolutions = resolve_labels(words, taxonomy, embeddings)
    out_path = _resolved(args, "out", None)
    payload_lines = [
        json.dumps({
            "input_word": res.input_word,
            "outcome": res.outcome,
            "matched_category": res.matched_category,
            "similarity": round6(res.similarity) if res.similarity is not None else None,
            "phrase_averaged": res.phrase_averaged,
            "retained": res.retained,
        }, sort_keys=True, separators=(",", ":"))
        for res in resolutions
    ]
    if out_path:
        Path(out_path).write_text("\n".join(payload_lines) + "\n",
                                  encoding="utf-8")
    else:
        for line in payload_lines:
            print(line)
    retained = sum(1 for r in resolutions if r.retained)
    print(f"resolved {len(resolutions)} words, retained {retained}",
          file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser and dispatch

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scenestats",
        description="Numerosity and visual-magnitude statistics for annotated scenes",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat TOML-style config file")
        p.add_argument("--verbose", action="store_true")

    p = sub.add_parser("ingest", help="normalize a dataset into a scene store")
    common(p)
    p.add_argument("--format", choices=["coco", "voc", "detections"])
    p.add_argument("--input")
    p.add_argument("--out")
    p.add_argument("--stuff-list", dest="stuff_list",
                   help="file with one uncountable category name per line")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", help="distribution, Zipf fit, correlations")
    common(p)
    p.add_argument("--store")
    p.add_argument("--out")
    p.add_argument("--split", choices=["all", "homogeneous", "heterogeneous"])
    p.add_argument("--min-numerosity", dest="min_numerosity", type=int)
    p.add_argument("--min-group-size", dest="min_group_size", type=int)
    p.add_argument("--zipf-method", dest="zipf_method",
                   choices=["loglog_ls", "discrete_mle"])
    p.add_argument("--zipf-nmin", dest="zipf_nmin", type=int)
    p.add_argument("--area-mode", dest="area_mode", choices=["union", "sum"])
    p.add_argument("--correlation-method", dest="correlation_method",
                   choices=["pearson", "spearman"])
    p.add_argument("--threshold", type=float)
    p.add_argument("--floor", type=float)
    p.add_argument("--dedup-iou", dest="dedup_iou", type=float)
    p.add_argument("--max-area-frac", dest="max_area_frac", type=float)
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("calibrate",
                       help="grid-search the detection threshold against a reference")
    common(p)
    p.add_argument("--detections")
    p.add_argument("--reference")
    p.add_argument("--out")
    p.add_argument("--tmin", type=float)
    p.add_argument("--tmax", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--floor", type=float)
    p.add_argument("--dedup-iou", dest="dedup_iou", type=float)
    p.add_argument("--max-area-frac", dest="max_area_frac", type=float)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("compare", help="consistency of two correlation reports")
    common(p)
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--min-consistency", dest="min_consistency", type=float)
    p.add_argument("--block", choices=["all", "homogeneous", "heterogeneous"])
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", help="generate a synthetic annotated corpus")
    common(p)
    p.add_argument("--out-annotations", dest="out_annotations")
    p.add_argument("--out-detections", dest="out_detections")
    p.add_argument("--n-scenes", dest="n_scenes", type=int)
    p.add_argument("--zipf-alpha", dest="zipf_alpha", type=float)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--image-width", dest="image_width", type=int)
    p.add_argument("--image-height", dest="image_height", type=int)
    p.add_argument("--base-fraction", dest="base_fraction", type=float)
    p.add_argument("--size-exponent", dest="size_exponent", type=float)
    p.add_argument("--size-jitter", dest="size_jitter", type=float)
    p.add_argument("--spurious-rate", dest="spurious_rate", type=float)
    p.add_argument("--true-score-min", dest="true_score_min", type=float)
    p.add_argument("--true-score-max", dest="true_score_max", type=float)
    p.add_argument("--spurious-score-min", dest="spurious_score_min", type=float)
    p.add_argument("--spurious-score-max", dest="spurious_score_max", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("resolve-labels",
                       help="reconcile free-form labels with the taxonomy")
    common(p)
    p.add_argument("--taxonomy")
    p.add_argument("--embeddings")
    p.add_argument("--stuff-list", dest="stuff_list")
    p.add_argument("--input")
    p.add_argument("--out")
    p.add_argument("--expected-code", dest="expected_code",
                   help="treat input lines as raw responses carrying this code")
    p.set_defaults(func=cmd_resolve_labels)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args._argv = argv
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (InsufficientDataError, EmptyInputError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ScenestatsError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
