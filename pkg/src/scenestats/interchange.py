"""Newline-delimited detection interchange records.

One JSON object per line::

    {"image_id": ..., "width": W, "height": H,
     "detections": [{"label": ..., "bbox": [x, y, w, h], "score": s,
                     "mask": {"counts": "...", "size": [H, W]}}, ...]}

``mask`` is optional; ``counts`` is either the compressed run-length text
or a plain list of column-major counts. The writer always emits the
compressed text form with deterministic key ordering, so identical inputs
serialize byte-identically.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Iterator, Optional

from .errors import DimensionError, ParseError
from .rle import rle_encode
from .types import Detection, DetectionSet, ImageMeta, MaskRepr


def mask_to_json(mask: MaskRepr) -> dict[str, Any]:
    """Serialize a mask, normalizing run-length forms to the compressed text."""
    h, w = mask.size
    if mask.variant == "polygon_set":
        return {"polygons": [list(r) for r in mask.polygons], "size": [h, w]}
    if mask.variant == "rle_uncompressed":
        return {"counts": rle_encode(mask.counts), "size": [h, w]}
    return {"counts": mask.rle_string, "size": [h, w]}


def mask_from_json(obj: Any, where: str) -> MaskRepr:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: mask must be an object")
    size_raw = obj.get("size")
    if (not isinstance(size_raw, list) or len(size_raw) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool)
                       for v in size_raw)):
        raise ParseError(f"{where}: mask size must be [height, width]")
    size = (size_raw[0], size_raw[1])
    if "polygons" in obj:
        rings = obj["polygons"]
        if not isinstance(rings, list):
            raise ParseError(f"{where}: mask polygons must be an array")
        for ring in rings:
            if not isinstance(ring, list) or not all(
                    isinstance(v, (int, float)) and not isinstance(v, bool)
                    for v in ring):
                raise ParseError(f"{where}: polygon ring must be a number array")
        return MaskRepr.from_polygons(rings, size)
    counts = obj.get("counts")
    if isinstance(counts, str):
        return MaskRepr.from_rle_string(counts, size)
    if isinstance(counts, list):
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in counts):
            raise ParseError(f"{where}: mask counts must be integers")
        return MaskRepr.from_counts(counts, size)
    raise ParseError(f"{where}: mask needs 'counts' or 'polygons'")


def _detection_from_json(obj: Any, image: ImageMeta, where: str) -> Detection:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: detection must be an object")
    label = obj.get("label")
    if not isinstance(label, str):
        raise ParseError(f"{where}: detection label must be text")
    bbox = obj.get("bbox")
    if (not isinstance(bbox, list) or len(bbox) != 4
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                       for v in bbox)):
        raise ParseError(f"{where}: bbox must be [x, y, w, h]")
    if bbox[2] <= 0 or bbox[3] <= 0:
        raise ParseError(f"{where}: bbox width/height must be > 0")
    score = obj.get("score")
    if isinstance(score, bool) or not isinstance(score, (int, float)):
        raise ParseError(f"{where}: score must be a number")
    if not (0.0 <= float(score) <= 1.0):
        raise ParseError(f"{where}: score must be in [0, 1], got {score}")
    mask: Optional[MaskRepr] = None
    if obj.get("mask") is not None:
        mask = mask_from_json(obj["mask"], where)
        if mask.size != (image.height, image.width):
            raise DimensionError(
                f"{where}: mask size {mask.size} does not match image "
                f"{image.height}x{image.width}"
            )
    return Detection(label=label, bbox=tuple(float(v) for v in bbox),
                     score=float(score), mask=mask)


def detection_set_from_json(line: str, line_no: int | None = None) -> DetectionSet:
    """Parse one interchange line."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=line_no, offset=e.pos) from e
    where = f"record at line {line_no}" if line_no is not None else "record"
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    image_id = obj.get("image_id")
    if isinstance(image_id, bool) or not isinstance(image_id, (int, str)):
        raise ParseError(f"{where}: image_id must be an integer or text")
    width = obj.get("width")
    height = obj.get("height")
    for name, v in (("width", width), ("height", height)):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ParseError(f"{where}: {name} must be a positive integer")
    dets_raw = obj.get("detections")
    if not isinstance(dets_raw, list):
        raise ParseError(f"{where}: detections must be an array")
    image = ImageMeta(id=image_id, width=width, height=height,
                      source_dataset="interchange")
    detections = tuple(
        _detection_from_json(d, image, f"{where}, detection[{k}]")
        for k, d in enumerate(dets_raw)
    )
    return DetectionSet(image=image, detections=detections)


def detection_set_to_json(ds: DetectionSet) -> str:
    record = {
        "image_id": ds.image.id,
        "width": ds.image.width,
        "height": ds.image.height,
        "detections": [
            {
                "label": d.label,
                "bbox": list(d.bbox),
                "score": d.score,
                **({"mask": mask_to_json(d.mask)} if d.mask is not None else {}),
            }
            for d in ds.detections
        ],
    }
    return json.dumps(record, sort_keys=True, separators=(",", ":"))


def read_detections(path: str | Path) -> list[DetectionSet]:
    """Read an interchange file; blank lines are ignored."""
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            out.append(detection_set_from_json(line, line_no))
    return out


def iter_detection_lines(sets: Iterable[DetectionSet]) -> Iterator[str]:
    for ds in sets:
        yield detection_set_to_json(ds)


def write_detections(sets: Iterable[DetectionSet], path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for line in iter_detection_lines(sets):
            fh.write(line + "\n")
            n += 1
    return n
