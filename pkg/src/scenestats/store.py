"""Normalized newline-delimited scene store written between CLI stages.

One JSON object per line. Annotation records::

    {"type": "annotation",
     "image": {"id": ..., "width": W, "height": H, "source": "coco"},
     "objects": [{"category": "dog", "category_id": 18, "bbox": [...],
                  "is_crowd": false, "mask": {...} | null}, ...]}

Detection records replace ``category``/``category_id`` with ``label`` and
``score``. Masks keep whatever representation the source carried. Records
serialize with sorted keys and compact separators, so stores diff cleanly
and re-runs are byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Optional

from .errors import ParseError
from .interchange import mask_from_json
from .lexicon import Taxonomy
from .types import (
    AnnotationInstance,
    Detection,
    DetectionSet,
    ImageMeta,
    MaskRepr,
    SceneAnnotation,
)

STORE_FILENAME = "scenes.ndjson"


def _mask_record(mask: Optional[MaskRepr]) -> Any:
    if mask is None:
        return None
    h, w = mask.size
    if mask.variant == "polygon_set":
        return {"polygons": [list(r) for r in mask.polygons], "size": [h, w]}
    if mask.variant == "rle_uncompressed":
        return {"counts": list(mask.counts), "size": [h, w]}
    return {"counts": mask.rle_string, "size": [h, w]}


def scene_to_record(scene: SceneAnnotation,
                    taxonomy: Taxonomy | None = None) -> dict:
    names = {}
    if taxonomy is not None:
        names = {c.id: c.name for c in taxonomy.categories}
    return {
        "type": "annotation",
        "image": {"id": scene.image.id, "width": scene.image.width,
                  "height": scene.image.height,
                  "source": scene.image.source_dataset},
        "objects": [
            {
                "category": names.get(o.category_id, str(o.category_id)),
                "category_id": o.category_id if isinstance(o.category_id, int) else None,
                "bbox": list(o.bbox),
                "is_crowd": o.is_crowd,
                "mask": _mask_record(o.mask),
            }
            for o in scene.objects
        ],
    }


def detection_set_to_record(ds: DetectionSet) -> dict:
    return {
        "type": "detection",
        "image": {"id": ds.image.id, "width": ds.image.width,
                  "height": ds.image.height,
                  "source": ds.image.source_dataset},
        "objects": [
            {
                "label": d.label,
                "score": d.score,
                "bbox": list(d.bbox),
                "mask": _mask_record(d.mask),
            }
            for d in ds.detections
        ],
    }


def _image_from_record(obj: dict, where: str) -> ImageMeta:
    img = obj.get("image")
    if not isinstance(img, dict):
        raise ParseError(f"{where}: missing image object")
    try:
        return ImageMeta(id=img["id"], width=int(img["width"]),
                         height=int(img["height"]),
                         source_dataset=img.get("source", "coco"))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"{where}: bad image metadata: {e}") from e


def record_categories(record: dict) -> set[str]:
    """Distinct category labels of one record (annotation or detection)."""
    out = set()
    for obj in record.get("objects", ()):
        label = obj.get("category") if record.get("type") == "annotation" \
            else obj.get("label")
        if label is not None:
            out.add(str(label))
    return out


def record_to_scene(record: dict, where: str = "record") -> SceneAnnotation:
    image = _image_from_record(record, where)
    objects = []
    for k, obj in enumerate(record.get("objects", ())):
        mask = None
        if obj.get("mask") is not None:
            mask = mask_from_json(obj["mask"], f"{where}.objects[{k}]")
        cid = obj.get("category_id")
        category = cid if isinstance(cid, int) else str(obj.get("category", ""))
        try:
            objects.append(AnnotationInstance(
                category_id=category,
                bbox=tuple(float(v) for v in obj["bbox"]),
                mask=mask,
                is_crowd=bool(obj.get("is_crowd", False)),
            ))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"{where}.objects[{k}]: {e}") from e
    return SceneAnnotation(image=image, objects=tuple(objects))


def record_to_detection_set(record: dict, where: str = "record") -> DetectionSet:
    image = _image_from_record(record, where)
    detections = []
    for k, obj in enumerate(record.get("objects", ())):
        mask = None
        if obj.get("mask") is not None:
            mask = mask_from_json(obj["mask"], f"{where}.objects[{k}]")
        try:
            detections.append(Detection(
                label=str(obj.get("label", "")),
                bbox=tuple(float(v) for v in obj["bbox"]),
                score=float(obj["score"]),
                mask=mask,
            ))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"{where}.objects[{k}]: {e}") from e
    return DetectionSet(image=image, detections=tuple(detections))


def write_store(records: Iterable[dict], path: str | Path) -> int:
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True, separators=(",", ":")))
            fh.write("\n")
            n += 1
    return n


def resolve_store_path(path: str | Path) -> Path:
    """Accept either the store file itself or the directory holding it."""
    p = Path(path)
    if p.is_dir():
        return p / STORE_FILENAME
    return p


def read_store(path: str | Path) -> list[dict]:
    """Read store records, checking per-line shape and type uniformity."""
    p = resolve_store_path(path)
    records = []
    kind = None
    with open(p, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(f"invalid JSON: {e.msg}", line=line_no,
                                 source=str(p)) from e
            if not isinstance(record, dict):
                raise ParseError("store record must be an object", line=line_no,
                                 source=str(p))
            rtype = record.get("type")
            if rtype not in ("annotation", "detection"):
                raise ParseError(f"unknown record type {rtype!r}", line=line_no,
                                 source=str(p))
            if kind is None:
                kind = rtype
            elif rtype != kind:
                raise ParseError(
                    f"mixed record types in one store ({kind} and {rtype})",
                    line=line_no, source=str(p),
                )
            if not isinstance(record.get("objects", []), list):
                raise ParseError("record objects must be an array", line=line_no,
                                 source=str(p))
            records.append(record)
    return records
