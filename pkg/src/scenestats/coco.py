"""Parser for MSCOCO-style instance annotation JSON.

Only annotation metadata is read (never image pixels). Masks keep the
representation found in the file: polygon lists stay polygons, run-length
dicts stay run-length, so decoding happens lazily at rasterization time.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Any, Iterable

from .errors import (
    ConfigurationError,
    DegenerateBoxError,
    DimensionError,
    ParseError,
    ReferentialIntegrityError,
)
from .lexicon import Taxonomy, TaxonomyCategory, normalize_label
from .types import AnnotationInstance, ImageMeta, MaskRepr, SceneAnnotation

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CocoDataset:
    """Parsed corpus: one scene per image (in file order) plus the taxonomy."""

    scenes: tuple[SceneAnnotation, ...]
    taxonomy: Taxonomy


def _mapping(obj: Any, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object, got {type(obj).__name__}")
    return obj


def _array(obj: Any, where: str) -> list:
    if not isinstance(obj, list):
        raise ParseError(f"{where}: expected an array, got {type(obj).__name__}")
    return obj


def _get(d: dict, key: str, where: str) -> Any:
    if key not in d:
        raise ParseError(f"{where}: missing required field {key!r}")
    return d[key]


def _as_int(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{where}: expected an integer, got {v!r}")
    return v


def _as_number(v: Any, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{where}: expected a number, got {v!r}")
    return float(v)


def _as_id(v: Any, where: str) -> int | str:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ParseError(f"{where}: expected an id, got {v!r}")
    return v


def clamp_bbox(bbox: tuple[float, float, float, float], width: int, height: int,
               what: str) -> tuple[float, float, float, float]:
    """Clamp a box to the image frame; degenerate results are an error.

    Real datasets contain boxes overshooting the frame by a pixel or two,
    so overshoots are clamped with a warning instead of rejected.
    """
    x, y, w, h = bbox
    x0 = min(max(x, 0.0), float(width))
    y0 = min(max(y, 0.0), float(height))
    x1 = min(x + w, float(width))
    y1 = min(y + h, float(height))
    cw = x1 - x0
    ch = y1 - y0
    if cw <= 0 or ch <= 0:
        raise DegenerateBoxError(f"{what}: box {bbox} degenerate after clamping")
    if (x0, y0, cw, ch) != (x, y, w, h):
        log.warning("%s: box %s clamped to image bounds %dx%d", what, bbox, width, height)
    return (x0, y0, cw, ch)


def _parse_segmentation(seg: Any, image: ImageMeta, where: str) -> MaskRepr | None:
    if seg is None or seg == []:
        return None
    size = (image.height, image.width)
    if isinstance(seg, list):
        rings = []
        for ring in seg:
            ring = _array(ring, f"{where}.segmentation ring")
            rings.append([_as_number(v, f"{where}.segmentation coordinate")
                          for v in ring])
        return MaskRepr.from_polygons(rings, size)
    if isinstance(seg, dict):
        counts = _get(seg, "counts", f"{where}.segmentation")
        declared = _array(_get(seg, "size", f"{where}.segmentation"),
                          f"{where}.segmentation.size")
        if len(declared) != 2:
            raise ParseError(f"{where}.segmentation.size: expected [height, width]")
        dh = _as_int(declared[0], f"{where}.segmentation.size")
        dw = _as_int(declared[1], f"{where}.segmentation.size")
        if (dh, dw) != size:
            raise DimensionError(
                f"{where}: mask size {(dh, dw)} does not match image frame {size}"
            )
        if isinstance(counts, str):
            return MaskRepr.from_rle_string(counts, size)
        if isinstance(counts, list):
            return MaskRepr.from_counts(
                [_as_int(c, f"{where}.segmentation.counts") for c in counts], size
            )
        raise ParseError(f"{where}.segmentation.counts: expected text or an array")
    raise ParseError(f"{where}.segmentation: expected an array or an object")


def parse_coco(document: str, stuff_names: Iterable[str] = ()) -> CocoDataset:
    """Parse a COCO-layout JSON document into scenes and a taxonomy.

    Categories become "stuff" when they carry an explicit ``kind`` field
    saying so or when their name appears in ``stuff_names``; everything
    else counts as a countable "things" category.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", offset=e.pos) from e

    root = _mapping(doc, "document")
    images_raw = _array(_get(root, "images", "document"), "images")
    anns_raw = _array(_get(root, "annotations", "document"), "annotations")
    cats_raw = _array(_get(root, "categories", "document"), "categories")

    stuff = {normalize_label(s) for s in stuff_names}
    categories = []
    for k, cat in enumerate(cats_raw):
        cat = _mapping(cat, f"categories[{k}]")
        cid = _as_int(_get(cat, "id", f"categories[{k}]"), f"categories[{k}].id")
        name = _get(cat, "name", f"categories[{k}]")
        if not isinstance(name, str):
            raise ParseError(f"categories[{k}].name: expected text")
        supercategory = cat.get("supercategory", "")
        if not isinstance(supercategory, str):
            raise ParseError(f"categories[{k}].supercategory: expected text")
        kind = cat.get("kind")
        if kind is None:
            kind = "stuff" if normalize_label(name) in stuff else "things"
        if kind not in ("things", "stuff"):
            raise ParseError(f"categories[{k}].kind: expected 'things' or 'stuff'")
        categories.append(TaxonomyCategory(id=cid, name=name,
                                           supercategory=supercategory, kind=kind))
    try:
        taxonomy = Taxonomy(categories=tuple(categories))
    except ConfigurationError as e:
        raise ParseError(f"categories: {e}") from e

    images: dict[int | str, ImageMeta] = {}
    order: list[int | str] = []
    for k, img in enumerate(images_raw):
        img = _mapping(img, f"images[{k}]")
        iid = _as_id(_get(img, "id", f"images[{k}]"), f"images[{k}].id")
        width = _as_int(_get(img, "width", f"images[{k}]"), f"images[{k}].width")
        height = _as_int(_get(img, "height", f"images[{k}]"), f"images[{k}].height")
        if width < 1 or height < 1:
            raise ParseError(f"images[{k}]: dimensions must be >= 1")
        if iid in images:
            raise ParseError(f"images[{k}]: duplicate image id {iid!r}")
        images[iid] = ImageMeta(id=iid, width=width, height=height,
                                source_dataset="coco")
        order.append(iid)

    known_cats = {c.id for c in categories}
    grouped: dict[int | str, list[AnnotationInstance]] = {iid: [] for iid in images}
    for k, ann in enumerate(anns_raw):
        ann = _mapping(ann, f"annotations[{k}]")
        where = f"annotations[{k}]"
        aid = ann.get("id", k)
        image_id = _as_id(_get(ann, "image_id", where), f"{where}.image_id")
        if image_id not in images:
            raise ReferentialIntegrityError(
                f"annotation {aid!r} references unknown image {image_id!r}"
            )
        category_id = _as_int(_get(ann, "category_id", where), f"{where}.category_id")
        if category_id not in known_cats:
            raise ReferentialIntegrityError(
                f"annotation {aid!r} references unknown category {category_id!r}"
            )
        image = images[image_id]
        bbox_raw = _array(_get(ann, "bbox", where), f"{where}.bbox")
        if len(bbox_raw) != 4:
            raise ParseError(f"{where}.bbox: expected 4 numbers")
        bbox = tuple(_as_number(v, f"{where}.bbox") for v in bbox_raw)
        if bbox[2] <= 0 or bbox[3] <= 0:
            raise DegenerateBoxError(
                f"annotation {aid!r}: bbox width/height must be > 0, got {bbox}"
            )
        bbox = clamp_bbox(bbox, image.width, image.height, f"annotation {aid!r}")
        mask = _parse_segmentation(ann.get("segmentation"), image, where)
        iscrowd = ann.get("iscrowd", 0)
        if iscrowd not in (0, 1, True, False):
            raise ParseError(f"{where}.iscrowd: expected 0 or 1")
        grouped[image_id].append(
            AnnotationInstance(category_id=category_id, bbox=bbox, mask=mask,
                               is_crowd=bool(iscrowd))
        )

    scenes = tuple(
        SceneAnnotation(image=images[iid], objects=tuple(grouped[iid]))
        for iid in order
    )
    return CocoDataset(scenes=scenes, taxonomy=taxonomy)
