"""Parser for PASCAL-VOC-style XML annotation documents."""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Optional, Sequence

from .coco import clamp_bbox
from .errors import AlignmentError, DegenerateBoxError, ParseError
from .types import AnnotationInstance, ImageMeta, MaskRepr, SceneAnnotation


def _int_text(element: Optional[ET.Element], what: str) -> int:
    if element is None or element.text is None:
        raise ParseError(f"missing {what} element")
    try:
        return int(float(element.text.strip()))
    except ValueError as e:
        raise ParseError(f"{what}: expected a number, got {element.text!r}") from e


def parse_voc(document: str, image_id: int | str | None = None,
              masks: Sequence[Optional[MaskRepr]] | None = None) -> SceneAnnotation:
    """Parse one VOC XML document into a scene.

    Category names are preserved verbatim. Boxes come from ``bndbox``
    corners converted to (x, y, w, h). VOC records carry no inline masks;
    when a companion segmentation index has already been converted to
    mask representations, pass them via ``masks`` aligned with the object
    order (None entries allowed).
    """
    try:
        root = ET.fromstring(document)
    except ET.ParseError as e:
        raise ParseError(f"invalid XML: {e}", line=e.position[0]) from e

    size = root.find("size")
    if size is None:
        raise ParseError("missing size element")
    width = _int_text(size.find("width"), "size/width")
    height = _int_text(size.find("height"), "size/height")
    if width < 1 or height < 1:
        raise ParseError(f"size must be positive, got {width}x{height}")

    if image_id is None:
        filename = root.findtext("filename")
        image_id = filename.strip() if filename else "voc-scene"
    image = ImageMeta(id=image_id, width=width, height=height,
                      source_dataset="voc")

    objects_raw = root.findall("object")
    if masks is not None and len(masks) != len(objects_raw):
        raise AlignmentError(
            f"{len(masks)} masks supplied for {len(objects_raw)} objects"
        )

    objects = []
    for k, obj in enumerate(objects_raw):
        name = obj.findtext("name")
        if name is None or not name.strip():
            raise ParseError(f"object[{k}]: missing name")
        bndbox = obj.find("bndbox")
        if bndbox is None:
            raise ParseError(f"object[{k}]: missing bndbox")
        xmin = _int_text(bndbox.find("xmin"), f"object[{k}]/bndbox/xmin")
        ymin = _int_text(bndbox.find("ymin"), f"object[{k}]/bndbox/ymin")
        xmax = _int_text(bndbox.find("xmax"), f"object[{k}]/bndbox/xmax")
        ymax = _int_text(bndbox.find("ymax"), f"object[{k}]/bndbox/ymax")
        if xmax <= xmin or ymax <= ymin:
            raise DegenerateBoxError(
                f"object[{k}] ({name.strip()!r}): box "
                f"({xmin},{ymin})-({xmax},{ymax}) is degenerate"
            )
        bbox = clamp_bbox(
            (float(xmin), float(ymin), float(xmax - xmin), float(ymax - ymin)),
            width, height, f"object[{k}]"
        )
        mask = masks[k] if masks is not None else None
        objects.append(AnnotationInstance(category_id=name.strip(), bbox=bbox,
                                          mask=mask, is_crowd=False))
    return SceneAnnotation(image=image, objects=tuple(objects))
