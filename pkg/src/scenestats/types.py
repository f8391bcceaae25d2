"""Core immutable record types for scenes, objects, detections and masks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

from .errors import (
    CorruptMaskError,
    DegenerateBoxError,
    DegeneratePolygonError,
    DimensionError,
    DomainError,
)

SourceDataset = Literal["coco", "voc", "interchange", "synthetic"]
MaskVariant = Literal["polygon_set", "rle_uncompressed", "rle_compressed"]

#: Bounding box as (x, y, w, h) in pixels, top-left origin.
BoxTuple = tuple[float, float, float, float]


@dataclass(frozen=True)
class ImageMeta:
    """Identity and pixel dimensions of one image."""

    id: int | str
    width: int
    height: int
    source_dataset: SourceDataset = "coco"

    def __post_init__(self):
        if not isinstance(self.width, int) or not isinstance(self.height, int):
            raise DomainError("image width/height must be integers")
        if self.width < 1 or self.height < 1:
            raise DomainError(
                f"image {self.id!r}: width and height must be >= 1, "
                f"got {self.width}x{self.height}"
            )

    @property
    def pixels(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class MaskRepr:
    """A segmentation mask in one of three interchangeable representations.

    ``size`` is always (height, width). Polygon coordinates are pixel
    units; run-length counts are column-major and start with the
    background run.
    """

    variant: MaskVariant
    size: tuple[int, int]
    polygons: tuple[tuple[float, ...], ...] = ()
    counts: tuple[int, ...] = ()
    rle_string: str = ""

    def __post_init__(self):
        h, w = self.size
        if h < 1 or w < 1:
            raise DomainError(f"mask size must be positive, got {self.size}")
        if self.variant == "polygon_set":
            for ring in self.polygons:
                if len(ring) % 2 != 0:
                    raise DegeneratePolygonError(
                        "polygon ring has an odd number of coordinates"
                    )
                if len(ring) < 6:
                    raise DegeneratePolygonError(
                        f"polygon ring needs >= 3 vertices, got {len(ring) // 2}"
                    )
        elif self.variant == "rle_uncompressed":
            total = 0
            for c in self.counts:
                if c < 0:
                    raise DomainError("run-length counts must be non-negative")
                total += c
            if total != h * w:
                raise CorruptMaskError(
                    f"run-length counts sum to {total}, expected {h * w} "
                    f"for size {self.size}"
                )
        elif self.variant == "rle_compressed":
            if not isinstance(self.rle_string, str):
                raise DomainError("compressed mask payload must be text")
        else:
            raise DomainError(f"unknown mask variant {self.variant!r}")

    @classmethod
    def from_polygons(cls, rings: Sequence[Sequence[float]],
                      size: tuple[int, int]) -> "MaskRepr":
        return cls(
            variant="polygon_set",
            size=(int(size[0]), int(size[1])),
            polygons=tuple(tuple(float(v) for v in ring) for ring in rings),
        )

    @classmethod
    def from_counts(cls, counts: Sequence[int], size: tuple[int, int]) -> "MaskRepr":
        return cls(
            variant="rle_uncompressed",
            size=(int(size[0]), int(size[1])),
            counts=tuple(int(c) for c in counts),
        )

    @classmethod
    def from_rle_string(cls, encoded: str, size: tuple[int, int]) -> "MaskRepr":
        return cls(
            variant="rle_compressed",
            size=(int(size[0]), int(size[1])),
            rle_string=encoded,
        )


def _check_box(bbox: Sequence[float], what: str) -> BoxTuple:
    if len(bbox) != 4:
        raise DegenerateBoxError(f"{what}: bbox must have 4 entries, got {len(bbox)}")
    x, y, w, h = (float(v) for v in bbox)
    if w <= 0 or h <= 0:
        raise DegenerateBoxError(f"{what}: bbox width/height must be > 0, got {w}x{h}")
    return (x, y, w, h)


@dataclass(frozen=True)
class AnnotationInstance:
    """One ground-truth object: category, box and (optionally) its mask."""

    category_id: int | str
    bbox: BoxTuple
    mask: Optional[MaskRepr] = None
    is_crowd: bool = False

    def __post_init__(self):
        object.__setattr__(self, "bbox", _check_box(self.bbox, "annotation"))


@dataclass(frozen=True)
class Detection:
    """One scored detector output: free-form label, box, confidence, mask."""

    label: str
    bbox: BoxTuple
    score: float
    mask: Optional[MaskRepr] = None

    def __post_init__(self):
        object.__setattr__(self, "bbox", _check_box(self.bbox, "detection"))
        if not (0.0 <= self.score <= 1.0):
            raise DomainError(f"detection score must be in [0, 1], got {self.score}")


def _check_mask_sizes(image: ImageMeta, masks) -> None:
    expected = (image.height, image.width)
    for m in masks:
        if m is not None and m.size != expected:
            raise DimensionError(
                f"mask size {m.size} does not match image {image.id!r} "
                f"frame {expected}"
            )


@dataclass(frozen=True)
class SceneAnnotation:
    """All ground-truth objects of one image. ``objects`` may be empty."""

    image: ImageMeta
    objects: tuple[AnnotationInstance, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        _check_mask_sizes(self.image, (o.mask for o in self.objects))

    @property
    def numerosity(self) -> int:
        return len(self.objects)


@dataclass(frozen=True)
class DetectionSet:
    """Raw scored detections for one image, before any filtering."""

    image: ImageMeta
    detections: tuple[Detection, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "detections", tuple(self.detections))
        _check_mask_sizes(self.image, (d.mask for d in self.detections))
