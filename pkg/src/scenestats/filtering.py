"""Detection post-processing: floor, geometric dedup, size cap, threshold.

The four stages always run in this order:

1. drop detections scoring below the permissive floor;
2. deduplicate near-coincident boxes, keeping the higher score (greedy
   by descending score, ties by input order);
3. drop boxes covering more than ``max_area_frac`` of the image;
4. drop detections scoring below the calibrated threshold (inclusive
   keep: score >= threshold survives).

Every removal is recorded with its reason, so kept + removed is always a
partition of the input.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Literal, Sequence

from .errors import ConfigurationError
from .geometry import iou
from .types import Detection, DetectionSet, ImageMeta

log = logging.getLogger(__name__)

RemovalReason = Literal["below_floor", "duplicate", "oversized", "below_threshold"]


@dataclass(frozen=True)
class FilterConfig:
    """Thresholds of the detection filter; all values live in [0, 1]."""

    threshold: float = 0.22
    floor: float = 0.05
    dedup_iou: float = 0.95
    max_area_frac: float = 0.95

    def __post_init__(self):
        for name in ("threshold", "floor", "dedup_iou", "max_area_frac"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ConfigurationError(f"{name} must be in [0, 1], got {v}")
        if self.floor > self.threshold:
            raise ConfigurationError(
                f"floor ({self.floor}) must not exceed threshold ({self.threshold})"
            )


@dataclass(frozen=True)
class FilteredScene:
    """Partition of one image's detections into kept and removed."""

    image: ImageMeta
    kept: tuple[Detection, ...]
    removed: tuple[tuple[Detection, RemovalReason], ...]


def _clamped(det: Detection, image: ImageMeta) -> tuple[float, float, float, float]:
    x, y, w, h = det.bbox
    x0 = min(max(x, 0.0), float(image.width))
    y0 = min(max(y, 0.0), float(image.height))
    x1 = min(x + w, float(image.width))
    y1 = min(y + h, float(image.height))
    return (x0, y0, x1 - x0, y1 - y0)


def filter_scene(detections: Sequence[Detection], image: ImageMeta,
                 cfg: FilterConfig) -> FilteredScene:
    """Run the four-stage filter over one image's detections.

    Geometric decisions (area cap, dedup overlap) are taken on boxes
    clamped to the image frame; the returned detections are the original
    input objects. Boxes that clamp to zero area are removed up front and
    logged.
    """
    if isinstance(detections, DetectionSet):
        detections = detections.detections

    removed: list[tuple[Detection, RemovalReason]] = []
    boxes: dict[int, tuple[float, float, float, float]] = {}
    alive: list[int] = []
    for k, det in enumerate(detections):
        cbox = _clamped(det, image)
        if cbox[2] <= 0 or cbox[3] <= 0:
            log.warning("image %r: detection %r lies outside the frame; removed",
                        image.id, det.label)
            removed.append((det, "oversized"))
            continue
        boxes[k] = cbox
        alive.append(k)

    floored = []
    for k in alive:
        if detections[k].score < cfg.floor:
            removed.append((detections[k], "below_floor"))
        else:
            floored.append(k)

    # Greedy dedup: descending score, stable for equal scores.
    order = sorted(floored, key=lambda k: -detections[k].score)
    kept_dedup: list[int] = []
    dropped_dup: set[int] = set()
    for k in order:
        if any(iou(boxes[k], boxes[j]) > cfg.dedup_iou for j in kept_dedup):
            dropped_dup.add(k)
        else:
            kept_dedup.append(k)
    survivors = []
    for k in floored:
        if k in dropped_dup:
            removed.append((detections[k], "duplicate"))
        else:
            survivors.append(k)

    max_area = cfg.max_area_frac * image.width * image.height
    sized = []
    for k in survivors:
        _, _, w, h = boxes[k]
        if w * h > max_area:
            removed.append((detections[k], "oversized"))
        else:
            sized.append(k)

    kept = []
    for k in sized:
        if detections[k].score < cfg.threshold:
            removed.append((detections[k], "below_threshold"))
        else:
            kept.append(detections[k])

    return FilteredScene(image=image, kept=tuple(kept), removed=tuple(removed))


def numerosity(scene: FilteredScene) -> int:
    """Number of retained detections: the scene's object count."""
    return len(scene.kept)
