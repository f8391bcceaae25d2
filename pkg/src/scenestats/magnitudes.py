"""Per-scene numerosity and the four relative continuous magnitudes.

All areas are normalized by the image size so values are comparable
across resolutions:

* cumulative area: pixels covered by at least one object mask / image
  pixels (each pixel counts once, so hidden object parts never inflate it);
* per-item size: cumulative area / numerosity;
* hull: area of the convex hull spanning all object pixel squares / image
  pixels;
* density: numerosity / relative hull area.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DegenerateObjectError, EmptyInputError
from .geometry import hull_area, object_hull_points, union_area
from .types import ImageMeta

AreaMode = Literal["union", "sum"]

#: Field order used by correlation matrices and report files.
MAGNITUDE_VARIABLES = (
    "numerosity",
    "cumulative_area_rel",
    "item_size_rel",
    "hull_rel",
    "density",
)


@dataclass(frozen=True)
class MagnitudeVector:
    """Numerosity plus the four relative continuous magnitudes of one scene."""

    numerosity: int
    cumulative_area_rel: float
    item_size_rel: float
    hull_rel: float
    density: float

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (float(self.numerosity), self.cumulative_area_rel,
                self.item_size_rel, self.hull_rel, self.density)


def extract_magnitudes(image: ImageMeta, masks: Sequence[np.ndarray],
                       area_mode: AreaMode = "union") -> MagnitudeVector:
    """Compute the magnitude vector from per-object visible-pixel bitmaps.

    ``area_mode="sum"`` counts overlapping pixels once per object instead
    of once overall; the default union is robust to detector artifacts
    that produce overlapping masks.
    """
    n = len(masks)
    if n == 0:
        raise EmptyInputError("scene has no object masks")
    for k, m in enumerate(masks):
        if not bool(m.any()):
            raise DegenerateObjectError(f"object {k} has an empty mask")

    pixels = float(image.pixels)
    if area_mode == "sum":
        covered = float(sum(int(m.sum()) for m in masks))
    else:
        covered = float(union_area(masks))
    cumulative_area_rel = covered / pixels
    item_size_rel = cumulative_area_rel / n
    hull_rel = hull_area(object_hull_points(masks)) / pixels
    density = n / hull_rel
    return MagnitudeVector(
        numerosity=n,
        cumulative_area_rel=cumulative_area_rel,
        item_size_rel=item_size_rel,
        hull_rel=hull_rel,
        density=density,
    )
