"""Rasterization: mask representations to boolean pixel grids and back.

Conventions, used everywhere downstream:

* a bitmap is a (height, width) boolean numpy array;
* pixel (i, j) covers the unit square x in [j, j+1], y in [i, i+1];
* polygons fill by the even-odd rule, and pixel (i, j) is set iff its
  center (j + 0.5, i + 0.5) lies inside;
* run-length counts unpack column-major, background run first.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import CorruptMaskError, DimensionError, DomainError
from .rle import rle_decode, rle_encode
from .types import ImageMeta, MaskRepr

Bitmap = np.ndarray


def rle_counts_to_bitmap(counts: Sequence[int], size: tuple[int, int]) -> Bitmap:
    """Unpack column-major run-length counts into a (height, width) bitmap."""
    height, width = int(size[0]), int(size[1])
    arr = np.asarray(counts, dtype=np.int64)
    if arr.size and arr.min() < 0:
        raise DomainError("run-length counts must be non-negative")
    if int(arr.sum()) != height * width:
        raise CorruptMaskError(
            f"counts sum to {int(arr.sum())}, expected {height * width}"
        )
    values = (np.arange(arr.size) % 2).astype(bool)
    flat = np.repeat(values, arr)
    return flat.reshape((height, width), order="F")


def bitmap_to_rle_counts(bitmap: Bitmap) -> list[int]:
    """Inverse of :func:`rle_counts_to_bitmap` (background run first)."""
    flat = np.asarray(bitmap, dtype=bool).reshape(-1, order="F")
    if flat.size == 0:
        return []
    change = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    bounds = np.concatenate(([0], change, [flat.size]))
    runs = np.diff(bounds).tolist()
    if flat[0]:
        runs.insert(0, 0)
    return [int(r) for r in runs]


def rasterize_polygons(rings: Sequence[Sequence[float]],
                       size: tuple[int, int]) -> Bitmap:
    """Fill a set of polygon rings (flat x,y coordinate lists) even-odd.

    Horizontal edges never produce crossings; a scanline through the
    pixel-center row y = i + 0.5 uses half-open vertex intervals so shared
    vertices are counted exactly once.
    """
    height, width = int(size[0]), int(size[1])
    grid = np.zeros((height, width), dtype=bool)

    x0s: list[float] = []
    y0s: list[float] = []
    x1s: list[float] = []
    y1s: list[float] = []
    for ring in rings:
        pts = [(float(ring[k]), float(ring[k + 1])) for k in range(0, len(ring), 2)]
        n = len(pts)
        for k in range(n):
            ax, ay = pts[k]
            bx, by = pts[(k + 1) % n]
            if ay == by:
                continue
            x0s.append(ax)
            y0s.append(ay)
            x1s.append(bx)
            y1s.append(by)
    if not x0s:
        return grid

    ex0 = np.asarray(x0s)
    ey0 = np.asarray(y0s)
    ex1 = np.asarray(x1s)
    ey1 = np.asarray(y1s)
    slope = (ex1 - ex0) / (ey1 - ey0)

    for i in range(height):
        yc = i + 0.5
        hit = ((ey0 <= yc) & (yc < ey1)) | ((ey1 <= yc) & (yc < ey0))
        if not hit.any():
            continue
        xs = ex0[hit] + (yc - ey0[hit]) * slope[hit]
        xs.sort()
        for t in range(0, xs.size - 1, 2):
            a, b = xs[t], xs[t + 1]
            j0 = max(math.ceil(a - 0.5), 0)
            j1 = min(math.ceil(b - 0.5), width)
            if j1 > j0:
                grid[i, j0:j1] = True
    return grid


def mask_to_bitmap(mask: MaskRepr, image: ImageMeta) -> Bitmap:
    """Materialize any mask representation as a bitmap in the image frame."""
    expected = (image.height, image.width)
    if mask.size != expected:
        raise DimensionError(
            f"mask size {mask.size} does not match image frame {expected}"
        )
    if mask.variant == "polygon_set":
        return rasterize_polygons(mask.polygons, expected)
    if mask.variant == "rle_uncompressed":
        return rle_counts_to_bitmap(mask.counts, expected)
    counts = rle_decode(mask.rle_string, expected)
    return rle_counts_to_bitmap(counts, expected)


def bitmap_to_mask(bitmap: Bitmap) -> MaskRepr:
    """Compress a bitmap into the compact run-length text representation."""
    h, w = bitmap.shape
    counts = bitmap_to_rle_counts(bitmap)
    return MaskRepr.from_rle_string(rle_encode(counts), (h, w))
