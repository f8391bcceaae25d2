"""Metric computations on boxes, polygons, bitmaps and point sets.

Everything here is pure and reentrant. Boxes are (x, y, w, h) tuples,
point sets are sequences of (x, y) pairs, bitmaps are boolean numpy
arrays sharing one image frame.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DegeneratePolygonError, DimensionError, DomainError, EmptyInputError

Point = tuple[float, float]


def iou(a: Sequence[float], b: Sequence[float]) -> float:
    """Intersection over union of two (x, y, w, h) boxes; 0 when the union is empty."""
    ax, ay, aw, ah = (float(v) for v in a)
    bx, by, bw, bh = (float(v) for v in b)
    if aw < 0 or ah < 0 or bw < 0 or bh < 0:
        raise DomainError("box width/height must be >= 0")
    if (ax, ay, aw, ah) == (bx, by, bw, bh):
        return 1.0 if (aw > 0 and ah > 0) else 0.0
    iw = min(ax + aw, bx + bw) - max(ax, bx)
    ih = min(ay + ah, by + bh) - max(ay, by)
    inter = max(iw, 0.0) * max(ih, 0.0)
    union = aw * ah + bw * bh - inter
    if union <= 0.0:
        return 0.0
    return min(1.0, inter / union)


def shoelace_area(ring: Sequence[Point]) -> float:
    """Absolute polygon area of a closed ring (first vertex = last implied)."""
    if len(ring) < 3:
        raise DegeneratePolygonError(
            f"shoelace area needs >= 3 vertices, got {len(ring)}"
        )
    s = 0.0
    n = len(ring)
    for k in range(n):
        x0, y0 = ring[k]
        x1, y1 = ring[(k + 1) % n]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2.0


def _cross(o: Point, a: Point, b: Point) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Convex hull by Andrew's monotone chain, counter-clockwise.

    Duplicate points are merged and collinear non-corner points dropped;
    ties in the sweep are broken by ascending (x, y) so the result is
    deterministic. Degenerate inputs give 1- or 2-vertex hulls.
    """
    pts = sorted({(p[0], p[1]) for p in points})
    if not pts:
        raise EmptyInputError("convex hull of an empty point set")
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def hull_area(points: Iterable[Point]) -> float:
    """Area of the convex hull; 0 for degenerate (collinear or single) sets."""
    hull = convex_hull(points)
    if len(hull) < 3:
        return 0.0
    return shoelace_area(hull)


def _union_bitmap(masks: Sequence[np.ndarray]) -> np.ndarray:
    shape = masks[0].shape
    for m in masks[1:]:
        if m.shape != shape:
            raise DimensionError(
                f"masks must share one image frame, got {m.shape} vs {shape}"
            )
    out = np.zeros(shape, dtype=bool)
    for m in masks:
        np.logical_or(out, m, out=out)
    return out


def union_area(masks: Sequence[np.ndarray]) -> int:
    """Pixels set in at least one mask. Overlaps count once; empty list gives 0."""
    if not masks:
        return 0
    return int(_union_bitmap(masks).sum())


def object_hull_points(masks: Sequence[np.ndarray]) -> list[tuple[int, int]]:
    """Corner points spanning the unit squares of all foreground pixels.

    Uses the pixel-square convention: pixel (i, j) contributes the corners
    (j, i), (j+1, i), (j, i+1), (j+1, i+1), so a single-pixel object still
    spans a hull of area 1. Only the per-row extreme corners are returned;
    the interior corners are redundant for any convex hull built on top.
    """
    if not masks:
        raise EmptyInputError("no masks supplied")
    union = _union_bitmap(masks)
    rows = np.flatnonzero(union.any(axis=1))
    if rows.size == 0:
        raise EmptyInputError("all masks are empty")
    points: list[tuple[int, int]] = []
    for i in rows.tolist():
        cols = np.flatnonzero(union[i])
        j0 = int(cols[0])
        j1 = int(cols[-1]) + 1
        points.extend(((j0, i), (j1, i), (j0, i + 1), (j1, i + 1)))
    return points
