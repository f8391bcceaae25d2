import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenestats import (
    convex_hull,
    hull_area,
    iou,
    object_hull_points,
    shoelace_area,
    union_area,
)
from scenestats.errors import DegeneratePolygonError, EmptyInputError

from conftest import random_bitmap


# ---------------------------------------------------------------------------
# brute-force oracles

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _contained(p, a, b, c) -> bool:
    """p inside or on the convex hull of {a, b, c} (degenerate triples allowed)."""
    d1 = _cross(a, b, p)
    d2 = _cross(b, c, p)
    d3 = _cross(c, a, p)
    if _cross(a, b, c) != 0:
        neg = (d1 < 0) or (d2 < 0) or (d3 < 0)
        pos = (d1 > 0) or (d2 > 0) or (d3 > 0)
        return not (neg and pos)
    # collinear triple: containment in the spanned segment
    pts = [a, b, c]
    lo = min(pts)
    hi = max(pts)
    if _cross(lo, hi, p) != 0:
        return False
    return lo <= p <= hi


def brute_force_hull_vertices(points) -> set:
    """A point is a hull vertex iff no triple of other points contains it."""
    pts = list(points)
    vertices = set()
    for i, p in enumerate(pts):
        others = [q for j, q in enumerate(pts) if j != i and q != p]
        inside = False
        for a in range(len(others)):
            for b in range(a + 1, len(others)):
                for c in range(b + 1, len(others)):
                    if _contained(p, others[a], others[b], others[c]):
                        inside = True
                        break
                if inside:
                    break
            if inside:
                break
        if not inside and len(others) >= 2:
            # 2-point degenerate "triangles" for tiny inputs
            for a in range(len(others)):
                for b in range(a + 1, len(others)):
                    if _contained(p, others[a], others[a], others[b]):
                        inside = True
                        break
                if inside:
                    break
        if not inside:
            vertices.add(p)
    return vertices


def pixel_iou_oracle(a, b, frame: int) -> float:
    """Rasterized IoU for integer-aligned boxes."""
    ga = np.zeros((frame, frame), dtype=bool)
    gb = np.zeros((frame, frame), dtype=bool)
    ax, ay, aw, ah = (int(v) for v in a)
    bx, by, bw, bh = (int(v) for v in b)
    ga[ay:ay + ah, ax:ax + aw] = True
    gb[by:by + bh, bx:bx + bw] = True
    inter = int((ga & gb).sum())
    union = int((ga | gb).sum())
    return inter / union if union else 0.0


def all_corner_points(masks):
    """Every pixel-square corner (the unreduced hull input)."""
    points = set()
    for m in masks:
        for i, j in np.argwhere(m):
            points.update({(j, i), (j + 1, i), (j, i + 1), (j + 1, i + 1)})
    return points


# ---------------------------------------------------------------------------
# iou

def test_iou_identity():
    assert iou((2, 3, 5, 4), (2, 3, 5, 4)) == 1.0


def test_iou_disjoint():
    assert iou((0, 0, 2, 2), (5, 5, 2, 2)) == 0.0


def test_iou_known_overlap():
    assert abs(iou((0, 0, 2, 2), (1, 1, 2, 2)) - 1 / 7) < 1e-12


def test_iou_zero_area_union():
    assert iou((0, 0, 0, 0), (0, 0, 0, 0)) == 0.0


def test_iou_matches_pixel_oracle():
    rng = np.random.default_rng(99)
    for _ in range(200):
        a = (int(rng.integers(0, 10)), int(rng.integers(0, 10)),
             int(rng.integers(1, 10)), int(rng.integers(1, 10)))
        b = (int(rng.integers(0, 10)), int(rng.integers(0, 10)),
             int(rng.integers(1, 10)), int(rng.integers(1, 10)))
        assert abs(iou(a, b) - pixel_iou_oracle(a, b, 20)) < 1e-9


@given(st.tuples(*[st.floats(min_value=0, max_value=50) for _ in range(4)]),
       st.tuples(*[st.floats(min_value=0, max_value=50) for _ in range(4)]))
@settings(max_examples=150, deadline=None)
def test_iou_symmetric(a, b):
    assert iou(a, b) == iou(b, a)
    va = iou(a, b)
    assert 0.0 <= va <= 1.0
    if a[2] > 0 and a[3] > 0:
        assert iou(a, a) == 1.0


# ---------------------------------------------------------------------------
# shoelace

def test_shoelace_unit_square():
    assert shoelace_area([(0, 0), (1, 0), (1, 1), (0, 1)]) == 1.0


def test_shoelace_triangle():
    assert shoelace_area([(0, 0), (4, 0), (0, 3)]) == 6.0


def test_shoelace_orientation_independent():
    ring = [(0, 0), (5, 1), (4, 6), (1, 4)]
    assert shoelace_area(ring) == shoelace_area(ring[::-1])


def test_shoelace_degenerate():
    with pytest.raises(DegeneratePolygonError):
        shoelace_area([(0, 0), (1, 1)])


# ---------------------------------------------------------------------------
# convex hull

def test_hull_square_plus_center():
    hull = convex_hull([(0, 0), (4, 0), (4, 4), (0, 4), (2, 2)])
    assert set(hull) == {(0, 0), (4, 0), (4, 4), (0, 4)}
    assert len(hull) == 4


def test_hull_collinear_degenerate():
    hull = convex_hull([(0, 0), (1, 1), (2, 2), (3, 3)])
    assert hull == [(0, 0), (3, 3)]
    assert hull_area([(0, 0), (1, 1), (2, 2)]) == 0.0


def test_hull_single_point():
    assert convex_hull([(3, 4)]) == [(3, 4)]


def test_hull_empty_input():
    with pytest.raises(EmptyInputError):
        convex_hull([])


def test_hull_counterclockwise_and_convex():
    rng = np.random.default_rng(4)
    pts = [(float(x), float(y)) for x, y in rng.integers(0, 50, size=(30, 2))]
    hull = convex_hull(pts)
    n = len(hull)
    assert n >= 3
    for k in range(n):
        assert _cross(hull[k], hull[(k + 1) % n], hull[(k + 2) % n]) > 0


def test_hull_matches_brute_force():
    rng = np.random.default_rng(2024)
    grid = [(x, y) for x in range(9) for y in range(9)]
    for _ in range(60):
        k = int(rng.integers(1, 13))
        idx = rng.choice(len(grid), size=k, replace=False)
        pts = [grid[i] for i in idx]
        assert set(convex_hull(pts)) == brute_force_hull_vertices(pts)


def test_hull_idempotent():
    rng = np.random.default_rng(8)
    pts = [tuple(map(float, p)) for p in rng.integers(0, 30, size=(25, 2))]
    hull = convex_hull(pts)
    assert set(convex_hull(hull)) == set(hull)


def test_hull_monotone_in_points():
    rng = np.random.default_rng(15)
    pts = [tuple(map(float, p)) for p in rng.integers(0, 20, size=(10, 2))]
    area = hull_area(pts)
    for p in [(25.0, 3.0), (3.0, 25.0), (10.0, 10.0)]:
        assert hull_area(pts + [p]) >= area - 1e-12


# ---------------------------------------------------------------------------
# object hull points / union area

def test_single_pixel_hull_area_one():
    mask = np.zeros((8, 8), dtype=bool)
    mask[0, 0] = True
    assert hull_area(object_hull_points([mask])) == 1.0


def test_two_pixels_hull_area_four():
    m1 = np.zeros((8, 8), dtype=bool)
    m2 = np.zeros((8, 8), dtype=bool)
    m1[0, 0] = True
    m2[0, 3] = True
    assert hull_area(object_hull_points([m1, m2])) == 4.0


def test_full_image_hull_area():
    mask = np.ones((6, 9), dtype=bool)
    assert hull_area(object_hull_points([mask])) == 54.0


def test_hull_points_empty_masks():
    with pytest.raises(EmptyInputError):
        object_hull_points([np.zeros((4, 4), dtype=bool)])
    with pytest.raises(EmptyInputError):
        object_hull_points([])


def test_reduced_hull_points_equal_full_corner_hull():
    rng = np.random.default_rng(123)
    for _ in range(40):
        masks = [random_bitmap(rng, 10, 10, 0.15) for _ in range(3)]
        if not any(m.any() for m in masks):
            continue
        reduced = hull_area(object_hull_points(masks))
        full = hull_area(all_corner_points(masks))
        assert reduced == full


def test_union_area_idempotent_and_disjoint():
    base = np.zeros((6, 6), dtype=bool)
    base[:2, :5] = True  # 10 pixels
    other = np.zeros((6, 6), dtype=bool)
    other[4:5, :5] = True  # 5 pixels
    assert union_area([base, base.copy()]) == 10
    assert union_area([base, other]) == 15
    assert union_area([]) == 0


def test_union_area_matches_per_pixel_oracle():
    rng = np.random.default_rng(55)
    for _ in range(60):
        masks = [random_bitmap(rng, 7, 9) for _ in range(3)]
        want = 0
        for i in range(7):
            for j in range(9):
                want += int(any(bool(m[i, j]) for m in masks))
        assert union_area(masks) == want


def test_hull_contains_union_pixels():
    rng = np.random.default_rng(42)
    for _ in range(30):
        masks = [random_bitmap(rng, 9, 9, 0.2) for _ in range(2)]
        if not any(m.any() for m in masks):
            continue
        assert hull_area(object_hull_points(masks)) >= union_area(masks)
