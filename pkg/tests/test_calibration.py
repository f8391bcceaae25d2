import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenestats import (
    FilterConfig,
    ItemSizeLaw,
    ScoreBands,
    SynthConfig,
    calibrate,
    generate,
    ks_two_sample,
    mean_absolute_error,
    threshold_grid,
)
from scenestats.calibration import kolmogorov_sf
from scenestats.errors import AlignmentError, EmptyInputError


def ks_brute_force(a, b) -> float:
    """sup over every observed value of |F_a(x) - F_b(x)|, counted directly."""
    best = 0.0
    for x in set(a) | set(b):
        fa = sum(1 for v in a if v <= x) / len(a)
        fb = sum(1 for v in b if v <= x) / len(b)
        best = max(best, abs(fa - fb))
    return best


def test_ks_identical_samples():
    res = ks_two_sample([1, 2, 3], [1, 2, 3])
    assert res.statistic == 0.0
    assert res.p_value == 1.0


def test_ks_disjoint_supports():
    res = ks_two_sample([1, 1, 1], [2, 2, 2])
    assert res.statistic == 1.0


def test_ks_known_quarter():
    res = ks_two_sample([1, 2, 3, 4], [2, 3, 4, 5])
    assert res.statistic == 0.25


def test_ks_empty_sample():
    with pytest.raises(EmptyInputError):
        ks_two_sample([], [1])


def test_ks_matches_brute_force():
    rng = np.random.default_rng(314)
    for _ in range(300):
        n1 = int(rng.integers(1, 30))
        n2 = int(rng.integers(1, 30))
        a = rng.integers(0, 12, size=n1).tolist()
        b = rng.integers(0, 12, size=n2).tolist()
        res = ks_two_sample(a, b)
        assert abs(res.statistic - ks_brute_force(a, b)) < 1e-12


def test_ks_symmetric_and_bounded():
    rng = np.random.default_rng(11)
    for _ in range(50):
        a = rng.integers(0, 8, size=int(rng.integers(1, 20))).tolist()
        b = rng.integers(0, 8, size=int(rng.integers(1, 20))).tolist()
        r1 = ks_two_sample(a, b)
        r2 = ks_two_sample(b, a)
        assert r1.statistic == r2.statistic
        assert 0.0 <= r1.statistic <= 1.0
        assert 0.0 <= r1.p_value <= 1.0


def test_p_value_monotone_in_d():
    # same sample sizes, the p-value must fall as D grows
    lams = []
    for d in np.linspace(0.0, 1.0, 21):
        ne = 50 * 50 / 100
        lam = (math.sqrt(ne) + 0.12 + 0.11 / math.sqrt(ne)) * d
        lams.append(kolmogorov_sf(lam))
    assert all(b <= a + 1e-15 for a, b in zip(lams, lams[1:]))


def test_kolmogorov_sf_reference_values():
    # spot values of the asymptotic distribution (independent table values)
    assert kolmogorov_sf(0.0) == 1.0
    assert kolmogorov_sf(10.0) == pytest.approx(0.0, abs=1e-12)
    # Q(1.0) = 2*sum (-1)^{k-1} exp(-2k^2) computed directly
    direct = 2 * sum((-1) ** (k - 1) * math.exp(-2 * k * k) for k in range(1, 40))
    assert kolmogorov_sf(1.0) == pytest.approx(direct, abs=1e-10)


def test_threshold_grid_inclusive_36_points():
    grid = threshold_grid(0.10, 0.45, 0.01)
    assert len(grid) == 36
    assert grid[0] == 0.10
    assert grid[-1] == 0.45


def recovery_corpus(n_scenes, seed=424242):
    cfg = SynthConfig(
        n_scenes=n_scenes,
        zipf_alpha=1.6,
        n_max=12,
        image_size=(64, 64),
        item_size_law=ItemSizeLaw(base_fraction=0.01, exponent=-1.0,
                                  jitter_sigma=0.1),
        spurious_rate=1.0,
        score_bands=ScoreBands(true_range=(0.22, 1.0),
                               spurious_range=(0.05, 0.215)),
        seed=seed,
    )
    return generate(cfg)


def test_calibration_recovers_band_edge():
    annotations, detections = recovery_corpus(800)
    reference = [s.numerosity for s in annotations]
    report = calibrate(detections, reference, FilterConfig(threshold=0.22))
    assert report.best_tau == 0.22
    assert report.best.statistic == 0.0
    assert report.best.p_value > 0.999


def test_calibration_tie_breaks_to_smallest_tau():
    cfg = SynthConfig(n_scenes=60, zipf_alpha=1.5, n_max=6,
                      image_size=(64, 64), spurious_rate=0.0,
                      score_bands=ScoreBands(true_range=(0.45, 1.0),
                                             spurious_range=(0.0, 0.0)),
                      seed=7)
    annotations, detections = generate(cfg)
    reference = [s.numerosity for s in annotations]
    report = calibrate(detections, reference, FilterConfig(threshold=0.22))
    stats = {res.statistic for _, res in report.grid}
    assert stats == {0.0}
    assert report.best_tau == 0.10


def test_calibration_matches_exhaustive_refilter():
    from scenestats import filter_scene, numerosity

    annotations, detections = recovery_corpus(120, seed=5)
    reference = [s.numerosity for s in annotations]
    report = calibrate(detections, reference, FilterConfig(threshold=0.22),
                       tmin=0.10, tmax=0.30, step=0.05)
    for tau, res in report.grid:
        counts = [numerosity(filter_scene(ds.detections, ds.image,
                                          FilterConfig(threshold=tau)))
                  for ds in detections]
        direct = ks_two_sample(counts, reference)
        assert direct.statistic == res.statistic


def test_numerosity_monotone_over_grid():
    from scenestats import filter_scene, numerosity

    _, detections = recovery_corpus(50, seed=99)
    for ds in detections[:20]:
        previous = None
        for tau in threshold_grid(0.10, 0.45, 0.05):
            n = numerosity(filter_scene(ds.detections, ds.image,
                                        FilterConfig(threshold=tau)))
            if previous is not None:
                assert n <= previous
            previous = n


# ---------------------------------------------------------------------------
# mean absolute error

def test_mae_zero_for_equal():
    assert mean_absolute_error([3, 5, 10], [3, 5, 10]) == 0.0


def test_mae_shift_by_one():
    assert mean_absolute_error([4, 6, 11], [3, 5, 10]) == 1.0


def test_mae_known_value():
    assert mean_absolute_error([3, 5, 10], [1, 5, 14]) == 2.0


def test_mae_keyed_alignment():
    assert mean_absolute_error({"a": 3, "b": 5}, {"b": 5, "a": 1}) == 1.0
    with pytest.raises(AlignmentError):
        mean_absolute_error({"a": 3}, {"b": 3})


def test_mae_length_mismatch():
    with pytest.raises(AlignmentError):
        mean_absolute_error([1, 2], [1])


@given(st.lists(st.integers(min_value=0, max_value=50), min_size=1, max_size=30))
@settings(max_examples=100, deadline=None)
def test_mae_nonnegative_and_zero_iff_equal(counts):
    assert mean_absolute_error(counts, counts) == 0.0
    shifted = [c + 2 for c in counts]
    assert mean_absolute_error(shifted, counts) == 2.0
