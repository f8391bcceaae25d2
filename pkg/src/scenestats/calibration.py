"""Detection-threshold calibration against a reference numerosity distribution.

The two-sample Kolmogorov-Smirnov statistic measures how far the filtered
numerosity distribution sits from the reference, and a grid search over
the confidence threshold picks the value minimizing it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence

import numpy as np

from .errors import AlignmentError, EmptyInputError, ScenestatsError
from .filtering import FilterConfig, filter_scene
from .types import DetectionSet


@dataclass(frozen=True)
class KsResult:
    """Two-sample Kolmogorov-Smirnov outcome."""

    statistic: float
    p_value: float
    n1: int
    n2: int

    @property
    def effective_n(self) -> float:
        return self.n1 * self.n2 / (self.n1 + self.n2)


def kolmogorov_sf(lam: float) -> float:
    """Survival function of the Kolmogorov distribution.

    Q(lambda) = 2 * sum_{k>=1} (-1)^(k-1) exp(-2 k^2 lambda^2), truncated
    once terms fall below 1e-10. Values of lambda at or below zero map to
    probability 1.
    """
    if lam <= 0.0:
        return 1.0
    total = 0.0
    sign = 1.0
    for k in range(1, 100_000):
        term = math.exp(-2.0 * k * k * lam * lam)
        if term < 1e-10:
            break
        total += sign * term
        sign = -sign
    return min(1.0, max(0.0, 2.0 * total))


def ks_two_sample(a: Sequence[float], b: Sequence[float]) -> KsResult:
    """D = sup over observed values of |F_a(x) - F_b(x)| plus asymptotic p.

    Right-continuous empirical CDFs evaluated on the union of observed
    values, so ties (integer samples) are handled exactly. The p-value
    uses the asymptotic Kolmogorov distribution with the small-sample
    effective-size correction lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) D.
    """
    xa = np.sort(np.asarray(a, dtype=float))
    xb = np.sort(np.asarray(b, dtype=float))
    n1 = int(xa.size)
    n2 = int(xb.size)
    if n1 == 0 or n2 == 0:
        raise EmptyInputError("both samples must be non-empty")
    values = np.union1d(xa, xb)
    fa = np.searchsorted(xa, values, side="right") / n1
    fb = np.searchsorted(xb, values, side="right") / n2
    d = float(np.max(np.abs(fa - fb)))
    ne = n1 * n2 / (n1 + n2)
    lam = (math.sqrt(ne) + 0.12 + 0.11 / math.sqrt(ne)) * d
    return KsResult(statistic=d, p_value=kolmogorov_sf(lam), n1=n1, n2=n2)


def threshold_grid(tmin: float = 0.10, tmax: float = 0.45,
                   step: float = 0.01) -> list[float]:
    """Inclusive threshold grid, endpoints on both sides."""
    if step <= 0 or tmax < tmin:
        raise EmptyInputError(f"invalid grid [{tmin}, {tmax}] step {step}")
    n_steps = int(round((tmax - tmin) / step))
    taus = [round(tmin + i * step, 10) for i in range(n_steps + 1)]
    return [t for t in taus if t <= tmax + 1e-12]


@dataclass(frozen=True)
class CalibrationReport:
    """Grid of (threshold, KS result) pairs and the minimizer."""

    grid: tuple[tuple[float, KsResult], ...]
    best_tau: float
    best: KsResult


def calibrate(detection_sets: Sequence[DetectionSet], reference: Sequence[int],
              cfg_base: FilterConfig, tmin: float = 0.10, tmax: float = 0.45,
              step: float = 0.01) -> CalibrationReport:
    """Grid-search the threshold minimizing the KS distance to ``reference``.

    Ties go to the smallest threshold. The threshold only gates the final
    filter stage, so the earlier stages run once per scene and numerosity
    at each grid point is counted from the surviving scores directly;
    results are identical to re-filtering per grid point.
    """
    taus = threshold_grid(tmin, tmax, step)
    if not reference:
        raise EmptyInputError("reference sample is empty")
    if not detection_sets:
        raise EmptyInputError("no detection sets supplied")

    base_cfg = replace(cfg_base, threshold=cfg_base.floor)
    per_scene_scores = []
    for ds in detection_sets:
        try:
            scene = filter_scene(ds.detections, ds.image, base_cfg)
        except ScenestatsError as e:
            raise type(e)(f"image {ds.image.id!r}: {e}") from e
        per_scene_scores.append(np.sort(np.asarray([d.score for d in scene.kept])))

    ref = [int(v) for v in reference]
    grid: list[tuple[float, KsResult]] = []
    best_tau = None
    best = None
    for tau in taus:
        counts = [int(s.size - np.searchsorted(s, tau, side="left"))
                  for s in per_scene_scores]
        result = ks_two_sample(counts, ref)
        grid.append((tau, result))
        if best is None or result.statistic < best.statistic:
            best = result
            best_tau = tau
    assert best is not None and best_tau is not None
    return CalibrationReport(grid=tuple(grid), best_tau=best_tau, best=best)


def mean_absolute_error(pred: Mapping[int | str, int] | Sequence[int],
                        truth: Mapping[int | str, int] | Sequence[int]) -> float:
    """Mean |pred - truth| over records paired by image id (or by position)."""
    if isinstance(pred, Mapping) != isinstance(truth, Mapping):
        raise AlignmentError("pred and truth must both be keyed or both sequences")
    if isinstance(pred, Mapping) and isinstance(truth, Mapping):
        if set(pred.keys()) != set(truth.keys()):
            missing = set(pred.keys()) ^ set(truth.keys())
            raise AlignmentError(
                f"pred/truth image ids do not match ({len(missing)} unpaired)"
            )
        if not pred:
            raise EmptyInputError("no paired counts")
        return float(np.mean([abs(pred[k] - truth[k]) for k in pred]))
    if len(pred) != len(truth):
        raise AlignmentError(
            f"pred has {len(pred)} entries, truth has {len(truth)}"
        )
    if len(pred) == 0:
        raise EmptyInputError("no paired counts")
    return float(np.mean([abs(p - t) for p, t in zip(pred, truth)]))
