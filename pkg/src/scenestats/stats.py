"""Distributional and correlational analyses over extracted magnitudes.

Covers the numerosity frequency table, power-law (Zipf) fits of its decay,
Pearson correlation matrices computed on numerosity-group means with Holm
multiple-comparison adjustment, cross-matrix consistency, and box-plot
summary rows for plotting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Optional, Sequence

import numpy as np
from scipy.special import stdtr
from scipy.stats import rankdata

from .errors import AlignmentError, DomainError, InsufficientDataError
from .magnitudes import MAGNITUDE_VARIABLES, MagnitudeVector

ZipfMethod = Literal["loglog_ls", "discrete_mle"]
CorrelationMethod = Literal["pearson", "spearman"]

#: Short column names used in report files, mapped to attribute names.
MAGNITUDE_ALIASES = {
    "numerosity": "numerosity",
    "cum_area_rel": "cumulative_area_rel",
    "cumulative_area_rel": "cumulative_area_rel",
    "item_size_rel": "item_size_rel",
    "hull_rel": "hull_rel",
    "density": "density",
}


@dataclass(frozen=True)
class NumerosityDistribution:
    """Exact frequency table of per-scene object counts."""

    counts: dict[int, float]
    total: float

    def __post_init__(self):
        for n in self.counts:
            if n < 0:
                raise DomainError(f"numerosity cannot be negative, got {n}")

    def __add__(self, other: "NumerosityDistribution") -> "NumerosityDistribution":
        merged = dict(self.counts)
        for n, f in other.counts.items():
            merged[n] = merged.get(n, 0) + f
        return NumerosityDistribution(counts=merged, total=self.total + other.total)

    @property
    def max_n(self) -> int:
        return max(self.counts) if self.counts else 0

    def proportions(self) -> dict[int, float]:
        if self.total == 0:
            return {}
        return {n: f / self.total for n, f in sorted(self.counts.items())}

    def tail_fraction(self, above: int) -> float:
        """Fraction of scenes with numerosity strictly greater than ``above``."""
        if self.total == 0:
            return 0.0
        return sum(f for n, f in self.counts.items() if n > above) / self.total


def numerosity_distribution(scene_counts: Iterable[int]) -> NumerosityDistribution:
    counts: dict[int, float] = {}
    total = 0
    for n in scene_counts:
        n = int(n)
        if n < 0:
            raise DomainError(f"numerosity cannot be negative, got {n}")
        counts[n] = counts.get(n, 0) + 1
        total += 1
    return NumerosityDistribution(counts=counts, total=total)


@dataclass(frozen=True)
class ZipfFit:
    """Power-law fit frequency ~ n^(-alpha) of a numerosity distribution."""

    alpha: float
    intercept: Optional[float]
    r_squared: Optional[float]
    method: ZipfMethod
    n_min: int


def fit_zipf(dist: NumerosityDistribution, method: ZipfMethod = "loglog_ls",
             n_min: int = 1) -> ZipfFit:
    """Fit the frequency decay exponent.

    ``loglog_ls`` regresses log frequency on log n over nonzero bins with
    n >= n_min (alpha = -slope). ``discrete_mle`` uses the discrete
    power-law maximum-likelihood estimate
    alpha = 1 + M / sum(ln(n_i / (n_min - 0.5))) over the M observations
    with n_i >= n_min; least squares on log frequencies is known to be
    biased, so the MLE serves as a cross-check.
    """
    if n_min < 1:
        raise DomainError(f"n_min must be >= 1, got {n_min}")
    bins = [(n, f) for n, f in sorted(dist.counts.items())
            if n >= n_min and f > 0]
    if len(bins) < 3:
        raise InsufficientDataError(
            f"power-law fit needs >= 3 nonzero bins with n >= {n_min}, "
            f"got {len(bins)}"
        )
    if method == "loglog_ls":
        x = np.log(np.array([n for n, _ in bins], dtype=float))
        y = np.log(np.array([f for _, f in bins], dtype=float))
        xm = x.mean()
        ym = y.mean()
        sxx = float(np.sum((x - xm) ** 2))
        slope = float(np.sum((x - xm) * (y - ym)) / sxx)
        intercept = ym - slope * xm
        resid = y - (intercept + slope * x)
        sst = float(np.sum((y - ym) ** 2))
        r_squared = 1.0 if sst == 0.0 else 1.0 - float(np.sum(resid ** 2)) / sst
        return ZipfFit(alpha=-slope, intercept=float(intercept),
                       r_squared=r_squared, method="loglog_ls", n_min=n_min)
    if method == "discrete_mle":
        m = sum(f for _, f in bins)
        s = sum(f * math.log(n / (n_min - 0.5)) for n, f in bins)
        if s <= 0:
            raise InsufficientDataError("all observations sit at n = n_min")
        return ZipfFit(alpha=1.0 + m / s, intercept=None, r_squared=None,
                       method="discrete_mle", n_min=n_min)
    raise DomainError(f"unknown fit method {method!r}")


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation; zero-variance input is a domain error."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise AlignmentError(f"series shapes differ: {xa.shape} vs {ya.shape}")
    if xa.size < 2:
        raise InsufficientDataError("correlation needs >= 2 points")
    xd = xa - xa.mean()
    yd = ya - ya.mean()
    sx = float(np.sqrt(np.sum(xd ** 2)))
    sy = float(np.sqrt(np.sum(yd ** 2)))
    if sx == 0.0 or sy == 0.0:
        raise DomainError("correlation undefined for zero-variance series")
    r = float(np.sum(xd * yd) / (sx * sy))
    return max(-1.0, min(1.0, r))


def _correlation_p(r: float, k: int) -> float:
    """Two-sided p for Pearson r over k points via the t distribution."""
    df = k - 2
    if df < 1:
        return 1.0
    denom = 1.0 - r * r
    if denom <= 0.0:
        return 0.0
    t = abs(r) * math.sqrt(df / denom)
    return float(2.0 * stdtr(df, -t))


def holm_adjust(p_values: Sequence[float]) -> list[float]:
    """Holm step-down adjusted p-values, returned in the input order."""
    p = [float(v) for v in p_values]
    for v in p:
        if not (0.0 <= v <= 1.0) or math.isnan(v):
            raise DomainError(f"p-value out of [0, 1]: {v}")
    m = len(p)
    order = sorted(range(m), key=lambda i: p[i])
    adjusted = [0.0] * m
    running = 0.0
    for rank, idx in enumerate(order):
        candidate = min(1.0, (m - rank) * p[idx])
        running = max(running, candidate)
        adjusted[idx] = running
    return adjusted


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric R matrix over the five magnitude variables with p-values."""

    variables: tuple[str, ...]
    r: np.ndarray
    p_raw: np.ndarray
    p_holm: np.ndarray
    group_count: int
    zero_variance: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "group_count": self.group_count,
            "r": self.r.tolist(),
            "p_raw": self.p_raw.tolist(),
            "p_holm": self.p_holm.tolist(),
            "zero_variance": list(self.zero_variance),
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "CorrelationMatrix":
        try:
            return cls(
                variables=tuple(obj["variables"]),
                r=np.asarray(obj["r"], dtype=float),
                p_raw=np.asarray(obj["p_raw"], dtype=float),
                p_holm=np.asarray(obj["p_holm"], dtype=float),
                group_count=int(obj["group_count"]),
                zero_variance=tuple(obj.get("zero_variance", ())),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise AlignmentError(f"not a correlation-matrix record: {e}") from e


def upper_triangle(matrix: np.ndarray) -> np.ndarray:
    """Off-diagonal upper-triangle entries in row-major order."""
    idx = np.triu_indices(matrix.shape[0], k=1)
    return np.asarray(matrix)[idx]


def correlation_matrix(rows: Sequence[MagnitudeVector], min_n: int = 5,
                       min_group_size: int = 1,
                       method: CorrelationMethod = "pearson") -> CorrelationMatrix:
    """Correlations between numerosity-group means of the five magnitudes.

    Scenes with fewer than ``min_n`` objects are excluded, the rest are
    grouped by exact numerosity, and each variable is reduced to its group
    mean before correlating. Holm adjustment runs across the 10 distinct
    off-diagonal pairs. Zero-variance series are flagged and their pairs
    reported as r = 0, not significant.
    """
    usable = [r for r in rows if r.numerosity >= min_n]
    groups: dict[int, list[MagnitudeVector]] = {}
    for r in usable:
        groups.setdefault(r.numerosity, []).append(r)
    if min_group_size > 1:
        groups = {n: g for n, g in groups.items() if len(g) >= min_group_size}
    ns = sorted(groups)
    k = len(ns)
    if k < 3:
        raise InsufficientDataError(
            f"correlation needs >= 3 numerosity groups with n >= {min_n}, got {k}"
        )

    series = np.empty((len(MAGNITUDE_VARIABLES), k), dtype=float)
    series[0] = np.asarray(ns, dtype=float)
    for col, n in enumerate(ns):
        vecs = groups[n]
        for row, name in enumerate(MAGNITUDE_VARIABLES[1:], start=1):
            series[row, col] = float(np.mean([getattr(v, name) for v in vecs]))

    if method == "spearman":
        series = np.vstack([rankdata(s) for s in series])
    elif method != "pearson":
        raise DomainError(f"unknown correlation method {method!r}")

    stds = series.std(axis=1)
    zero_variance = tuple(
        name for name, s in zip(MAGNITUDE_VARIABLES, stds) if s == 0.0
    )

    nvars = len(MAGNITUDE_VARIABLES)
    r = np.eye(nvars)
    p_raw = np.zeros((nvars, nvars))
    pair_index = []
    pair_p = []
    for i in range(nvars):
        for j in range(i + 1, nvars):
            if stds[i] == 0.0 or stds[j] == 0.0:
                rij, pij = 0.0, 1.0
            else:
                rij = pearson(series[i], series[j])
                pij = _correlation_p(rij, k)
            r[i, j] = r[j, i] = rij
            p_raw[i, j] = p_raw[j, i] = pij
            pair_index.append((i, j))
            pair_p.append(pij)

    adjusted = holm_adjust(pair_p)
    p_holm = np.zeros((nvars, nvars))
    for (i, j), padj in zip(pair_index, adjusted):
        p_holm[i, j] = p_holm[j, i] = padj

    return CorrelationMatrix(
        variables=MAGNITUDE_VARIABLES,
        r=r,
        p_raw=p_raw,
        p_holm=p_holm,
        group_count=k,
        zero_variance=zero_variance,
    )


def matrix_consistency(a: CorrelationMatrix, b: CorrelationMatrix) -> float:
    """Pearson correlation between the off-diagonal R values of two matrices."""
    if a.variables != b.variables:
        raise AlignmentError(
            f"variable orderings differ: {a.variables} vs {b.variables}"
        )
    va = upper_triangle(a.r)
    vb = upper_triangle(b.r)
    if np.array_equal(va, vb):
        return 1.0
    return pearson(va, vb)


@dataclass(frozen=True)
class BoxplotRow:
    """Five-number summary of one numerosity group, Tukey whiskers."""

    n: int
    count: int
    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: int


def boxplot_summary(rows: Sequence[MagnitudeVector],
                    magnitude: str) -> list[BoxplotRow]:
    """Per-numerosity box-plot rows for one magnitude.

    Quartiles use linear interpolation; whiskers reach the most extreme
    observation within 1.5 IQR of the quartiles; anything beyond counts
    as an outlier. Empty groups simply do not appear.
    """
    attr = MAGNITUDE_ALIASES.get(magnitude)
    if attr is None or attr == "numerosity":
        raise DomainError(f"unknown magnitude {magnitude!r}")
    groups: dict[int, list[float]] = {}
    for r in rows:
        groups.setdefault(r.numerosity, []).append(float(getattr(r, attr)))
    out = []
    for n in sorted(groups):
        values = np.asarray(groups[n], dtype=float)
        q1, med, q3 = (float(q) for q in
                       np.percentile(values, [25.0, 50.0, 75.0]))
        iqr = q3 - q1
        lo_limit = q1 - 1.5 * iqr
        hi_limit = q3 + 1.5 * iqr
        inside = values[(values >= lo_limit) & (values <= hi_limit)]
        whisker_low = float(inside.min()) if inside.size else q1
        whisker_high = float(inside.max()) if inside.size else q3
        outliers = int(values.size - inside.size)
        out.append(BoxplotRow(n=n, count=int(values.size), q1=q1, median=med,
                              q3=q3, whisker_low=whisker_low,
                              whisker_high=whisker_high, outliers=outliers))
    return out
