"""Descriptive statistics, variance decomposition and correlation.

Small-sample machinery for grouped author indicators. All reductions use
compensated summation (math.fsum) so results are independent of how the
input happens to be batched or ordered.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from scipy.stats import t as _student_t


class StatsError(ValueError):
    """Invalid input to a statistics operation."""


@dataclass(frozen=True)
class DescriptiveSummary:
    """Central tendency and variability of one sample.

    sample_std uses the n-1 divisor; a singleton sample has std 0 by
    convention. value_range is max - min.
    """

    n: int
    median: float
    mean: float
    sample_std: float
    min: float
    max: float
    value_range: float


@dataclass(frozen=True)
class BoxplotSummary:
    """Quartiles plus whiskers at the sample minimum and maximum."""

    q1: float
    q2: float
    q3: float
    whisker_low: float
    whisker_high: float


@dataclass(frozen=True)
class VarianceDecomposition:
    """Partition of total variability into within- and between-group parts.

    All three terms are sums of squared deviations, so
    within_ss + between_ss == total_ss. pct_reduction is
    1 - between_ss / within_ss, undefined (None) when within_ss is 0.
    """

    within_ss: float
    between_ss: float
    total_ss: float
    pct_reduction: float | None


@dataclass(frozen=True)
class CorrelationCell:
    """One correlation coefficient with its sample size and significance.

    significance is the confidence level (90, 95 or 99) at which r is
    distinguishable from zero under a two-tailed t test, or None. r is
    None when the coefficient is undefined (constant input or n < 3);
    the note then says why.
    """

    r: float | None
    n: int
    significance: int | None = None
    note: str | None = None


class GroupedSample:
    """Named groups of numeric values, in insertion order.

    Every group must be non-empty; group names are unique. Undefined
    values are expected to have been excluded before construction.
    """

    def __init__(self, groups: Mapping[str, Sequence[float]]):
        cleaned: dict[str, tuple[float, ...]] = {}
        for name, values in groups.items():
            vals = tuple(float(v) for v in values)
            if not vals:
                raise StatsError(f"group {name!r} is empty")
            if name in cleaned:
                raise StatsError(f"duplicate group name {name!r}")
            cleaned[name] = vals
        if not cleaned:
            raise StatsError("at least one group required")
        self._groups = cleaned

    def __len__(self) -> int:
        return len(self._groups)

    def __iter__(self):
        return iter(self._groups.items())

    def names(self) -> list[str]:
        return list(self._groups)

    def values(self, name: str) -> tuple[float, ...]:
        return self._groups[name]

    def pooled(self) -> list[float]:
        return [v for vals in self._groups.values() for v in vals]


def _check_sample(values: Sequence[float]) -> list[float]:
    vals = [float(v) for v in values]
    if not vals:
        raise StatsError("empty sample")
    if any(not math.isfinite(v) for v in vals):
        raise StatsError("sample contains non-finite values")
    return vals


def mean(values: Sequence[float]) -> float:
    vals = _check_sample(values)
    return math.fsum(vals) / len(vals)


def median(values: Sequence[float]) -> float:
    """Middle order statistic; mean of the two middle values for even n."""
    vals = sorted(_check_sample(values))
    n = len(vals)
    mid = n // 2
    if n % 2:
        return vals[mid]
    return (vals[mid - 1] + vals[mid]) / 2.0


def sample_std(values: Sequence[float]) -> float:
    vals = _check_sample(values)
    if len(vals) == 1:
        return 0.0
    m = math.fsum(vals) / len(vals)
    return math.sqrt(math.fsum((v - m) ** 2 for v in vals) / (len(vals) - 1))


def quantile(values: Sequence[float], q: float) -> float:
    """Order statistic at fractional position 1 + (n-1)*q, interpolated.

    This single definition backs every quartile in the package; change it
    here to switch conventions.
    """
    if not 0.0 <= q <= 1.0:
        raise StatsError(f"quantile must be in [0, 1], got {q}")
    vals = sorted(_check_sample(values))
    pos = (len(vals) - 1) * q
    lo = math.floor(pos)
    hi = math.ceil(pos)
    if lo == hi:
        return vals[lo]
    frac = pos - lo
    return vals[lo] * (1.0 - frac) + vals[hi] * frac


def describe(values: Sequence[float]) -> DescriptiveSummary:
    """Median, mean, sample std, min, max and range of a non-empty sample."""
    vals = _check_sample(values)
    lo, hi = min(vals), max(vals)
    return DescriptiveSummary(
        n=len(vals),
        median=median(vals),
        mean=mean(vals),
        sample_std=sample_std(vals),
        min=lo,
        max=hi,
        value_range=hi - lo,
    )


def boxplot(values: Sequence[float]) -> BoxplotSummary:
    """Quartile summary with whiskers at the sample extremes."""
    vals = _check_sample(values)
    return BoxplotSummary(
        q1=quantile(vals, 0.25),
        q2=median(vals),
        q3=quantile(vals, 0.75),
        whisker_low=min(vals),
        whisker_high=max(vals),
    )


def variance_decomposition(sample: GroupedSample) -> VarianceDecomposition:
    """Split total sum of squares into within- and between-group parts.

    within_ss sums squared deviations from each group mean, between_ss
    weights squared group-mean offsets from the grand mean by group size,
    and total_ss sums squared deviations from the grand mean; the three
    satisfy within + between == total up to rounding.
    """
    if len(sample) < 2:
        raise StatsError("variance decomposition needs at least two groups")
    pooled = sample.pooled()
    grand = mean(pooled)
    within = math.fsum(
        math.fsum((v - mean(vals)) ** 2 for v in vals) for _, vals in sample
    )
    between = math.fsum(
        len(vals) * (mean(vals) - grand) ** 2 for _, vals in sample
    )
    total = math.fsum((v - grand) ** 2 for v in pooled)
    pct = 1.0 - between / within if within > 0 else None
    return VarianceDecomposition(
        within_ss=within, between_ss=between, total_ss=total, pct_reduction=pct
    )


def _significance(r: float, n: int) -> int | None:
    """Confidence level of r != 0 from the two-tailed t statistic."""
    if abs(r) >= 1.0:
        return 99
    stat = abs(r) * math.sqrt((n - 2) / (1.0 - r * r))
    p = 2.0 * float(_student_t.sf(stat, n - 2))
    if p < 0.01:
        return 99
    if p < 0.05:
        return 95
    if p < 0.10:
        return 90
    return None


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationCell:
    """Pearson product-moment correlation with t-test significance.

    Requires equal lengths, n >= 3; a constant vector yields an undefined
    cell (r None, with a note) rather than a silent zero.
    """
    xs, ys = _check_sample(x), _check_sample(y)
    if len(xs) != len(ys):
        raise StatsError(f"length mismatch: {len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 3:
        raise StatsError(f"need at least 3 pairs, got {n}")
    # constancy is decided on the raw values; the mean of a constant
    # vector can round to a nearby float, leaving spurious deviations
    if all(v == xs[0] for v in xs) or all(v == ys[0] for v in ys):
        return CorrelationCell(r=None, n=n, note="constant input")
    mx, my = mean(xs), mean(ys)
    dx = [v - mx for v in xs]
    dy = [v - my for v in ys]
    # scale deviations to unit magnitude so squaring cannot under/overflow
    scale_x = max(abs(v) for v in dx)
    scale_y = max(abs(v) for v in dy)
    if scale_x == 0.0 or scale_y == 0.0:
        return CorrelationCell(r=None, n=n, note="constant input")
    dx = [v / scale_x for v in dx]
    dy = [v / scale_y for v in dy]
    sxx = math.fsum(v * v for v in dx)
    syy = math.fsum(v * v for v in dy)
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    return CorrelationCell(r=r, n=n, significance=_significance(r, n))


def average_ranks(values: Sequence[float]) -> list[float]:
    """Ascending ranks 1..n with ties sharing their average rank."""
    vals = _check_sample(values)
    order = sorted(range(len(vals)), key=lambda k: vals[k])
    ranks = [0.0] * len(vals)
    start = 0
    while start < len(vals):
        end = start
        while end + 1 < len(vals) and vals[order[end + 1]] == vals[order[start]]:
            end += 1
        shared = (start + end + 2) / 2.0
        for k in range(start, end + 1):
            ranks[order[k]] = shared
        start = end + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> CorrelationCell:
    """Rank correlation: Pearson applied to average-rank vectors."""
    xs, ys = _check_sample(x), _check_sample(y)
    if len(xs) != len(ys):
        raise StatsError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 3:
        raise StatsError(f"need at least 3 pairs, got {len(xs)}")
    return pearson(average_ranks(xs), average_ranks(ys))


CORRELATION_METHODS = {"pearson": pearson, "spearman": spearman}


def correlation_matrix(
    columns: Mapping[str, Sequence[float]], method: str = "pearson"
) -> tuple[list[str], list[list[CorrelationCell]]]:
    """Symmetric matrix of correlation cells over named columns.

    Pairs with undefined values (None or NaN in either column) are
    excluded pairwise; each cell's n reports the pairs actually used.
    Statistically undefined cells (constant column, fewer than 3 usable
    pairs) are flagged per cell instead of raising.
    """
    if method not in CORRELATION_METHODS:
        raise StatsError(
            f"unknown method {method!r}; expected one of {sorted(CORRELATION_METHODS)}"
        )
    corr = CORRELATION_METHODS[method]
    names = list(columns)
    if len(names) < 2:
        raise StatsError("need at least two columns")
    data = {name: list(columns[name]) for name in names}
    length = len(data[names[0]])
    for name in names:
        if len(data[name]) != length:
            raise StatsError(
                f"column {name!r} has length {len(data[name])}, expected {length}"
            )

    def usable(v) -> bool:
        return v is not None and math.isfinite(v)

    grid: list[list[CorrelationCell]] = [[None] * len(names) for _ in names]  # type: ignore[list-item]
    for a in range(len(names)):
        xs_all = data[names[a]]
        grid[a][a] = CorrelationCell(r=1.0, n=sum(1 for v in xs_all if usable(v)))
        for b in range(a + 1, len(names)):
            ys_all = data[names[b]]
            pairs = [
                (xv, yv) for xv, yv in zip(xs_all, ys_all) if usable(xv) and usable(yv)
            ]
            if len(pairs) < 3:
                cell = CorrelationCell(
                    r=None, n=len(pairs), note=f"only {len(pairs)} usable pairs"
                )
            else:
                try:
                    cell = corr([p[0] for p in pairs], [p[1] for p in pairs])
                except StatsError as exc:
                    cell = CorrelationCell(r=None, n=len(pairs), note=str(exc))
            grid[a][b] = cell
            grid[b][a] = cell
    return names, grid
