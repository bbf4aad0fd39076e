"""Assembly of per-author rows, grouped summaries, correlation matrices
and figure-data exports, plus their csv/json/text renderings.

Variable naming used throughout reports and the command line:
    papers, cites, h                       supplied scalar counters
    p_<fam>, i_<fam>, r_<fam>              dimensions for one family
    pi_<fam>, pr_<fam>, ir_<fam>, pi2r_<fam>   the four ratios

Family suffixes are the family name lowercased, so the canonical
profiles.csv header is

    author_id,group,papers,cites,h,
    p_sjr,i_sjr,r_sjr,pi_sjr,pr_sjr,ir_sjr,pi2r_sjr,
    p_snip,...,pi2r_snip

Undefined values render as the sentinel NA, never as 0 or blank.
Dimensions and ratios render at 3 decimals, correlations at 2, both
rounded half to even. Every report is a pure function of its inputs, so
repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

from . import stats
from .io import IngestError, ScalarMetrics
from .model import IndicatorName, IndicatorProfile

NA = "NA"

FAMILY_FIELDS = ("p", "i", "r", "pi", "pr", "ir", "pi2r")
SCALAR_FIELDS = ("papers", "cites", "h")


class ReportError(ValueError):
    """Invalid input to a report assembly."""


@dataclass(frozen=True)
class DimensionCells:
    """The seven per-family cells of an author row."""

    p: float | None
    i: float | None
    r: float | None
    pi: float | None
    pr: float | None
    ir: float | None
    pi2r: float | None

    @classmethod
    def from_profile(cls, profile: IndicatorProfile) -> "DimensionCells":
        return cls(
            p=profile.p,
            i=profile.i,
            r=profile.r,
            pi=profile.p_over_i,
            pr=profile.p_over_r,
            ir=profile.i_over_r,
            pi2r=profile.pi_over_2r,
        )


@dataclass(frozen=True)
class AuthorTableRow:
    """One author's scalar counters plus per-family dimensions and ratios."""

    author_id: str
    group: str | None
    papers: int | None
    cites: int | None
    h: int | None
    families: Mapping[IndicatorName, DimensionCells] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "families", dict(self.families))

    def value(self, variable: str) -> float | None:
        """Look a report variable up by name (e.g. 'h' or 'pi_sjr')."""
        if variable in SCALAR_FIELDS:
            v = getattr(self, variable)
            return None if v is None else float(v)
        fieldname, _, suffix = variable.partition("_")
        if fieldname in FAMILY_FIELDS and suffix:
            for family, cells in self.families.items():
                if family.lower() == suffix:
                    return getattr(cells, fieldname)
        raise ReportError(
            f"unknown variable {variable!r}; available: {', '.join(variables_for(self))}"
        )


def variables_for(row: AuthorTableRow) -> list[str]:
    """All variable names defined by a row, scalar counters first."""
    names = list(SCALAR_FIELDS)
    for family in row.families:
        names.extend(f"{f}_{family.lower()}" for f in FAMILY_FIELDS)
    return names


def author_table(
    profiles_by_family: Mapping[IndicatorName, Sequence[IndicatorProfile]],
    scalars: Mapping[str, ScalarMetrics],
    groups: Mapping[str, str | None] | None = None,
) -> list[AuthorTableRow]:
    """Join per-family profiles with scalar counters into table rows.

    Every author must appear in every requested family. groups maps
    author ids to their group labels (profiles do not carry them). Rows
    are ordered by (group, h descending, cites descending, papers
    descending, author id), the conventional presentation order.
    """
    if not profiles_by_family:
        raise ReportError("at least one profile family required")
    by_author: dict[str, dict[IndicatorName, IndicatorProfile]] = {}
    for family, profiles in profiles_by_family.items():
        for profile in profiles:
            by_author.setdefault(profile.author_id, {})[family] = profile
    rows = []
    for author_id, per_family in by_author.items():
        for family in profiles_by_family:
            if family not in per_family:
                raise ReportError(f"author {author_id!r} missing a {family} profile")
        metrics = scalars.get(author_id)
        rows.append(
            AuthorTableRow(
                author_id=author_id,
                group=groups.get(author_id) if groups else None,
                papers=metrics.papers if metrics else None,
                cites=metrics.cites if metrics else None,
                h=metrics.h if metrics else None,
                families={
                    family: DimensionCells.from_profile(per_family[family])
                    for family in profiles_by_family
                },
            )
        )
    return sort_rows(rows)


def sort_rows(rows: Iterable[AuthorTableRow]) -> list[AuthorTableRow]:
    def key(row: AuthorTableRow):
        return (
            row.group or "",
            -(row.h if row.h is not None else -1),
            -(row.cites if row.cites is not None else -1),
            -(row.papers if row.papers is not None else -1),
            row.author_id,
        )

    return sorted(rows, key=key)


# ---------------------------------------------------------------------------
# profiles file schema

def profile_columns(families: Sequence[IndicatorName]) -> list[str]:
    cols = ["author_id", "group", "papers", "cites", "h"]
    for family in families:
        cols.extend(f"{f}_{family.lower()}" for f in FAMILY_FIELDS)
    return cols


def save_profiles(rows: Sequence[AuthorTableRow], destination, fmt: str = "csv") -> None:
    """Write author rows in the canonical profiles schema."""
    families: list[IndicatorName] = []
    for row in rows:
        for family in row.families:
            if family not in families:
                families.append(family)
    columns = profile_columns(families)
    out = []
    for row in rows:
        rec: dict[str, object] = {
            "author_id": row.author_id,
            "group": row.group or "",
            "papers": row.papers if row.papers is not None else NA,
            "cites": row.cites if row.cites is not None else NA,
            "h": row.h if row.h is not None else NA,
        }
        for family in families:
            cells = row.families.get(family)
            for f in FAMILY_FIELDS:
                v = getattr(cells, f) if cells else None
                rec[f"{f}_{family.lower()}"] = fmt3(v)
        out.append(rec)
    _write_table(columns, out, destination, fmt)


def load_profiles(source, fmt: str = "csv") -> list[AuthorTableRow]:
    """Read author rows from the profiles schema.

    Family names are recovered from the column suffixes; lowercase
    suffixes matching the canonical families come back as SJR / SNIP,
    other suffixes are kept verbatim.
    """
    if fmt == "csv":
        stream = _open_text(source)
        reader = csv.DictReader(stream)
        if reader.fieldnames is None:
            raise IngestError("profiles: empty input, header row required")
        header = list(reader.fieldnames)
        records = list(reader)
    elif fmt == "json":
        stream = _open_text(source)
        payload = json.load(stream)
        if not isinstance(payload, list):
            raise IngestError("profiles: expected a json array of row objects")
        header = list(payload[0]) if payload else []
        records = payload
    else:
        raise IngestError(f"unknown format {fmt!r}; expected csv or json")

    for col in ("author_id", "group"):
        if records and col not in header:
            raise IngestError(f"profiles: missing column {col!r}")

    suffixes: list[str] = []
    for col in header:
        fieldname, _, suffix = col.partition("_")
        if fieldname == "p" and suffix and suffix not in suffixes:
            suffixes.append(suffix)
    families = [_canonical_family(s) for s in suffixes]

    rows = []
    seen: set[str] = set()
    for lineno, rec in enumerate(records, start=2):
        author_id = (rec.get("author_id") or "").strip()
        if not author_id:
            raise IngestError(f"profiles: line {lineno}: empty author_id")
        if author_id in seen:
            raise IngestError(f"profiles: line {lineno}: duplicate author {author_id!r}")
        seen.add(author_id)
        group = (rec.get("group") or "").strip() or None
        rows.append(
            AuthorTableRow(
                author_id=author_id,
                group=group,
                papers=_opt_int(rec.get("papers"), lineno, "papers"),
                cites=_opt_int(rec.get("cites"), lineno, "cites"),
                h=_opt_int(rec.get("h"), lineno, "h"),
                families={
                    family: DimensionCells(
                        **{
                            f: _opt_float(rec.get(f"{f}_{suffix}"), lineno, f"{f}_{suffix}")
                            for f in FAMILY_FIELDS
                        }
                    )
                    for family, suffix in zip(families, suffixes)
                },
            )
        )
    return rows


def _canonical_family(suffix: str) -> IndicatorName:
    from .model import SJR, SNIP

    if suffix == SJR.lower():
        return SJR
    if suffix == SNIP.lower():
        return SNIP
    return suffix


def _opt_int(raw, lineno, what) -> int | None:
    if raw is None or raw == "" or raw == NA:
        return None
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise IngestError(f"profiles: line {lineno}: {what} must be an integer, got {raw!r}") from None


def _opt_float(raw, lineno, what) -> float | None:
    if raw is None or raw == "" or raw == NA:
        return None
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise IngestError(f"profiles: line {lineno}: {what} must be a number, got {raw!r}") from None


# ---------------------------------------------------------------------------
# grouped and aggregate summaries

@dataclass(frozen=True)
class GroupSummaryBlock:
    """Per-variable summaries for one group, with exclusion counts."""

    group: str
    summaries: Mapping[str, stats.DescriptiveSummary]
    excluded: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "summaries", dict(self.summaries))
        object.__setattr__(self, "excluded", dict(self.excluded))


@dataclass(frozen=True)
class CrossFamilyDelta:
    """Relative median/mean offset of one ratio between two families.

    Deltas are (first - second) / second, e.g. how far the SJR-based
    ratio sits above its SNIP-based counterpart.
    """

    variable: str
    family_a: IndicatorName
    family_b: IndicatorName
    median_delta: float
    mean_delta: float


@dataclass(frozen=True)
class AggregateReport:
    """Pooled summaries, per-variable decompositions, cross-family deltas."""

    pooled: Mapping[str, stats.DescriptiveSummary]
    decompositions: Mapping[str, stats.VarianceDecomposition]
    deltas: tuple[CrossFamilyDelta, ...]

    def __post_init__(self):
        object.__setattr__(self, "pooled", dict(self.pooled))
        object.__setattr__(self, "decompositions", dict(self.decompositions))
        object.__setattr__(self, "deltas", tuple(self.deltas))


def _column(rows: Sequence[AuthorTableRow], variable: str) -> tuple[list[float], int]:
    """Defined values of one variable, plus how many rows were excluded."""
    values = []
    excluded = 0
    for row in rows:
        v = row.value(variable)
        if v is None or not math.isfinite(v):
            excluded += 1
        else:
            values.append(v)
    return values, excluded


def default_variables(rows: Sequence[AuthorTableRow]) -> list[str]:
    if not rows:
        raise ReportError("no rows")
    return variables_for(rows[0])


def group_summary(
    rows: Sequence[AuthorTableRow],
    variables: Sequence[str] | None = None,
) -> list[GroupSummaryBlock]:
    """One block of per-variable summaries per group.

    Rows must all carry a group. Undefined values are excluded per
    variable and the exclusion counts reported alongside.
    """
    if not rows:
        raise ReportError("no rows")
    variables = list(variables) if variables else default_variables(rows)
    groups: dict[str, list[AuthorTableRow]] = {}
    for row in rows:
        if row.group is None:
            raise ReportError(f"author {row.author_id!r} has no group")
        groups.setdefault(row.group, []).append(row)

    blocks = []
    for group in sorted(groups):
        summaries: dict[str, stats.DescriptiveSummary] = {}
        excluded: dict[str, int] = {}
        for variable in variables:
            values, dropped = _column(groups[group], variable)
            if not values:
                raise ReportError(
                    f"group {group!r}: no defined values for {variable!r}"
                )
            summaries[variable] = stats.describe(values)
            excluded[variable] = dropped
        blocks.append(GroupSummaryBlock(group, summaries, excluded))
    return blocks


def aggregate_report(
    rows: Sequence[AuthorTableRow],
    variables: Sequence[str] | None = None,
) -> AggregateReport:
    """Pooled summaries plus within/between decomposition per variable.

    Needs at least two groups. For every ratio variable present in two or
    more families, relative median/mean deltas between family pairs are
    included (first family listed against each later one).
    """
    if not rows:
        raise ReportError("no rows")
    variables = list(variables) if variables else default_variables(rows)
    group_names = sorted({row.group for row in rows if row.group is not None})
    if len(group_names) < 2:
        raise ReportError("aggregate report needs at least two groups")

    pooled: dict[str, stats.DescriptiveSummary] = {}
    decompositions: dict[str, stats.VarianceDecomposition] = {}
    for variable in variables:
        values, _ = _column(rows, variable)
        if not values:
            raise ReportError(f"no defined values for {variable!r}")
        pooled[variable] = stats.describe(values)
        grouped: dict[str, list[float]] = {}
        for group in group_names:
            vals, _ = _column([r for r in rows if r.group == group], variable)
            if vals:
                grouped[group] = vals
        if len(grouped) >= 2:
            decompositions[variable] = stats.variance_decomposition(
                stats.GroupedSample(grouped)
            )

    families = list(rows[0].families)
    deltas = []
    for ratio in ("pi", "pr", "ir", "pi2r"):
        for a_idx in range(len(families)):
            for b_idx in range(a_idx + 1, len(families)):
                fam_a, fam_b = families[a_idx], families[b_idx]
                var_a = f"{ratio}_{fam_a.lower()}"
                var_b = f"{ratio}_{fam_b.lower()}"
                if var_a in pooled and var_b in pooled:
                    ref_median = pooled[var_b].median
                    ref_mean = pooled[var_b].mean
                    if ref_median == 0 or ref_mean == 0:
                        continue
                    deltas.append(
                        CrossFamilyDelta(
                            variable=ratio,
                            family_a=fam_a,
                            family_b=fam_b,
                            median_delta=(pooled[var_a].median - ref_median) / ref_median,
                            mean_delta=(pooled[var_a].mean - ref_mean) / ref_mean,
                        )
                    )
    return AggregateReport(pooled, decompositions, tuple(deltas))


# ---------------------------------------------------------------------------
# correlation report

SIGNIFICANCE_MARKS = {90: "a", 95: "b", 99: "c"}

DEFAULT_CORRELATION_VARIABLES = ("papers", "cites", "h", "p_sjr", "i_sjr", "r_sjr", "pi_sjr")


@dataclass(frozen=True)
class GroupCorrelationMatrix:
    group: str
    method: str
    variables: tuple[str, ...]
    cells: tuple[tuple[stats.CorrelationCell, ...], ...]

    def cell(self, var_a: str, var_b: str) -> stats.CorrelationCell:
        a = self.variables.index(var_a)
        b = self.variables.index(var_b)
        return self.cells[a][b]


def correlation_report(
    rows: Sequence[AuthorTableRow],
    method: str = "pearson",
    variables: Sequence[str] | None = None,
) -> list[GroupCorrelationMatrix]:
    """Per-group correlation matrices over the report variables.

    Undefined values are excluded pairwise inside the matrix; cells that
    cannot be computed are flagged, not fatal.
    """
    if not rows:
        raise ReportError("no rows")
    variables = tuple(variables) if variables else DEFAULT_CORRELATION_VARIABLES
    groups: dict[str, list[AuthorTableRow]] = {}
    for row in rows:
        if row.group is None:
            raise ReportError(f"author {row.author_id!r} has no group")
        groups.setdefault(row.group, []).append(row)

    out = []
    for group in sorted(groups):
        columns = {}
        for variable in variables:
            columns[variable] = [row.value(variable) for row in groups[group]]
        names, grid = stats.correlation_matrix(columns, method=method)
        out.append(
            GroupCorrelationMatrix(
                group=group,
                method=method,
                variables=tuple(names),
                cells=tuple(tuple(r) for r in grid),
            )
        )
    return out


# ---------------------------------------------------------------------------
# figure data

def figure_data(
    rows: Sequence[AuthorTableRow],
    kind: str,
    variables: Sequence[str] | None = None,
    x: str | None = None,
    y: str | None = None,
    order_family: IndicatorName | None = None,
) -> tuple[list[str], list[list]]:
    """Tabular exports backing the three figure styles.

    boxplot: one row of quartile/whisker fields per (group, variable).
    scatter: (author_id, group, x, y) for the chosen variable pair.
    ordered_dimensions: authors sorted by the impact dimension of the
    chosen family, descending, with the family's P, I, R columns.
    """
    if not rows:
        raise ReportError("no rows")
    if kind == "boxplot":
        variables = list(variables) if variables else default_variables(rows)
        groups: dict[str, list[AuthorTableRow]] = {}
        for row in rows:
            groups.setdefault(row.group or "", []).append(row)
        header = ["group", "variable", "q1", "q2", "q3", "whisker_low", "whisker_high"]
        data = []
        for group in sorted(groups):
            for variable in variables:
                values, _ = _column(groups[group], variable)
                if not values:
                    continue
                box = stats.boxplot(values)
                data.append(
                    [group, variable, box.q1, box.q2, box.q3, box.whisker_low, box.whisker_high]
                )
        return header, data
    if kind == "scatter":
        if not x or not y:
            raise ReportError("scatter needs x and y variable names")
        header = ["author_id", "group", x, y]
        data = []
        for row in rows:
            vx, vy = row.value(x), row.value(y)
            data.append([row.author_id, row.group or "", vx, vy])
        return header, data
    if kind == "ordered_dimensions":
        family = order_family or next(iter(rows[0].families))
        suffix = family.lower()
        order_var = f"i_{suffix}"
        header = ["author_id", "group", f"p_{suffix}", order_var, f"r_{suffix}"]
        defined = [r for r in rows if r.value(order_var) is not None]
        ordered = sorted(defined, key=lambda r: (-r.value(order_var), r.author_id))
        data = [
            [r.author_id, r.group or "", r.value(f"p_{suffix}"), r.value(order_var), r.value(f"r_{suffix}")]
            for r in ordered
        ]
        return header, data
    raise ReportError(
        f"unknown figure kind {kind!r}; expected boxplot, scatter or ordered_dimensions"
    )


# ---------------------------------------------------------------------------
# rendering

def fmt3(v: float | None) -> str:
    """Dimensions and ratios: 3 decimals, round half to even."""
    return NA if v is None else f"{round(v, 3):.3f}"


def fmt2(v: float | None) -> str:
    """Correlations: 2 decimals, round half to even."""
    return NA if v is None else f"{round(v, 2):.2f}"


def render_cell(v) -> str:
    if v is None:
        return NA
    if isinstance(v, float):
        return fmt3(v)
    return str(v)


def render_table(
    header: list[str],
    data: list[list],
    fmt: str = "csv",
    formatters: Mapping[str, object] | None = None,
) -> str:
    """Render a generic header+rows table as csv, json or aligned text.

    formatters maps column names to display formatters for csv/text
    (e.g. fmt2 for correlation columns); json always carries raw values.
    """

    def show(col: str, v) -> str:
        if formatters and col in formatters and isinstance(v, float):
            return formatters[col](v)  # type: ignore[operator]
        return render_cell(v)

    if fmt == "csv":
        buf = _stdio.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in data:
            writer.writerow([show(c, v) for c, v in zip(header, row)])
        return buf.getvalue()
    if fmt == "json":
        payload = [
            {col: (None if v is None else v) for col, v in zip(header, row)}
            for row in data
        ]
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if fmt == "text":
        cells = [header] + [[show(c, v) for c, v in zip(header, row)] for row in data]
        widths = [max(len(r[c]) for r in cells) for c in range(len(header))]
        lines = []
        for i, row in enumerate(cells):
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
            if i == 0:
                lines.append("  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"
    raise ReportError(f"unknown format {fmt!r}; expected csv, json or text")


def author_table_export(rows: Sequence[AuthorTableRow]) -> tuple[list[str], list[list]]:
    families: list[IndicatorName] = []
    for row in rows:
        for family in row.families:
            if family not in families:
                families.append(family)
    header = profile_columns(families)
    data = []
    for row in rows:
        rec: list = [row.author_id, row.group or "", row.papers, row.cites, row.h]
        for family in families:
            cells = row.families.get(family)
            rec.extend(getattr(cells, f) if cells else None for f in FAMILY_FIELDS)
        data.append(rec)
    return header, data


def group_summary_export(blocks: Sequence[GroupSummaryBlock]) -> tuple[list[str], list[list]]:
    header = ["group", "variable", "n", "median", "mean", "std", "min", "max", "range", "excluded"]
    data = []
    for block in blocks:
        for variable, summary in block.summaries.items():
            data.append(
                [
                    block.group,
                    variable,
                    summary.n,
                    summary.median,
                    summary.mean,
                    summary.sample_std,
                    summary.min,
                    summary.max,
                    summary.value_range,
                    block.excluded.get(variable, 0),
                ]
            )
    return header, data


def aggregate_export(report: AggregateReport) -> tuple[list[str], list[list]]:
    header = [
        "variable", "n", "median", "mean", "std", "min", "max", "range",
        "within_ss", "between_ss", "total_ss", "pct_reduction",
    ]
    data = []
    for variable, summary in report.pooled.items():
        deco = report.decompositions.get(variable)
        data.append(
            [
                variable,
                summary.n,
                summary.median,
                summary.mean,
                summary.sample_std,
                summary.min,
                summary.max,
                summary.value_range,
                deco.within_ss if deco else None,
                deco.between_ss if deco else None,
                deco.total_ss if deco else None,
                deco.pct_reduction if deco else None,
            ]
        )
    return header, data


def deltas_export(report: AggregateReport) -> tuple[list[str], list[list]]:
    header = ["variable", "family_a", "family_b", "median_delta_pct", "mean_delta_pct"]
    data = [
        [d.variable, d.family_a, d.family_b, 100.0 * d.median_delta, 100.0 * d.mean_delta]
        for d in report.deltas
    ]
    return header, data


def correlation_export(
    matrices: Sequence[GroupCorrelationMatrix],
) -> tuple[list[str], list[list]]:
    """Upper-triangular cells with their significance marks."""
    header = ["group", "row", "column", "r", "n", "significance", "mark", "note"]
    data = []
    for matrix in matrices:
        names = matrix.variables
        for a in range(len(names)):
            for b in range(a + 1, len(names)):
                cell = matrix.cells[a][b]
                data.append(
                    [
                        matrix.group,
                        names[a],
                        names[b],
                        cell.r,
                        cell.n,
                        cell.significance,
                        SIGNIFICANCE_MARKS.get(cell.significance, ""),
                        cell.note or "",
                    ]
                )
    return header, data


CORRELATION_FORMATTERS = {"r": fmt2}


def render_correlation_text(matrices: Sequence[GroupCorrelationMatrix]) -> str:
    """Aligned per-group upper-triangular matrices with a/b/c marks."""
    lines = []
    for matrix in matrices:
        names = matrix.variables
        lines.append(f"{matrix.group} ({matrix.method})")
        width = max(len(n) for n in names) + 2
        lines.append(" " * width + "  ".join(n.rjust(9) for n in names[1:]))
        for a in range(len(names) - 1):
            row = [names[a].ljust(width)]
            for b in range(1, len(names)):
                if b <= a:
                    row.append(" " * 9)
                else:
                    cell = matrix.cells[a][b]
                    if cell.r is None:
                        row.append(NA.rjust(9))
                    else:
                        mark = SIGNIFICANCE_MARKS.get(cell.significance, "")
                        shown = fmt2(cell.r) + (f" ^{mark}" if mark else "")
                        row.append(shown.rjust(9))
            lines.append("  ".join(row).rstrip())
        lines.append("")
    lines.append("^a significant at the 90% level; ^b 95%; ^c 99%")
    return "\n".join(lines) + "\n"


def render_boxplot_svg(
    data: list[list],
    width: int = 640,
    row_height: int = 28,
) -> str:
    """Minimal SVG of boxplot summary rows (group, variable, q1..whiskers).

    Built purely from the five summary fields; one horizontal box per row.
    """
    if not data:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="0" height="0"></svg>'
    lo = min(row[5] for row in data)
    hi = max(row[6] for row in data)
    span = (hi - lo) or 1.0
    label_w = 220
    plot_w = width - label_w - 20

    def sx(v: float) -> float:
        return label_w + (v - lo) / span * plot_w

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{row_height * len(data) + 20}" font-family="monospace" font-size="11">'
    ]
    for idx, (group, variable, q1, q2, q3, wlo, whi) in enumerate(data):
        cy = 10 + idx * row_height + row_height / 2
        top = cy - row_height * 0.3
        bot = cy + row_height * 0.3
        parts.append(f'<text x="4" y="{cy + 4:.1f}">{group} {variable}</text>')
        parts.append(
            f'<line x1="{sx(wlo):.1f}" y1="{cy:.1f}" x2="{sx(q1):.1f}" y2="{cy:.1f}" stroke="black"/>'
        )
        parts.append(
            f'<line x1="{sx(q3):.1f}" y1="{cy:.1f}" x2="{sx(whi):.1f}" y2="{cy:.1f}" stroke="black"/>'
        )
        for wx in (wlo, whi):
            parts.append(
                f'<line x1="{sx(wx):.1f}" y1="{top:.1f}" x2="{sx(wx):.1f}" y2="{bot:.1f}" stroke="black"/>'
            )
        parts.append(
            f'<rect x="{sx(q1):.1f}" y="{top:.1f}" width="{max(sx(q3) - sx(q1), 0.5):.1f}" '
            f'height="{bot - top:.1f}" fill="none" stroke="black"/>'
        )
        parts.append(
            f'<line x1="{sx(q2):.1f}" y1="{top:.1f}" x2="{sx(q2):.1f}" y2="{bot:.1f}" stroke="black" stroke-width="2"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# shared io helpers

def _open_text(source):
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, bytes):
        return _stdio.StringIO(source.decode("utf-8"))
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return _stdio.StringIO(data)
    raise IngestError(f"cannot read from {type(source).__name__}")


def _write_table(columns: list[str], rows: list[dict], destination, fmt: str) -> None:
    if fmt == "csv":
        buf = _stdio.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
    else:
        raise ReportError(f"unknown format {fmt!r}; expected csv or json")
    if isinstance(destination, (str, Path)):
        Path(destination).write_text(text, encoding="utf-8")
    else:
        destination.write(text)
