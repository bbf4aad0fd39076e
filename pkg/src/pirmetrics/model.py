"""Core domain model: windows, events, author corpora, impact tables, profiles.

Everything here is an immutable value type with no I/O and no statistics.
Instances are safe to share across threads.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

# A journal identifier is an opaque string compared by exact equality.
# Title normalisation and aliasing belong to data preparation, not here.
JournalRef = str

# An indicator family name ("SJR", "SNIP", or any user-defined label).
# Names are case sensitive and unique within one impact table.
IndicatorName = str

SJR: IndicatorName = "SJR"
SNIP: IndicatorName = "SNIP"


class ModelError(ValueError):
    """Invalid construction of a domain value."""


@dataclass(frozen=True, order=True)
class YearWindow:
    """Inclusive range of calendar years under evaluation.

    The canonical target window is five years long, e.g. 2009..2013.
    """

    start_year: int
    end_year: int

    def __post_init__(self):
        if self.start_year > self.end_year:
            raise ModelError(
                f"window start {self.start_year} is after end {self.end_year}"
            )

    @property
    def length(self) -> int:
        return self.end_year - self.start_year + 1

    def contains(self, year: int) -> bool:
        """True iff start_year <= year <= end_year."""
        return self.start_year <= year <= self.end_year

    def __contains__(self, year: int) -> bool:
        return self.contains(year)

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.start_year, self.end_year + 1))

    def __str__(self) -> str:
        return f"{self.start_year}:{self.end_year}"

    @classmethod
    def parse(cls, text: str) -> "YearWindow":
        """Parse 'START:END' (also accepts 'START-END')."""
        sep = ":" if ":" in text else "-"
        try:
            start, end = text.split(sep)
            return cls(int(start), int(end))
        except (ValueError, TypeError) as exc:
            if isinstance(exc, ModelError):
                raise
            raise ModelError(f"cannot parse year window from {text!r}") from exc


def window_contains(window: YearWindow, year: int) -> bool:
    """Membership test used by every windowed sum."""
    return window.contains(year)


class EventKind(enum.Enum):
    """The three bibliographic event streams attached to an author.

    PUBLICATION counts the author's papers per journal and year,
    CITATION counts citations received from journal-year volumes, and
    REFERENCE counts cited journal-year volumes in the author's papers.
    """

    PUBLICATION = "publication"
    CITATION = "citation"
    REFERENCE = "reference"

    @classmethod
    def parse(cls, text: str) -> "EventKind":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ModelError(
                f"unknown event kind {text!r}; expected one of "
                f"{[k.value for k in cls]}"
            ) from None


@dataclass(frozen=True)
class Event:
    """A counted bibliographic event in one journal and year."""

    kind: EventKind
    journal: JournalRef
    year: int
    count: int

    def __post_init__(self):
        if not self.journal:
            raise ModelError("journal id must be non-empty")
        if self.count < 1:
            raise ModelError(
                f"event count must be >= 1, got {self.count} "
                f"({self.kind.value}, {self.journal!r}, {self.year})"
            )


@dataclass(frozen=True)
class AuthorCorpus:
    """All recorded events for one author, optionally tagged with a group.

    Multiple events with the same (kind, journal, year) are allowed and
    are summed on use, so event order never matters.
    """

    author_id: str
    events: tuple[Event, ...]
    group: str | None = None

    def __post_init__(self):
        if not self.author_id:
            raise ModelError("author_id must be non-empty")
        if self.group is not None and not self.group:
            raise ModelError("group, when present, must be non-empty")
        object.__setattr__(self, "events", tuple(self.events))

    def events_of_kind(self, kind: EventKind) -> tuple[Event, ...]:
        return tuple(e for e in self.events if e.kind == kind)

    def merged_counts(self, kind: EventKind) -> dict[tuple[JournalRef, int], int]:
        """Total count per (journal, year) for one kind; order independent."""
        totals: dict[tuple[JournalRef, int], int] = {}
        for e in self.events:
            if e.kind == kind:
                key = (e.journal, e.year)
                totals[key] = totals.get(key, 0) + e.count
        return totals


class ImpactTable:
    """Lookup of journal impact values keyed by (journal, year, indicator).

    At most one value per key; every value is non-negative. The table is
    immutable once built.
    """

    def __init__(self, entries: Iterable[tuple[JournalRef, int, IndicatorName, float]] = ()):
        table: dict[tuple[JournalRef, int, IndicatorName], float] = {}
        for journal, year, indicator, value in entries:
            self._validate(journal, indicator, value)
            key = (journal, int(year), indicator)
            if key in table:
                raise ModelError(f"duplicate impact entry for {key}")
            table[key] = float(value)
        self._table = table

    @staticmethod
    def _validate(journal, indicator, value):
        if not journal:
            raise ModelError("journal id must be non-empty")
        if not indicator:
            raise ModelError("indicator name must be non-empty")
        if float(value) < 0:
            raise ModelError(
                f"impact value must be non-negative, got {value} for "
                f"({journal!r}, {indicator!r})"
            )

    def get(self, journal: JournalRef, year: int, indicator: IndicatorName) -> float | None:
        return self._table.get((journal, year, indicator))

    def __contains__(self, key: tuple[JournalRef, int, IndicatorName]) -> bool:
        return key in self._table

    def __len__(self) -> int:
        return len(self._table)

    def entries(self) -> Iterator[tuple[JournalRef, int, IndicatorName, float]]:
        for (journal, year, indicator), value in self._table.items():
            yield journal, year, indicator, value

    def indicators(self) -> set[IndicatorName]:
        return {indicator for (_, _, indicator) in self._table}

    def years(self, journal: JournalRef, indicator: IndicatorName) -> list[int]:
        """All years with a value for this journal and indicator, ascending."""
        return sorted(
            y for (j, y, ind) in self._table if j == journal and ind == indicator
        )

    def scaled(self, factor: float) -> "ImpactTable":
        """New table with every value multiplied by a positive factor."""
        if factor <= 0:
            raise ModelError(f"scale factor must be positive, got {factor}")
        return ImpactTable(
            (j, y, ind, v * factor) for j, y, ind, v in self.entries()
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, ImpactTable) and self._table == other._table

    def __repr__(self) -> str:
        return f"ImpactTable({len(self._table)} entries)"


@dataclass(frozen=True)
class CoverageDiagnostics:
    """How much of one event stream was usable in a weighted mean.

    total_count counts events eligible under the window policy,
    matched_count those with an impact value found, dropped_count those
    skipped under the missing-value policy. matched + dropped == total.
    """

    total_count: int = 0
    matched_count: int = 0
    dropped_count: int = 0

    def __post_init__(self):
        if min(self.total_count, self.matched_count, self.dropped_count) < 0:
            raise ModelError("coverage counts must be non-negative")
        if self.matched_count + self.dropped_count != self.total_count:
            raise ModelError(
                f"coverage counts inconsistent: {self.matched_count} matched "
                f"+ {self.dropped_count} dropped != {self.total_count} total"
            )


def derive_ratios(
    p: float | None, i: float | None, r: float | None
) -> tuple[float | None, float | None, float | None, float | None]:
    """The four normalisation ratios (P/I, P/R, I/R, (P+I)/2R) of a profile.

    A ratio is None exactly when its numerator is undefined or its
    denominator is undefined or zero. Recomputing from stored dimensions
    reproduces stored ratios bit for bit.
    """
    p_over_i = p / i if p is not None and i is not None and i > 0 else None
    p_over_r = p / r if p is not None and r is not None and r > 0 else None
    i_over_r = i / r if i is not None and r is not None and r > 0 else None
    pi_over_2r = (
        (p + i) / (2.0 * r)
        if p is not None and i is not None and r is not None and r > 0
        else None
    )
    return p_over_i, p_over_r, i_over_r, pi_over_2r


@dataclass(frozen=True)
class IndicatorProfile:
    """Per-author dimensions and ratios for one indicator family.

    p, i and r are weighted mean impacts of the publication, citation and
    reference streams; None marks a dimension with no matched events.
    """

    author_id: str
    indicator: IndicatorName
    window: YearWindow
    p: float | None
    i: float | None
    r: float | None
    p_over_i: float | None
    p_over_r: float | None
    i_over_r: float | None
    pi_over_2r: float | None
    coverage: Mapping[EventKind, CoverageDiagnostics] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("p", "i", "r"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ModelError(f"dimension {name} must be non-negative, got {v}")
        object.__setattr__(self, "coverage", dict(self.coverage))
