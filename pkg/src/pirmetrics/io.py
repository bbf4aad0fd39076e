"""File ingestion and serialisation: impact tables, events, scalar metrics.

csv is the canonical interchange format; json mirrors it with one object
per row. All text is UTF-8, decimal points are '.', and there are no
thousands separators.

File schemas
    impact_table.csv  journal,year,indicator,value
    events.csv        author_id,group,kind,journal,year,count
    scalars.csv       author_id,papers,cites,h

The profiles.csv schema lives in the report module next to its row type.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
import time
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from .model import (
    AuthorCorpus,
    Event,
    EventKind,
    ImpactTable,
    ModelError,
    YearWindow,
)


class IngestError(ValueError):
    """A source file or stream violates its schema."""


class UnknownAuthorError(LookupError):
    """The bibliographic source has no records for the requested author."""


class TransientFetchError(ConnectionError):
    """A retryable transport failure while fetching author records."""


# ---------------------------------------------------------------------------
# row plumbing

def _open_text(source) -> _stdio.TextIOBase:
    """Accept a path, bytes, or a text/binary stream; return a text stream."""
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, bytes):
        return _stdio.StringIO(source.decode("utf-8"))
    if isinstance(source, _stdio.TextIOBase):
        return source
    if hasattr(source, "read"):  # binary stream
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return _stdio.StringIO(data)
    raise IngestError(f"cannot read from {type(source).__name__}")


def _rows(source, fmt: str, required: list[str], label: str):
    """Yield (line_number, row_dict) from csv or json input."""
    if fmt == "csv":
        stream = _open_text(source)
        reader = csv.DictReader(stream)
        if reader.fieldnames is None:
            raise IngestError(f"{label}: empty input, header row required")
        missing = [c for c in required if c not in reader.fieldnames]
        if missing:
            raise IngestError(f"{label}: missing columns {missing} in header")
        for lineno, row in enumerate(reader, start=2):
            if any(row.get(c) is None for c in required):
                raise IngestError(f"{label}: line {lineno}: short row")
            yield lineno, row
    elif fmt == "json":
        stream = _open_text(source)
        try:
            payload = json.load(stream)
        except json.JSONDecodeError as exc:
            raise IngestError(f"{label}: invalid json: {exc}") from exc
        if not isinstance(payload, list):
            raise IngestError(f"{label}: expected a json array of row objects")
        for i, row in enumerate(payload, start=1):
            if not isinstance(row, dict):
                raise IngestError(f"{label}: row {i}: expected an object")
            missing = [c for c in required if c not in row]
            if missing:
                raise IngestError(f"{label}: row {i}: missing fields {missing}")
            yield i, row
    else:
        raise IngestError(f"unknown format {fmt!r}; expected csv or json")


def _parse_int(raw, what: str, where: str) -> int:
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise IngestError(f"{where}: {what} must be an integer, got {raw!r}") from None


def _parse_float(raw, what: str, where: str) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise IngestError(f"{where}: {what} must be a number, got {raw!r}") from None


# ---------------------------------------------------------------------------
# impact tables

def load_impact_table(source, fmt: str = "csv") -> ImpactTable:
    """Load (journal, year, indicator) -> value entries.

    Duplicate keys are rejected with both offending row locations named;
    negative values and malformed rows are rejected with their location.
    """
    entries = []
    first_seen: dict[tuple, object] = {}
    for lineno, row in _rows(source, fmt, ["journal", "year", "indicator", "value"], "impact table"):
        where = f"impact table: line {lineno}" if fmt == "csv" else f"impact table: row {lineno}"
        journal = (row["journal"] or "").strip()
        indicator = (row["indicator"] or "").strip()
        if not journal:
            raise IngestError(f"{where}: empty journal id")
        if not indicator:
            raise IngestError(f"{where}: empty indicator name")
        year = _parse_int(row["year"], "year", where)
        value = _parse_float(row["value"], "value", where)
        if value < 0:
            raise IngestError(f"{where}: negative impact value {value}")
        key = (journal, year, indicator)
        if key in first_seen:
            raise IngestError(
                f"impact table: duplicate key {key} at line {lineno} "
                f"(first seen at line {first_seen[key]})"
            )
        first_seen[key] = lineno
        entries.append((journal, year, indicator, value))
    return ImpactTable(entries)


def save_impact_table(table: ImpactTable, destination, fmt: str = "csv") -> None:
    rows = [
        {"journal": j, "year": y, "indicator": ind, "value": v}
        for j, y, ind, v in sorted(table.entries())
    ]
    _write_rows(rows, ["journal", "year", "indicator", "value"], destination, fmt)


# ---------------------------------------------------------------------------
# author events

def load_events(
    source,
    fmt: str = "csv",
    group_overrides: Mapping[str, str] | None = None,
) -> list[AuthorCorpus]:
    """Group event rows into one corpus per author, in first-seen order.

    Repeated (author, kind, journal, year) rows are kept as separate
    events; counts merge when used. The group column may be empty, but
    two different non-empty groups for one author are an error.
    """
    events: dict[str, list[Event]] = {}
    groups: dict[str, str | None] = {}
    for lineno, row in _rows(
        source, fmt, ["author_id", "group", "kind", "journal", "year", "count"], "events"
    ):
        where = f"events: line {lineno}" if fmt == "csv" else f"events: row {lineno}"
        author_id = (row["author_id"] or "").strip()
        if not author_id:
            raise IngestError(f"{where}: empty author_id")
        group = (row["group"] or "").strip() or None
        try:
            kind = EventKind.parse(str(row["kind"]))
        except ModelError as exc:
            raise IngestError(f"{where}: {exc}") from exc
        year = _parse_int(row["year"], "year", where)
        count = _parse_int(row["count"], "count", where)
        try:
            event = Event(kind, (row["journal"] or "").strip(), year, count)
        except ModelError as exc:
            raise IngestError(f"{where}: {exc}") from exc

        if author_id not in events:
            events[author_id] = []
            groups[author_id] = group
        elif group is not None:
            if groups[author_id] is None:
                groups[author_id] = group
            elif groups[author_id] != group:
                raise IngestError(
                    f"{where}: author {author_id!r} has conflicting groups "
                    f"{groups[author_id]!r} and {group!r}"
                )
        events[author_id].append(event)

    if group_overrides:
        for author_id, group in group_overrides.items():
            if author_id in groups:
                groups[author_id] = group

    return [
        AuthorCorpus(author_id, tuple(evs), group=groups[author_id])
        for author_id, evs in events.items()
    ]


def save_events(corpora: Iterable[AuthorCorpus], destination, fmt: str = "csv") -> None:
    rows = []
    for corpus in corpora:
        for e in corpus.events:
            rows.append(
                {
                    "author_id": corpus.author_id,
                    "group": corpus.group or "",
                    "kind": e.kind.value,
                    "journal": e.journal,
                    "year": e.year,
                    "count": e.count,
                }
            )
    _write_rows(rows, ["author_id", "group", "kind", "journal", "year", "count"], destination, fmt)


# ---------------------------------------------------------------------------
# scalar metrics

@dataclass(frozen=True)
class ScalarMetrics:
    """Supplied whole-career counters for one author.

    h can never exceed the paper count, and cannot exceed the citation
    count once there is at least one paper. No relation between h**2 and
    cites is assumed.
    """

    author_id: str
    papers: int
    cites: int
    h: int

    def __post_init__(self):
        if min(self.papers, self.cites, self.h) < 0:
            raise IngestError(f"{self.author_id!r}: negative scalar metric")
        if self.h > self.papers:
            raise IngestError(
                f"{self.author_id!r}: h ({self.h}) exceeds paper count ({self.papers})"
            )
        if self.papers > 0 and self.h > self.cites:
            raise IngestError(
                f"{self.author_id!r}: h ({self.h}) exceeds citation count ({self.cites})"
            )


def load_scalars(source, fmt: str = "csv") -> dict[str, ScalarMetrics]:
    """Load per-author paper/citation/h counters, keyed by author id."""
    out: dict[str, ScalarMetrics] = {}
    for lineno, row in _rows(source, fmt, ["author_id", "papers", "cites", "h"], "scalars"):
        where = f"scalars: line {lineno}" if fmt == "csv" else f"scalars: row {lineno}"
        author_id = (row["author_id"] or "").strip()
        if not author_id:
            raise IngestError(f"{where}: empty author_id")
        if author_id in out:
            raise IngestError(f"{where}: duplicate author_id {author_id!r}")
        metrics = ScalarMetrics(
            author_id,
            _parse_int(row["papers"], "papers", where),
            _parse_int(row["cites"], "cites", where),
            _parse_int(row["h"], "h", where),
        )
        out[author_id] = metrics
    return out


def save_scalars(scalars: Mapping[str, ScalarMetrics], destination, fmt: str = "csv") -> None:
    rows = [
        {"author_id": m.author_id, "papers": m.papers, "cites": m.cites, "h": m.h}
        for m in scalars.values()
    ]
    _write_rows(rows, ["author_id", "papers", "cites", "h"], destination, fmt)


# ---------------------------------------------------------------------------
# dataset assembly

@dataclass(frozen=True)
class Dataset:
    """Impact table, corpora and scalar metrics bound to one window."""

    impacts: ImpactTable
    corpora: tuple[AuthorCorpus, ...]
    scalars: Mapping[str, ScalarMetrics]
    window: YearWindow

    def __post_init__(self):
        object.__setattr__(self, "corpora", tuple(self.corpora))
        object.__setattr__(self, "scalars", dict(self.scalars))


def assemble_dataset(
    impacts: ImpactTable,
    corpora: Iterable[AuthorCorpus],
    scalars: Mapping[str, ScalarMetrics],
    window: YearWindow,
    on_mismatch: str = "warn",
    warn=None,
) -> Dataset:
    """Bind the three inputs together, validating cross references.

    Every scalars key must name a known corpus. When an author has
    publication events, their in-window total is checked against the
    scalar paper count; on_mismatch chooses 'warn' (default, reported via
    the warn callback) or 'error'.
    """
    if on_mismatch not in ("warn", "error"):
        raise IngestError(f"on_mismatch must be 'warn' or 'error', got {on_mismatch!r}")
    corpora = list(corpora)
    known = {c.author_id for c in corpora}
    for author_id in scalars:
        if author_id not in known:
            raise IngestError(f"scalars reference unknown author {author_id!r}")
    for corpus in corpora:
        metrics = scalars.get(corpus.author_id)
        if metrics is None:
            continue
        totals = corpus.merged_counts(EventKind.PUBLICATION)
        if not totals:
            continue
        in_window = sum(c for (j, y), c in totals.items() if y in window)
        if in_window != metrics.papers:
            message = (
                f"author {corpus.author_id!r}: in-window publication count "
                f"{in_window} != supplied paper count {metrics.papers}"
            )
            if on_mismatch == "error":
                raise IngestError(message)
            if warn is not None:
                warn(message)
    return Dataset(impacts, tuple(corpora), dict(scalars), window)


# ---------------------------------------------------------------------------
# bibliographic source clients

class BibliographicClient(Protocol):
    """Source of recorded author events; implementations must be safe for
    concurrent fetches of distinct authors."""

    def records(self, author_id: str) -> list[Event]:
        """All recorded events for the author, any order."""
        ...

    def group(self, author_id: str) -> str | None:
        ...


@dataclass
class RetryPolicy:
    max_retries: int = 3
    backoff_seconds: float = 0.1
    sleep: object = time.sleep

    def delay(self, attempt: int) -> float:
        return self.backoff_seconds * (2 ** attempt)


class FixtureClient:
    """Client replaying recorded responses from loaded corpora.

    Deterministic: the same author id always yields the same records.
    fail_times simulates transient transport failures for retry tests.
    """

    def __init__(self, corpora: Iterable[AuthorCorpus], fail_times: int = 0):
        self._corpora = {c.author_id: c for c in corpora}
        self._failures_left = fail_times

    def records(self, author_id: str) -> list[Event]:
        if self._failures_left > 0:
            self._failures_left -= 1
            raise TransientFetchError("simulated transport failure")
        if author_id not in self._corpora:
            raise UnknownAuthorError(f"no records for author {author_id!r}")
        return list(self._corpora[author_id].events)

    def group(self, author_id: str) -> str | None:
        if author_id not in self._corpora:
            raise UnknownAuthorError(f"no records for author {author_id!r}")
        return self._corpora[author_id].group


def fetch_author_records(
    client: BibliographicClient,
    author_id: str,
    window: YearWindow,
    retry: RetryPolicy | None = None,
) -> AuthorCorpus:
    """Fetch one author's corpus, retrying transient transport failures.

    The window is carried on to the engine untouched; records outside it
    are kept so window policies stay a computation-time choice.
    """
    retry = retry or RetryPolicy()
    attempt = 0
    while True:
        try:
            events = client.records(author_id)
            group = client.group(author_id)
            break
        except TransientFetchError:
            if attempt >= retry.max_retries:
                raise
            retry.sleep(retry.delay(attempt))
            attempt += 1
    return AuthorCorpus(author_id, tuple(events), group=group)


# ---------------------------------------------------------------------------
# shared writer

def _write_rows(rows: list[dict], columns: list[str], destination, fmt: str) -> None:
    if fmt == "csv":
        if isinstance(destination, (str, Path)):
            with open(destination, "w", encoding="utf-8", newline="") as f:
                _write_csv(rows, columns, f)
        else:
            _write_csv(rows, columns, destination)
    elif fmt == "json":
        text = json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
        if isinstance(destination, (str, Path)):
            Path(destination).write_text(text, encoding="utf-8")
        else:
            destination.write(text)
    else:
        raise IngestError(f"unknown format {fmt!r}; expected csv or json")


def _write_csv(rows: list[dict], columns: list[str], stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
