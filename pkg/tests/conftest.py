import pytest

from pirmetrics.data import fixture_path
from pirmetrics.engine import compute_profiles
from pirmetrics.io import load_events, load_impact_table, load_scalars
from pirmetrics.model import YearWindow
from pirmetrics.report import load_profiles

WINDOW = YearWindow(2009, 2013)


@pytest.fixture(scope="session")
def fixture_rows():
    """The bundled 120-author table."""
    return load_profiles(fixture_path("profiles.csv"))


@pytest.fixture(scope="session")
def fixture_scalars():
    return load_scalars(fixture_path("scalars.csv"))


@pytest.fixture(scope="session")
def bocci_corpus():
    (corpus,) = load_events(fixture_path("author_events.csv"))
    return corpus


@pytest.fixture(scope="session")
def bocci_impacts():
    return load_impact_table(fixture_path("impact_table.csv"))


@pytest.fixture(scope="session")
def bocci_profiles(bocci_corpus, bocci_impacts):
    """Profiles computed from the raw event fixture, keyed by family."""
    return {
        family: compute_profiles([bocci_corpus], bocci_impacts, family, WINDOW)[0]
        for family in ("SJR", "SNIP")
    }


def column(rows, variable, group=None):
    """Defined values of one variable across rows, optionally one group."""
    out = []
    for row in rows:
        if group is not None and row.group != group:
            continue
        v = row.value(variable)
        if v is not None:
            out.append(v)
    return out
