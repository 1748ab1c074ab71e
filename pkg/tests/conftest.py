import pathlib

import pytest

from cycalc import FieldSpec, PolyRing, load_fixture

FIXTURE_DIR = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

POSITIVE_FIXTURES = sorted(
    p for p in FIXTURE_DIR.glob("*.fx") if not p.name.startswith("neg_"))
NEGATIVE_FIXTURES = sorted(
    p for p in FIXTURE_DIR.glob("neg_*.fx"))
ALL_FIXTURES = sorted(FIXTURE_DIR.glob("*.fx"))


@pytest.fixture(scope="session")
def corpus():
    """Every fixture in the shipped corpus, parsed once."""
    return {p.stem: load_fixture(p) for p in ALL_FIXTURES}


@pytest.fixture
def ring_q2():
    return PolyRing(("x", "y"), FieldSpec.rationals())


@pytest.fixture
def ring_q3():
    return PolyRing(("x", "y", "z"), FieldSpec.rationals())


@pytest.fixture
def ring_f5():
    return PolyRing(("x", "y"), FieldSpec.prime_field(5))
