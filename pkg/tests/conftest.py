import pytest

from qhl.config import Settings
from qhl.exactpoly import EvalContext
from qhl.tableaux import (
    MarkedTableau,
    SemistandardTableau,
    StandardTableau,
    parse_tableau,
)

# Shape (6,4,2,1,1)/(2,1); inner boxes are written as '.'.
SEMISTANDARD_TEXT = """
. . 3 3 3 12
. 1 5 10
1 2
6
12
"""

MARKED_TEXT = """
. . -4 4 4 18
. -3 -9 9
2 -3
-9
18
"""

STANDARD_TEXT = """
. . 4 5 6 11
. 2 7 9
1 3
8
10
"""

WEIGHTED_POSET_TEXT = """
5
3 < 2
1 < 2
1 < 4
5 < 3
5 < 1
w 2 5
w 3 2
w 4 2
w 5 2
"""


@pytest.fixture(autouse=True)
def clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep QHL_* variables from the caller's shell out of the tests."""
    for name in ("THREADS", "M", "DEGREE", "SEED", "LOG_LEVEL", "REPORT_TIMING"):
        monkeypatch.delenv(f"QHL_{name}", raising=False)


@pytest.fixture
def test_settings() -> Settings:
    return Settings()


@pytest.fixture
def ctx2() -> EvalContext:
    return EvalContext(2, 4)


@pytest.fixture
def ctx3() -> EvalContext:
    return EvalContext(3, 3)


@pytest.fixture
def semistandard_t1() -> SemistandardTableau:
    return parse_tableau(SEMISTANDARD_TEXT, SemistandardTableau)


@pytest.fixture
def marked_t2() -> MarkedTableau:
    return parse_tableau(MARKED_TEXT, MarkedTableau)


@pytest.fixture
def standard_t3() -> StandardTableau:
    return parse_tableau(STANDARD_TEXT, StandardTableau)


@pytest.fixture
def weighted_poset_file(tmp_path) -> str:
    path = tmp_path / "poset.txt"
    path.write_text(WEIGHTED_POSET_TEXT)
    return str(path)
