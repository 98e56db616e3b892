import json
import random

import pytest

from qhl.config import Settings
from qhl.suites import (
    SUITE_NAMES,
    SUITES,
    BoundsError,
    SuiteBounds,
    random_points,
    resolve_bounds,
    run_selftest,
    run_suite,
)

TINY = {"max_outer": 2, "m": 2, "D": 3, "n": 2, "mx": 1, "my": 1}


class TestBounds:
    def test_error_messages(self) -> None:
        assert str(BoundsError("m", 7, 6)) == "--m 7 is out of range (1..6)"
        assert "--max-outer 9" in str(BoundsError("max_outer", 9, 7))

    def test_check(self) -> None:
        SuiteBounds().check()
        with pytest.raises(BoundsError, match="--n 6"):
            SuiteBounds(n=6).check()
        with pytest.raises(BoundsError, match="--D 0"):
            SuiteBounds(D=0).check()

    def test_layering(self, test_settings: Settings) -> None:
        suite = SUITES["thm-sg"]
        bounds = resolve_bounds(suite, test_settings, {})
        assert (bounds.max_outer, bounds.m, bounds.D) == (5, 4, 5)
        explicit = resolve_bounds(suite, Settings(m=3), {})
        assert explicit.m == 3
        assert explicit.D == 5
        flagged = resolve_bounds(suite, Settings(m=3), {"m": 2, "D": None})
        assert flagged.m == 2
        assert flagged.D == 5

    def test_registry(self) -> None:
        assert SUITE_NAMES[-1] == "all"
        assert {"thm-sg", "order-free", "ranks", "qn-routes"} <= set(SUITES)


class TestRunSuite:
    def test_unknown_suite(self, test_settings: Settings) -> None:
        with pytest.raises(ValueError, match="Invalid suite 'nope'"):
            run_suite("nope", test_settings)

    def test_out_of_range(self, test_settings: Settings) -> None:
        with pytest.raises(BoundsError):
            run_suite("thm-sg", test_settings, {"m": 9})

    def test_ranks(self, test_settings: Settings) -> None:
        report = run_suite("ranks", test_settings, {"n": 2})
        assert report.passed
        assert len(report.cases) == 6
        assert report.parameters == {"n": 2, "seed": 0}
        assert report.elapsed_seconds is None

    def test_thm_sg(self, test_settings: Settings) -> None:
        report = run_suite("thm-sg", test_settings, TINY)
        assert report.passed
        assert report.parameters["truncation"] == "x_i = 0 for i > 2, degree <= 3"
        assert any(c.identifier.startswith("marked/") for c in report.cases)

    def test_order_free_lists_orders(self, test_settings: Settings) -> None:
        report = run_suite("order-free", test_settings, TINY)
        assert report.passed
        assert report.parameters["orders"] == "default,reversed-sign-blocks,random-0"

    def test_qn_routes(self, test_settings: Settings) -> None:
        report = run_suite("qn-routes", test_settings, TINY)
        assert report.passed
        assert sum(c.identifier.startswith("qn-rational/") for c in report.cases) == 60

    def test_deterministic_and_thread_independent(self) -> None:
        first = run_suite("det-h", Settings(), TINY).to_json()
        again = run_suite("det-h", Settings(), TINY).to_json()
        threaded = run_suite("det-h", Settings(threads=2), TINY).to_json()
        assert first == again == threaded

    def test_timing_is_opt_in(self) -> None:
        report = run_suite("ranks", Settings(report_timing=True), {"n": 1})
        assert report.elapsed_seconds is not None
        assert "elapsed_seconds" in json.loads(report.to_json())

    def test_all(self, test_settings: Settings) -> None:
        report = run_suite("all", test_settings, TINY)
        assert report.suite == "all"
        assert report.passed
        assert report.parameters["ranks.n"] == 2
        assert report.parameters["cauchy.mx"] == 1


def test_selftest_passes(test_settings: Settings) -> None:
    report = run_selftest(test_settings)
    assert report.suite == "selftest"
    assert report.passed
    assert any(c.identifier == "rsk/S5/bijective" for c in report.cases)


def test_random_points_are_distinct_and_non_zero() -> None:
    points = random_points(random.Random(1), 6)
    assert len(set(points)) == 6
    assert all(points)
