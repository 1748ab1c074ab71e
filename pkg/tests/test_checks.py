"""The check runner: command surface, selectors, seeds, and report shapes."""

import json

import pytest

from cycalc import (DomainError, FixtureError, parse_fixture, run_checks)
from cycalc.checks import DEFAULT_SWEEPS, eval_command


@pytest.fixture(scope="module")
def plane(corpus):
    return corpus["plane_q"]


@pytest.fixture(scope="module")
def plane_report(plane):
    return run_checks(plane)


class TestEvalCommand:
    def test_gb_of_an_ideal_and_of_a_scheme(self, plane):
        assert eval_command(plane, ("gb", "Ipair")) == "x*y"
        assert eval_command(plane, ("gb", "pair")) == "x*y"

    def test_gb_with_an_alternate_order(self, plane):
        got = eval_command(plane, ("gb", "Iquart"), order=("lex",))
        assert got == "x + y^3 - y\ny^4 - y^2 + 1"

    def test_components_report_provenance(self, plane):
        assert eval_command(plane, ("components", "pair")) == \
            "[[x], [y]] (Computed)"
        got = eval_command(plane, ("components", "quart"))
        assert got.endswith("(CertifiedByFixture)")

    def test_fund_and_length(self, plane):
        assert eval_command(plane, ("fund", "thick")) == "6*[x, y]"
        assert eval_command(plane, ("length", "dbl", "yaxis")) == \
            "2 (GenericFiber)"
        assert eval_command(plane, ("length", "thick", "origin")) == \
            "6 (ZeroDimStaircase)"

    def test_div_and_trace(self, plane):
        assert eval_command(plane, ("div", "pair", "r1")) == "2*[x, y]"
        traced = eval_command(plane, ("div", "pair", "r1"), trace=True)
        assert traced.splitlines() == ["2*[x, y]", "  ord [x, y] = 2"]

    def test_glue_and_pullback(self, plane):
        assert eval_command(plane, ("glue", "dpair")) == \
            eval_command(plane, ("pullback", "idP", "c1"))

    def test_usage_errors(self, plane):
        with pytest.raises(DomainError, match="usage: gb"):
            eval_command(plane, ("gb",))
        with pytest.raises(DomainError, match="unknown command"):
            eval_command(plane, ("frobnicate", "pair"))
        with pytest.raises(DomainError, match="empty command"):
            eval_command(plane, ())

    def test_unknown_entities(self, plane):
        with pytest.raises(FixtureError, match="unknown ideal"):
            eval_command(plane, ("gb", "nope"))
        with pytest.raises(FixtureError, match="unknown mero"):
            eval_command(plane, ("div", "pair", "nope"))

    def test_function_must_live_on_the_named_scheme(self, plane):
        with pytest.raises(DomainError, match="does not live on that scheme"):
            eval_command(plane, ("div", "dbl", "r1"))


class TestSelectors:
    def test_single_check_selection(self, plane):
        rep = run_checks(plane, selector=["prop31"])
        assert rep.records
        assert {r.check for r in rep.records} == {"prop31"}

    def test_expect_only_selection(self, plane):
        rep = run_checks(plane, selector=["expect"])
        assert len(rep.records) == len(plane.expects)
        assert {r.check for r in rep.records} == {"expect"}

    def test_unknown_selector_rejected(self, plane):
        with pytest.raises(DomainError, match=r"unknown check ids: \['bogus'\]"):
            run_checks(plane, selector=["bogus"])

    def test_all_is_the_union(self, plane, plane_report):
        per_check = sum(
            len(run_checks(plane, selector=[c]).records)
            for c in ("prop31", "eq4", "prop32", "eq5", "eq7", "glue",
                      "separated", "kx", "thm6", "functoriality", "expect"))
        assert len(plane_report.records) == per_check

    def test_the_full_plane_fixture_is_green(self, plane_report):
        assert plane_report.all_pass()
        assert len(plane_report.records) == 91


class TestNegativeFixtures:
    def test_parse_failure_fixture_yields_one_record(self, corpus):
        rep = run_checks(corpus["neg_badmero"])
        (rec,) = rep.records
        assert rec.check == "expectfail" and rec.inputs == "parse"
        assert rec.verdict
        assert "zero-divisor" in rec.lhs

    def test_negative_fixtures_run_expectations_only(self, corpus):
        for stem in ("neg_badcover", "neg_impure", "neg_guard"):
            rep = run_checks(corpus[stem])
            assert rep.all_pass()
            assert {r.check for r in rep.records} <= {"expect", "expectfail"}

    def test_expectfail_rows_pass_by_matching_the_error(self, corpus):
        rep = run_checks(corpus["neg_badcover"])
        row = next(r for r in rep.records if r.check == "expectfail")
        assert row.rhs == "inconsistent cover data"
        assert row.rhs in row.lhs


class TestDomainRefusalsAreVerdicts:
    IMPURE = """
field = Q
ring = x, y, z
ideal Imix = [ x*z, y*z ]
scheme mixed = Imix
components mixed = [ [z], [x, y] ]
mero w on mixed = (x + z - 1)/(1)
"""

    def test_undefined_divisor_fails_without_raising(self):
        fx = parse_fixture(self.IMPURE, name="inline")
        rep = run_checks(fx, selector=["prop32"])
        (rec,) = rep.records
        assert not rec.verdict
        assert rec.lhs.startswith("error:")
        assert "impure" in rec.lhs

    def test_empty_selection_is_vacuously_green(self):
        fx = parse_fixture(self.IMPURE, name="inline")
        rep = run_checks(fx, selector=["thm6"])
        assert rep.records == []
        assert rep.all_pass()
        assert rep.counts() == (0, 0)


class TestSeedsAndSweeps:
    def test_reruns_are_identical(self, plane, plane_report):
        again = run_checks(plane)
        assert again.render_text(stable=True) == \
            plane_report.render_text(stable=True)

    def test_seed_is_visible_and_harmless(self, plane):
        rep = run_checks(plane, selector=["glue"], seed=7, sweeps=5)
        sweeps = [r for r in rep.records if "sweeps=" in r.inputs]
        assert sweeps
        for r in sweeps:
            assert "seed=7" in r.inputs
            assert r.rhs == "5 round trips"
            assert r.verdict

    def test_default_sweep_count(self, plane_report):
        sweeps = [r for r in plane_report.records if "sweeps=" in r.inputs]
        assert all(f"sweeps={DEFAULT_SWEEPS}" in r.inputs for r in sweeps)


class TestReportShapes:
    def test_text_rendering(self, plane_report):
        text = plane_report.render_text(stable=True)
        lines = text.splitlines()
        assert lines[0] == "fixture: plane_q"
        assert lines[-1] == (f"summary: {len(plane_report.records)} checks, "
                             f"{len(plane_report.records)} pass, 0 fail")
        assert all(line.startswith("[pass]") for line in lines[1:-1])
        assert " ms)" not in text

    def test_timings_only_outside_stable_mode(self, plane_report):
        assert " ms)" in plane_report.render_text(stable=False)

    def test_json_shape(self, plane_report):
        doc = json.loads(plane_report.render_json(stable=True))
        assert doc["fixture"] == "plane_q"
        assert doc["summary"]["total"] == len(plane_report.records)
        assert doc["summary"]["fail"] == 0
        assert all("ms" not in c for c in doc["checks"])
        assert all(c["verdict"] == "pass" for c in doc["checks"])

    def test_json_keeps_timings_when_not_stable(self, plane_report):
        doc = plane_report.to_json_dict(stable=False)
        assert all("ms" in c for c in doc["checks"])
