"""Report files: the CSV table and the rendered charts."""

import csv

import pytest

from cycalc import run_checks
from cycalc.report import write_csv, write_report


@pytest.fixture(scope="module")
def reports(corpus):
    return [run_checks(corpus[stem]) for stem in ("line_q", "fp13",
                                                  "neg_badmero")]


def read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


class TestCsv:
    def test_one_row_per_record_plus_header(self, reports, tmp_path):
        path = tmp_path / "report.csv"
        write_csv(reports, str(path))
        rows = read_rows(path)
        total = sum(len(r.records) for r in reports)
        assert len(rows) == total + 1
        assert rows[0] == ["fixture", "check", "inputs", "lhs", "rhs",
                           "verdict", "ms"]

    def test_stable_mode_drops_the_timing_column(self, reports, tmp_path):
        path = tmp_path / "report.csv"
        write_csv(reports, str(path), stable=True)
        rows = read_rows(path)
        assert rows[0] == ["fixture", "check", "inputs", "lhs", "rhs",
                           "verdict"]
        assert all(len(r) == 6 for r in rows)

    def test_rows_follow_fixture_order(self, reports, tmp_path):
        path = tmp_path / "report.csv"
        write_csv(reports, str(path), stable=True)
        fixtures = [r[0] for r in read_rows(path)[1:]]
        assert fixtures == sorted(fixtures, key=fixtures.index)
        assert set(fixtures) == {"line_q", "fp13", "neg_badmero"}

    def test_verdict_column_is_pass_or_fail(self, reports, tmp_path):
        path = tmp_path / "report.csv"
        write_csv(reports, str(path), stable=True)
        verdicts = {r[5] for r in read_rows(path)[1:]}
        assert verdicts == {"pass"}

    def test_stable_runs_are_byte_identical(self, reports, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(reports, str(a), stable=True)
        write_csv(reports, str(b), stable=True)
        assert a.read_bytes() == b.read_bytes()


class TestCharts:
    def test_full_report_writes_csv_and_both_charts(self, reports, tmp_path):
        outdir = tmp_path / "out"
        written = write_report(reports, str(outdir))
        names = sorted(p.split("/")[-1] for p in written)
        assert names == ["report.csv", "timings.png", "verdicts.png"]
        for p in written:
            assert (outdir / p.split("/")[-1]).stat().st_size > 0

    def test_stable_mode_omits_the_timing_chart(self, reports, tmp_path):
        outdir = tmp_path / "out"
        written = write_report(reports, str(outdir), stable=True)
        names = sorted(p.split("/")[-1] for p in written)
        assert names == ["report.csv", "verdicts.png"]
        assert not (outdir / "timings.png").exists()

    def test_pngs_have_the_png_magic(self, reports, tmp_path):
        outdir = tmp_path / "out"
        write_report(reports, str(outdir))
        for name in ("verdicts.png", "timings.png"):
            assert (outdir / name).read_bytes()[:8] == \
                b"\x89PNG\r\n\x1a\n"

    def test_outdir_is_created(self, reports, tmp_path):
        nested = tmp_path / "a" / "b"
        write_report(reports, str(nested), stable=True)
        assert (nested / "report.csv").exists()
