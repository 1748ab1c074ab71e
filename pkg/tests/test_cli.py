"""The cycalc command line: queries, verify runs, exit codes, output modes."""

import json

import pytest

from cycalc import InternalInvariantError
from cycalc.cli import main

from conftest import FIXTURE_DIR

PLANE = str(FIXTURE_DIR / "plane_q.fx")
MAPS = str(FIXTURE_DIR / "maps_q.fx")
BADMERO = str(FIXTURE_DIR / "neg_badmero.fx")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestQueries:
    def test_gb(self, capsys):
        code, out, _ = run(capsys, "gb", PLANE, "Ipair")
        assert code == 0 and out == "x*y\n"

    def test_gb_with_order(self, capsys):
        code, out, _ = run(capsys, "gb", PLANE, "Iquart", "--order", "lex")
        assert code == 0
        assert out == "x + y^3 - y\ny^4 - y^2 + 1\n"

    def test_components(self, capsys):
        code, out, _ = run(capsys, "components", PLANE, "pair")
        assert code == 0 and out == "[[x], [y]] (Computed)\n"

    def test_fund_and_length(self, capsys):
        assert run(capsys, "fund", PLANE, "thick")[1] == "6*[x, y]\n"
        assert run(capsys, "length", PLANE, "thick", "origin")[1] == \
            "6 (ZeroDimStaircase)\n"

    def test_div_with_trace(self, capsys):
        code, out, _ = run(capsys, "div", PLANE, "diag", "rd", "--trace")
        assert code == 0
        assert out.splitlines() == [
            "1*[x, y - 1] + -1*[x - 1, y]",
            "  ord [x, y - 1] = 1",
            "  ord [x - 1, y] = -1",
        ]

    def test_glue_and_pullback(self, capsys):
        code, out, _ = run(capsys, "glue", PLANE, "dpair")
        assert code == 0 and out.strip()
        code, out2, _ = run(capsys, "pullback", MAPS, "sq", "zt")
        assert code == 0
        assert out2 == "2*[t, x, z] + -1*[t, x^2 - 2, z]\n"

    def test_query_json_envelope(self, capsys):
        code, out, _ = run(capsys, "div", PLANE, "pair", "r1", "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc == {"command": ["div", "pair", "r1"],
                       "result": "2*[x, y]"}


class TestVerify:
    def test_single_fixture_green(self, capsys):
        code, out, _ = run(capsys, "verify", str(FIXTURE_DIR / "line_q.fx"))
        assert code == 0
        assert out.startswith("fixture: line_q\n")
        assert "0 fail" in out.splitlines()[-1]

    def test_multi_fixture_overall_line(self, capsys):
        code, out, _ = run(capsys, "verify",
                           str(FIXTURE_DIR / "line_q.fx"),
                           str(FIXTURE_DIR / "fp13.fx"), "--stable")
        assert code == 0
        assert out.splitlines()[-1].startswith("overall:")

    def test_check_selection(self, capsys):
        code, out, _ = run(capsys, "verify", PLANE, "--check", "glue,expect",
                           "--stable")
        assert code == 0
        body = [l for l in out.splitlines() if l.startswith("[")]
        assert body
        assert all(" glue " in l or " expect " in l for l in body)

    def test_unknown_check_id_is_usage_error(self, capsys):
        code, _, err = run(capsys, "verify", PLANE, "--check", "nope")
        assert code == 2
        assert "unknown check ids" in err

    def test_negative_fixture_counts_as_pass(self, capsys):
        code, out, _ = run(capsys, "verify", BADMERO, "--stable")
        assert code == 0
        assert "expectfail parse" in out

    def test_seed_and_budget_flow_into_sweeps(self, capsys):
        code, out, _ = run(capsys, "verify", PLANE, "--check", "glue",
                           "--seed", "3", "--budget", "4", "--stable")
        assert code == 0
        assert "seed=3 sweeps=4" in out
        assert "4 round trips" in out

    def test_verify_json_envelope(self, capsys):
        code, out, _ = run(capsys, "verify", str(FIXTURE_DIR / "fp13.fx"),
                           "--json", "--stable")
        assert code == 0
        doc = json.loads(out)
        assert set(doc) == {"fixtures", "summary"}
        assert doc["summary"]["fail"] == 0
        assert doc["fixtures"][0]["fixture"] == "fp13"

    def test_report_dir_writes_files(self, capsys, tmp_path):
        outdir = tmp_path / "report"
        code, _, _ = run(capsys, "verify", str(FIXTURE_DIR / "line_q.fx"),
                         "--report-dir", str(outdir))
        assert code == 0
        assert (outdir / "report.csv").exists()
        assert (outdir / "verdicts.png").exists()
        assert (outdir / "timings.png").exists()

    def test_stable_report_dir_omits_timings(self, capsys, tmp_path):
        outdir = tmp_path / "report"
        run(capsys, "verify", str(FIXTURE_DIR / "line_q.fx"),
            "--report-dir", str(outdir), "--stable")
        assert (outdir / "report.csv").exists()
        assert not (outdir / "timings.png").exists()


class TestExitCodes:
    def test_failing_verdict_exits_one(self, capsys, tmp_path):
        bad = tmp_path / "red.fx"
        bad.write_text("""
field = Q
ring = x, y
ideal I = [ x*y ]
scheme S = I
expect gb I = x + y
""")
        code, out, _ = run(capsys, "verify", str(bad))
        assert code == 1
        assert "[FAIL]" in out

    def test_parse_error_exits_two(self, capsys, tmp_path):
        bad = tmp_path / "broken.fx"
        bad.write_text("field = Q\nring = x\nfrobnicate = 1\n")
        code, _, err = run(capsys, "gb", str(bad), "I")
        assert code == 2
        assert "fixture error" in err

    def test_unknown_entity_exits_two(self, capsys):
        code, _, err = run(capsys, "gb", PLANE, "nope")
        assert code == 2
        assert "unknown ideal" in err

    def test_missing_file_exits_two(self, capsys):
        code, _, err = run(capsys, "gb", "/no/such/file.fx", "I")
        assert code == 2
        assert "cycalc" in err

    def test_bad_order_exits_two(self, capsys):
        code, _, err = run(capsys, "gb", PLANE, "Ipair", "--order", "mystery")
        assert code == 2
        assert "unknown order" in err

    def test_internal_invariant_exits_three(self, capsys, monkeypatch):
        def boom(*a, **k):
            raise InternalInvariantError("synthetic")
        monkeypatch.setattr("cycalc.cli.run_checks", boom)
        code, _, err = run(capsys, "verify", PLANE)
        assert code == 3
        assert "internal invariant" in err

    def test_usage_error_is_exit_two_from_argparse(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["gb"])
        assert exc.value.code == 2


class TestDeterminism:
    def test_stable_verify_output_is_byte_identical(self, capsys):
        _, first, _ = run(capsys, "verify", PLANE, "--stable")
        _, second, _ = run(capsys, "verify", PLANE, "--stable")
        assert first == second

    def test_stable_json_is_byte_identical(self, capsys):
        _, first, _ = run(capsys, "verify", str(FIXTURE_DIR / "fp5.fx"),
                          "--json", "--stable")
        _, second, _ = run(capsys, "verify", str(FIXTURE_DIR / "fp5.fx"),
                           "--json", "--stable")
        assert first == second
