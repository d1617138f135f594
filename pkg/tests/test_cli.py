import csv
import io
import json
import math
import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zetalab.cli import CSV_HEADER, SCHEMA_VERSION, UsageError, main, parse_expr, report_from_payload

TWO_PI = repr(2 * math.pi)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParseExpr:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("2pi", 2 * math.pi),
            ("pi^2/2", math.pi**2 / 2),
            ("2π", 2 * math.pi),
            ("6.283185307179586", 6.283185307179586),
            ("1e-4", 1e-4),
            ("2.5E+1", 25.0),
            ("-(1+2)*3", -9.0),
            ("2(pi+1)", 2 * (math.pi + 1)),
            ("pi**2", math.pi**2),
        ],
    )
    def test_values(self, text, value):
        assert parse_expr(text) == pytest.approx(value, rel=1e-15)

    def test_variable(self):
        assert parse_expr("4pi^3/ALPHA", {"ALPHA": 2.0}) == pytest.approx(2 * math.pi**3, rel=1e-15)

    @pytest.mark.parametrize("text", ["", "foo", "2pi)", "1/0", "__import__('os')", "[1]", "10^400", "True"])
    def test_rejects(self, text):
        with pytest.raises(UsageError):
            parse_expr(text)

    @given(st.floats(1e-6, 1e6))
    def test_decimal_round_trip(self, v):
        assert parse_expr(repr(v)) == v


class TestVerify:
    def test_schlomilch_ok(self, capsys):
        code, out, _ = run(capsys, "verify", "--k", "1", "--r", "1", "--x", TWO_PI, "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["residual"]["abs"] < 1e-12

    def test_expression_x(self, capsys):
        code, out, _ = run(capsys, "verify", "--k", "1", "--r", "1", "--x", "2pi")
        assert code == 0 and "abs residual" in out

    def test_unsupported_class(self, capsys):
        code, _, err = run(capsys, "verify", "--k", "3", "--r", "2", "--x", "1")
        assert code == 1
        assert "unsupported parity class" in err and "Case 4" in err

    def test_json_schema(self, capsys):
        code, out, _ = run(capsys, "verify", "--k", "2", "--r", "0", "--x", "1", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["schema"] == SCHEMA_VERSION == 1
        assert {"lhs", "rhs_terms", "residual"} <= set(data)
        assert data["pass"] is True

    def test_json_round_trip(self, capsys):
        _, out, _ = run(capsys, "verify", "--k", "3", "--r", "1", "--x", "1", "--format", "json")
        data = json.loads(out)
        rep = report_from_payload(data)
        again = rep.to_dict()
        for key, val in again.items():
            assert data[key] == val

    def test_residual_exit(self, capsys):
        code, _, _ = run(capsys, "verify", "--k", "3", "--r", "-3", "--x", "2", "--tol", "1e-300")
        assert code == 2

    def test_runtime_error_exit(self, capsys):
        code, _, err = run(capsys, "verify", "--k", "8", "--r", "0", "--x", "50")
        assert code == 1 and "terms" in err

    def test_bad_expression_exit(self, capsys):
        code, _, _ = run(capsys, "verify", "--k", "1", "--r", "1", "--x", "2foo")
        assert code == 64

    @pytest.mark.parametrize(
        "argv",
        [
            ["verify", "--k", "1", "--r", "1"],
            ["verify", "--k", "one", "--r", "1", "--x", "1"],
            ["bogus"],
            [],
            ["constants", "zeta_bogus"],
            ["verify", "--k", "1", "--r", "1", "--x", "1", "--format", "xml"],
        ],
    )
    def test_usage_errors(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 64

    def test_output_file(self, tmp_path, capsys):
        path = tmp_path / "rep.json"
        code, out, _ = run(capsys, "verify", "--k", "2", "--r", "1", "--x", "1", "--format", "json", "-o", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["case"] == {"k": 2, "r": 1, "x": 1.0}

    def test_csv_single(self, capsys):
        code, out, _ = run(capsys, "verify", "--k", "2", "--r", "0", "--x", "1", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert tuple(rows[0]) == CSV_HEADER and len(rows) == 2


class TestTable:
    def test_grid(self, capsys):
        code, out, err = run(capsys, "table", "--k", "1,2", "--r", "0,1", "--x", "1,2pi")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "k,r,x,lhs,rhs,residual,terms,ms"
        rows = list(csv.reader(io.StringIO(out)))[1:]
        assert len(rows) == 6
        assert [(r[0], r[1]) for r in rows] == [("1", "1"), ("1", "1"), ("2", "0"), ("2", "0"), ("2", "1"), ("2", "1")]
        assert [float(r[2]) for r in rows[:2]] == [1.0, 2 * math.pi]
        assert all(float(r[5]) < 1e-8 for r in rows)
        assert "skipped k=1 r=0" in err

    def test_deterministic_with_threads(self, capsys, monkeypatch):
        monkeypatch.setenv("ZETALAB_THREADS", "3")
        _, a, _ = run(capsys, "table", "--k", "1,2", "--r", "1,-1", "--x", "1,3")
        monkeypatch.setenv("ZETALAB_THREADS", "1")
        _, b, _ = run(capsys, "table", "--k", "1,2", "--r", "1,-1", "--x", "1,3")
        strip = lambda text: [row[:7] for row in csv.reader(io.StringIO(text))]
        assert strip(a) == strip(b)

    def test_residual_exit(self, capsys):
        code, _, _ = run(capsys, "table", "--k", "2", "--r", "0", "--x", "1", "--tol", "1e-300")
        assert code == 2

    def test_error_row(self, capsys):
        code, out, err = run(capsys, "table", "--k", "2,8", "--r", "0", "--x", "50")
        assert code == 1
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[2][3] == "nan" and "error k=8" in err

    def test_bad_list(self, capsys):
        code, _, _ = run(capsys, "table", "--k", "a,b", "--r", "0", "--x", "1")
        assert code == 64


class TestConstants:
    def test_all(self, capsys):
        code, out, _ = run(capsys, "constants", "zeta_half", "zeta_minus_half", "zeta_1_over_k", "zeta_odd", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["schema"] == 1
        by_name = {e["name"]: e for e in data["constants"]}
        assert by_name["zeta_half"]["value"] == pytest.approx(-1.4603545088095868, abs=1e-9)
        assert abs(by_name["zeta_half"]["delta"]) < 1e-9
        assert abs(by_name["zeta_odd"]["delta"]) < 1e-10
        assert abs(by_name["zeta_1_over_k"]["delta"]) < 1e-9

    def test_text_and_params(self, capsys):
        code, out, _ = run(capsys, "constants", "zeta_odd", "--m", "2")
        assert code == 0 and out.startswith("name")
        code, out, _ = run(capsys, "constants", "zeta_1_over_k", "--k", "4", "--x", "0.5")
        assert code == 0

    def test_degenerate_x(self, capsys):
        code, _, err = run(capsys, "constants", "zeta_odd", "--m", "2", "--x", "2pi")
        assert code == 1 and "drops out" in err


class TestCorollary:
    @pytest.mark.parametrize(
        "argv",
        [
            ["schlomilch"],
            ["dedekind", "--alpha", "2"],
            ["eisenstein", "--m", "2", "--alpha", "1"],
            ["zeta_minus_half"],
            ["ramanujan_odd", "--m", "3", "--x", "ALPHA/2", "--alpha", "2pi"],
            ["wigert", "--k", "4", "--x", "5"],
        ],
    )
    def test_pass(self, argv, capsys):
        code, out, _ = run(capsys, "corollary", *argv, "--format", "json")
        assert code == 0, out
        assert json.loads(out)["pass"] is True

    def test_wigert_odd_k(self, capsys):
        code, _, _ = run(capsys, "corollary", "wigert", "--k", "3")
        assert code == 1


def test_module_entry_point():
    env = {**os.environ, "ZETALAB_THREADS": "1"}
    out = subprocess.run(
        [sys.executable, "-m", "zetalab", "verify", "--k", "1", "--r", "1", "--x", "2pi", "--format", "json"],
        capture_output=True, text=True, env=env, timeout=300,
    )
    assert out.returncode == 0, out.stderr
    assert json.loads(out.stdout)["schema"] == 1
    out = subprocess.run([sys.executable, "-m", "zetalab", "verify"], capture_output=True, text=True, timeout=300)
    assert out.returncode == 64
