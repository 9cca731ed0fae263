import csv
import io
import json
import math
import subprocess
import sys
from fractions import Fraction

import pytest

from maxclass import cli
from maxclass.closed_form import solve_B
from maxclass.errors import CertificateError
from maxclass.records import OutputRecord, fmt_real, to_jsonable


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_c3_json(capsys):
    code, out, _ = run(capsys, "solve", "--family", "C", "--rank", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["polynomial"] == ["0", "-3/5", "0", "1"]
    assert data["schema_version"] == "1" and data["provenance"] == "closed_form"
    assert data["group"] == "C" and data["rank"] == 3
    assert data["certificates"]["check_ode_residual_zero"] is True


def test_solve_g2_json(capsys):
    code, out, _ = run(capsys, "solve", "--family", "G2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["polynomial"] == ["-7/25", "-3/5", "3/5", "1"]
    assert data["certificates"]["A_sym"] == "-3/5"
    assert data["certificates"]["C_sym"] == "7/25"
    assert data["certificates"]["quartic_roots"] == {"-3": 1, "-3/5": 1, "3": 2}


def test_solve_a4_angles(capsys):
    code, out, _ = run(capsys, "solve", "--family", "A", "--rank", "4")
    assert code == 0
    data = json.loads(out)
    got = [float(a) for a in data["angles"]]
    assert got == pytest.approx([math.pi / 4 * k for k in (1, 3, 5, 7)], abs=1e-15)
    assert data["polynomial"] is None


def test_solve_csv(capsys):
    code, out, _ = run(capsys, "solve", "--family", "B", "--rank", "3", "--format", "csv")
    assert code == 0
    assert "\r" not in out
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 2
    row = dict(zip(*rows))
    assert [row[f"c{k}"] for k in range(4)] == ["-1/5", "-3/5", "3/5", "1"]
    assert float(row["theta_3"]) == pytest.approx(math.pi)


@pytest.mark.parametrize("argv", [
    ["solve", "--family", "G2", "--rank", "2"],
    ["solve", "--family", "D", "--rank", "1"],
    ["solve", "--family", "B"],
    ["solve", "--family", "E7", "--rank", "3"],
    ["solve"],
    ["bogus"],
    ["density", "--family", "A", "--rank", "5"],
    ["density", "--family", "G2"],
    ["table", "--max-rank", "1"],
    ["verify", "--family", "B", "--rank", "2", "--starts", "0"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_certificate_failure_exits_3(capsys, monkeypatch):
    def broken(spec):
        raise CertificateError("forced", ["forced"])
    monkeypatch.setattr(cli, "solve", broken)
    code, _, err = run(capsys, "solve", "--family", "D", "--rank", "4")
    assert code == 3 and "forced" in err


def test_verify_d5(capsys):
    code, out, _ = run(capsys, "verify", "--family", "D", "--rank", "5", "--seed", "7")
    assert code == 0
    data = json.loads(out)
    assert data["passed"] and data["distinct_optima_count"] == 1
    assert float(data["angle_deviation"]) <= 1e-6
    assert float(data["gradient_norm"]) <= 1e-8


def test_verify_g2_reports_symmetric_residual(capsys):
    code, out, _ = run(capsys, "verify", "--family", "G2", "--seed", "1")
    assert code == 0
    data = json.loads(out)
    assert float(data["A_minus_B_residual"]) <= 1e-9


def test_verify_a2(capsys):
    code, out, _ = run(capsys, "verify", "--family", "A", "--rank", "2")
    assert code == 0
    assert float(json.loads(out)["angle_deviation"]) <= 1e-6


def test_verify_disagreement_exits_4(capsys, monkeypatch):
    real = cli.solve

    def shifted(spec):
        r = real(spec)
        r.angles = r.angles + 1e-3
        return r
    monkeypatch.setattr(cli, "solve", shifted)
    code, out, _ = run(capsys, "verify", "--family", "C", "--rank", "2", "--starts", "8")
    assert code == 4
    data = json.loads(out)
    assert data["passed"] is False and data["checks"]["angle_deviation"] is False


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("MAXCLASS_SEED", "123")
    code, out, _ = run(capsys, "verify", "--family", "B", "--rank", "2", "--starts", "4")
    assert code == 0 and json.loads(out)["seed"] == 123
    code, out, _ = run(capsys, "verify", "--family", "B", "--rank", "2", "--starts", "4",
                       "--seed", "5")
    assert json.loads(out)["seed"] == 5
    monkeypatch.setenv("MAXCLASS_SEED", "-4")
    code, _, _ = run(capsys, "verify", "--family", "B", "--rank", "2", "--starts", "4")
    assert code == 2


def test_density_d200(capsys):
    code, out, _ = run(capsys, "density", "--family", "D", "--rank", "200")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 200 and float(data["ks_statistic"]) <= 0.02


def test_density_plot_data(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "density", "--family", "C", "--rank", "100",
                       "--plot-data", str(path))
    assert code == 0
    text = path.read_text(encoding="utf-8")
    assert "\r" not in text
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["x", "empirical_density", "limiting_density"]
    assert all(len(r) == 3 for r in rows)
    body = [[float(v) for v in r] for r in rows[1:]]
    assert all(-1 < x < 1 and e >= 0 and lim > 0 for x, e, lim in body)
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]


def test_table_rows_and_determinism(capsys):
    code, first, _ = run(capsys, "table")
    code2, second, _ = run(capsys, "table")
    assert code == code2 == 0 and first == second
    rows = list(csv.reader(io.StringIO(first)))
    header = rows[0]
    table = {(r[0], r[1]): dict(zip(header, r)) for r in rows[1:]}

    def coefs(key, deg):
        return [Fraction(table[key][f"c{k}"]) for k in range(deg + 1)]

    assert coefs(("D", "4"), 4) == [Fraction(1, 5), 0, Fraction(-6, 5), 0, 1]
    assert coefs(("B", "3"), 3) == [Fraction(-1, 5), Fraction(-3, 5), Fraction(3, 5), 1]
    assert coefs(("C", "4"), 4) == [Fraction(6, 70), 0, Fraction(-6, 7), 0, 1]
    assert ("G2", "2") in table and ("A", "8") in table and ("B", "1") in table
    assert table[("A", "3")]["c0"] == ""
    assert len(rows) == 1 + 7 + 8 + 8 + 7 + 1


def test_record_round_trip():
    rec = OutputRecord.from_result(solve_B(4))
    again = OutputRecord.from_json(rec.to_json())
    assert again == rec
    assert again.polynomial_exact() == solve_B(4).polynomial
    for s in rec.angles:
        assert fmt_real(float(s)) == s
    with pytest.raises(ValueError):
        OutputRecord.from_json(json.dumps({**json.loads(rec.to_json()), "schema_version": "2"}))


def test_jsonable_values():
    assert to_jsonable(Fraction(-6, 5)) == "-6/5"
    assert to_jsonable(True) is True
    assert to_jsonable(0.1) == "0.10000000000000001"
    assert to_jsonable(float("-inf")) == "-inf"
    assert to_jsonable({"a": [Fraction(1, 2), 3]}) == {"a": ["1/2", 3]}


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "maxclass", "solve", "--family", "D", "--rank", "4"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["polynomial"] == ["1/5", "0", "-6/5", "0", "1"]
    bad = subprocess.run([sys.executable, "-m", "maxclass", "density", "--family", "A", "--rank", "5"],
                         capture_output=True, text=True)
    assert bad.returncode == 2
