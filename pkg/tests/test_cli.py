import csv
import io
import json
import math
import subprocess
import sys

import pytest

from xydiscord.cli import CSV_FIELDS, fmt, main


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse rejects malformed flags itself
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def parse_point(text):
    return dict(line.split(" = ") for line in text.strip().splitlines()) if text else {}


class TestFormat:
    def test_twelve_digits(self):
        assert fmt(2 / math.pi) == "0.636619772368"
        assert fmt(-0.0) == "0"
        assert fmt(True) == "true"
        assert fmt(3) == "3"


class TestPoint:
    def test_trivial_point(self, capsys):
        code, out, _ = run(capsys, "point", "--gamma", "1", "--lambda", "0", "--kt", "0", "--n", "1")
        assert code == 0
        vals = {k.strip(): float(v) for k, v in parse_point(out).items()}
        for k in ("mutual_info", "classical", "discord", "concurrence", "eof"):
            assert vals[k] == 0.0

    def test_critical_ising_sxx(self, capsys):
        code, out, _ = run(capsys, "point", "--gamma", "1", "--lambda", "1", "--kt", "0", "--n", "1")
        assert code == 0
        vals = {k.strip(): v for k, v in parse_point(out).items()}
        assert vals["sxx"] == "0.636619772368"
        assert abs(float(vals["sxx"]) - 2 / math.pi) < 1e-9

    def test_verify_measurement(self, capsys):
        code, out, _ = run(capsys, "point", "--gamma", "1", "--lambda", "1", "--kt", "0", "--n", "1",
                           "--verify-measurement")
        assert code == 0
        vals = {k.strip(): v for k, v in parse_point(out).items()}
        assert abs(float(vals["classical_optimized"]) - float(vals["classical"])) < 1e-6

    @pytest.mark.parametrize("argv", [
        ["point", "--gamma", "1.5", "--lambda", "1", "--kt", "0"],
        ["point", "--gamma", "1", "--lambda", "1"],
        ["point", "--gamma", "1", "0.5", "--lambda", "1", "--kt", "0"],
        ["point", "--gamma", "1", "--lambda", "1", "--kt", "0", "--n", "0"],
        ["point", "--gamma", "1", "--lambda", "1", "--kt", "0", "--jobs", "0"],
        ["point", "--gamma", "x"],
        ["nonsense"],
    ])
    def test_usage_errors(self, capsys, argv):
        code, _, err = run(capsys, *argv)
        assert code == 2
        assert "error" in err

    def test_quadrature_failure_exit(self, capsys):
        code, _, err = run(capsys, "point", "--gamma", "0.01", "--lambda", "0.99", "--kt", "0",
                           "--n", "40", "--quad-tol", "1e-16")
        assert code == 3
        assert "gamma=0.01" in err

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "p.txt"
        code, out, _ = run(capsys, "point", "--gamma", "0.5", "--lambda", "0.5", "--kt", "0.1",
                           "--output", str(path))
        assert code == 0 and out == ""
        assert "discord" in path.read_text()


class TestSweep:
    ARGS = ["sweep", "--gamma", "0", "1", "--lambda-min", "0", "--lambda-max", "2", "--lambda-steps", "5",
            "--kt", "0", "0.5", "--n", "1", "2"]

    def test_csv_header_and_order(self, capsys):
        code, out, _ = run(capsys, *self.ARGS)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "gamma,lambda,kT,n,sz,sxx,syy,szz,mutual_info,classical,discord,concurrence,eof"
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 2 * 5 * 2 * 2
        keys = [(float(r["gamma"]), float(r["kT"]), int(r["n"]), float(r["lambda"])) for r in rows]
        assert keys == sorted(keys)
        for r in rows:
            i, c, d = (float(r[k]) for k in ("mutual_info", "classical", "discord"))
            assert abs(i - c - d) < 1e-10

    def test_json_round_trip(self, capsys):
        code, out, _ = run(capsys, *self.ARGS, "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert list(data[0]) == CSV_FIELDS
        from xydiscord import ModelParams, evaluate_point

        for rec in data:
            row = evaluate_point(ModelParams(rec["gamma"], rec["lambda"], rec["kT"]), rec["n"]).record()
            assert rec == row

    def test_jobs_independent(self, capsys):
        _, one, _ = run(capsys, *self.ARGS, "--jobs", "1")
        _, three, _ = run(capsys, *self.ARGS, "--jobs", "3")
        assert one == three

    def test_empty_range_writes_nothing(self, capsys, tmp_path):
        path = tmp_path / "out.csv"
        code, _, err = run(capsys, "sweep", "--gamma", "0", "--lambda-min", "0", "--lambda-max", "2",
                           "--lambda-steps", "0", "--kt", "0", "--output", str(path))
        assert code == 2
        assert not path.exists()

    def test_both_lambda_sources_rejected(self, capsys):
        code, _, _ = run(capsys, "sweep", "--gamma", "0", "--lambda", "1", "--lambda-min", "0",
                         "--lambda-max", "2", "--lambda-steps", "3", "--kt", "0")
        assert code == 2

    def test_kt_range(self, capsys):
        code, out, _ = run(capsys, "sweep", "--gamma", "0", "--lambda", "1", "--kt-min", "0.5",
                           "--kt-max", "1.5", "--kt-steps", "3", "--n", "2")
        assert code == 0
        assert [r["kT"] for r in csv.DictReader(io.StringIO(out))] == ["0.5", "1", "1.5"]

    def test_config_file_with_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# sweep defaults\ngamma = 0.5\nlambda = 0.5, 1.5\nkt = 0\nn = 1\nformat = json\n")
        code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--n", "3")
        assert code == 0
        data = json.loads(out)
        assert [(r["gamma"], r["lambda"], r["n"]) for r in data] == [(0.5, 0.5, 3), (0.5, 1.5, 3)]

    def test_bad_config_line(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("gamma 0.5\n")
        code, _, _ = run(capsys, "sweep", "--config", str(cfg))
        assert code == 2


class TestScanQpt:
    def test_self_test(self, capsys):
        code, out, _ = run(capsys, "scan-qpt", "--self-test")
        assert code == 0
        assert "ok" in out

    def test_ising_scan(self, capsys):
        code, out, err = run(capsys, "scan-qpt", "--gamma", "1", "--kt", "0", "--n", "2",
                             "--lambda-steps", "11", "--format", "json")
        assert code == 0
        (res,) = json.loads(out)
        assert 0.98 <= res["lambda_star_discord"] <= 1.02
        assert len(res["lambda"]) == 11
        assert "lambda*" in err

    def test_window_must_contain_one(self, capsys):
        code, _, _ = run(capsys, "scan-qpt", "--gamma", "1", "--kt", "0", "--lambda-min", "0.2",
                         "--lambda-max", "0.9")
        assert code == 2


class TestVerifyMeasurement:
    def test_small_grid(self, capsys):
        code, out, err = run(capsys, "verify-measurement", "--gamma", "0.5", "--lambda", "0.5", "1.5",
                             "--kt", "0", "0.5", "--n", "1")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 4
        assert all(float(r["abs_diff"]) < 1e-6 for r in rows)
        assert "0 mismatches" in err


class TestEdConverge:
    def test_field_only_gap_zero(self, capsys):
        code, out, _ = run(capsys, "ed-converge", "--gamma", "0.5", "--lambda", "0", "--kt", "0.7",
                           "--sizes", "4", "6", "8")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert [r["N"] for r in rows] == ["4", "6", "8"]
        assert all(float(r["gap"]) < 1e-12 for r in rows)

    def test_two_sites_rejected(self, capsys):
        code, _, err = run(capsys, "ed-converge", "--gamma", "1", "--lambda", "0.5", "--kt", "1",
                           "--sizes", "2", "4")
        assert code == 2
        assert "twice" in err

    def test_separation_limit(self, capsys):
        code, _, _ = run(capsys, "ed-converge", "--gamma", "1", "--lambda", "0.5", "--kt", "1",
                         "--sizes", "4", "6", "--n", "3")
        assert code == 2


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "xydiscord.cli", "point", "--gamma", "1", "--lambda", "1", "--kt", "0"],
        capture_output=True, text=True, check=True,
    ).stdout
    assert "sxx" in out and "0.636619772368" in out
