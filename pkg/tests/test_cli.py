import csv
import io
import json
import subprocess
import sys

import pytest

from qstab.cli import main
from qstab.experiments import SUITE_COLUMNS, SWEEP_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_compile_example(capsys, tmp_path):
    sched = tmp_path / "s.txt"
    events = tmp_path / "e.txt"
    code, out, _ = run(capsys, "compile", "--code", "surface:3", "--hw", "linear:8x5",
                       "--compiler", "moveless", "--ancilla-budget", "1", "--rounds", "2",
                       "--schedule", str(sched), "--emit-events", str(events))
    assert code == 0
    report = json.loads(out)
    assert report["total_us"] > 0 and report["shuttles"] >= 0
    assert len(report["rounds"]) == 2
    assert events.read_text().startswith("# start_us")

    code, out, _ = run(capsys, "simulate", "--schedule", str(sched), "--hw", "linear:8x5")
    assert code == 0 and json.loads(out)["total_us"] == report["total_us"]

    code, out, _ = run(capsys, "verify", "--schedule", str(sched), "--code", "surface:3",
                       "--hw", "linear:8x5")
    assert code == 0 and out.startswith("ok:")


def test_verify_exit_code_on_violation(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text(
        "# qstab schedule v1\ncompiler mao\ncode -\nions data=1 ancilla=1\n"
        "init 0 d0\ninit 1 a0\nround 1\ngate2 d0,a0 trap:0 s0 Z\n"
    )
    code_file = tmp_path / "c.txt"
    code_file.write_text("n=1\nZ0\n")
    code, out, _ = run(capsys, "verify", "--schedule", str(bad), "--code", str(code_file),
                       "--hw", "linear:2x3")
    assert code == 1
    assert "not co-trapped" in out


def test_rounds_zero_rejected(capsys):
    with pytest.raises(SystemExit) as info:
        main(["compile", "--code", "surface:3", "--rounds", "0"])
    assert info.value.code == 2
    assert "must be >= 1" in capsys.readouterr().err


def test_unknown_compiler_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["compile", "--code", "surface:3", "--compiler", "magic"])
    assert info.value.code == 2
    assert "invalid choice" in capsys.readouterr().err


def test_capacity_failure_is_diagnosed(capsys):
    code, _, err = run(capsys, "compile", "--code", "surface:3", "--hw", "linear:2x3")
    assert code == 2 and "error" in err


def test_bad_code_file(capsys, tmp_path):
    f = tmp_path / "c.txt"
    f.write_text("n=2\nX0\nZ0\n")
    code, _, err = run(capsys, "dump-code", str(f))
    assert code == 2 and "anticommute" in err


def test_gen_and_dump_code(capsys, tmp_path):
    out_file = tmp_path / "s3.txt"
    assert run(capsys, "gen-code", "surface", "3", "-o", str(out_file))[0] == 0
    code, out, _ = run(capsys, "dump-code", str(out_file))
    assert code == 0
    assert out.splitlines()[1] == "n=9" and len(out.splitlines()) == 10


def test_baseline_sweep_surface_3(capsys):
    code, out, _ = run(capsys, "sweep", "--code", "surface:3", "--hw", "linear")
    assert code == 0
    assert out.splitlines()[0] == ",".join(SWEEP_COLUMNS)
    data = rows(out)
    assert [r["budget"] for r in data] == ["1", "2", "4", "5", "7", "8"]
    flagged = [r for r in data if r["argmin"] == "1"]
    assert len(flagged) == 1
    assert float(flagged[0]["total_us"]) == min(float(r["total_us"]) for r in data)


def test_sweep_single_check_code(capsys, tmp_path):
    f = tmp_path / "one.txt"
    f.write_text("n=3\nZ0 Z1 Z2\n")
    code, out, _ = run(capsys, "sweep", "--code", str(f), "--hw", "linear:2x5",
                       "--compiler", "moveless", "--compiler", "mao")
    assert code == 0
    data = rows(out)
    assert [(r["compiler"], r["budget"]) for r in data] == [("moveless", "1"), ("mao", "1")]


def test_noise_command(capsys, tmp_path):
    report = tmp_path / "r.json"
    report.write_text(json.dumps({"total_us": 20000, "rounds": [10000, 10000], "shuttles": 0,
                                  "swaps": 0, "cools": 0}))
    code, out, _ = run(capsys, "noise", "--report", str(report), "-p", "1e-3")
    assert code == 0
    data = json.loads(out)
    assert list(data) == ["p", "rate_1q", "rate_2q", "rate_meas", "px", "py", "pz",
                          "t_round_s", "T1_s", "T2_s"]
    assert data["T1_s"] == 10.0 and data["px"] == pytest.approx(2.49875e-4, rel=1e-5)
    code, _, err = run(capsys, "noise", "--report", str(report), "-p", "2")
    assert code == 2 and "(0, 1)" in err


def test_empty_suite(capsys, tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"codes": []}))
    code, out, _ = run(capsys, "suite", str(m))
    assert code == 0
    assert out == ",".join(SUITE_COLUMNS) + "\n"


def test_suite_records_partial_failures(capsys, tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"codes": ["repetition:3", "toric:3"], "hardware": ["linear"],
                             "compilers": ["moveless"], "budgets": "ends"}))
    code, out, _ = run(capsys, "suite", str(m))
    assert code == 0
    data = rows(out)
    assert data[0]["code"] == "repetition:3@linear:2x5"
    assert data[0]["speedup_vs_baseline_star"]
    assert data[-1]["total_us"].startswith("error:")


def test_suite_grid_and_linear_pairs(capsys, tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"codes": ["surface:3"], "hardware": ["linear", "grid"],
                             "compilers": ["moveless"], "budgets": [1]}))
    code, out, _ = run(capsys, "suite", str(m), "-j", "2")
    assert code == 0
    assert [r["code"] for r in rows(out)] == ["surface:3@linear:8x5", "surface:3@grid:2x4x5"]


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "qstab.cli", "--help"],
                         capture_output=True, text=True, check=True)
    for sub in ("gen-code", "dump-code", "compile", "simulate", "verify", "noise", "sweep", "suite"):
        assert sub in out.stdout
