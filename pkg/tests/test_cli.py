import csv
import subprocess
import sys

import pytest

from fdswipt.cli import build_parser, run


def _data_rows(path):
    lines = [l for l in path.read_text().splitlines() if not l.startswith("#")]
    return list(csv.DictReader(lines))


def test_solve_prints_summary(capsys):
    assert run(["solve", "--channel", "1,1,0.3,0.3", "--p-max-db", "10", "--q-bar", "0.5"]) == 0
    out = capsys.readouterr().out
    for key in ("P1=", "rho1=", "eta", "C21=", "Q21=", "outer iterations"):
        assert key in out


def test_solve_unsatisfiable_threshold(capsys):
    assert run(["solve", "--q-bar", "100"]) == 1
    assert "infeasible" in capsys.readouterr().err


def test_solve_single_row_csv(tmp_path):
    out = tmp_path / "one.csv"
    assert run(["solve", "--seed", "3", "--out", str(out)]) == 0
    assert len(_data_rows(out)) == 1


def test_bad_channel_spec_exits_nonzero(capsys):
    assert run(["solve", "--channel", "1,2"]) == 2
    assert "four" in capsys.readouterr().err


def test_unwritable_output(tmp_path, capsys):
    bad = tmp_path / "nope" / "out.csv"
    assert run(["sweep-pmax", "--trials", "1", "--p-max-db", "0", "--out", str(bad)]) == 2
    assert "nope" in capsys.readouterr().err


def test_sweep_pmax_trend_and_header(tmp_path):
    out = tmp_path / "budget.csv"
    assert run(["sweep-pmax", "--trials", "20", "--seed", "5", "--out", str(out)]) == 0
    text = out.read_text()
    for flag in ("kappa=0.3", "seed=5", "trials=20", "delta_eta=0.05", "alt_tol=0.0001"):
        assert f"# {flag}" in text
    rows = _data_rows(out)
    assert len(rows) == 6 * 2 * 2
    for q in ("0.1", "0.5"):
        joint = [float(r["mean_sum_rate_bits"]) for r in rows
                 if r["scheme"] == "joint" and r["q_bar"] == q]
        assert joint == sorted(joint)


def test_sweep_rsi_writes_one_file_per_budget(tmp_path):
    out = tmp_path / "rsi.csv"
    assert run(["sweep-rsi", "--trials", "2", "--rsi-db", "0", "10", "--p-max-db", "10", "20",
                "--out", str(out)]) == 0
    for p in ("10", "20"):
        f = tmp_path / f"rsi_pmax{p}dB.csv"
        assert f"# p_max_db={p}" in f.read_text()
        assert [r["x_value"] for r in _data_rows(f)] == ["0", "0", "10", "10"]


def test_oracle_check_passes(capsys):
    assert run(["oracle-check", "--instances", "20", "--seed", "7"]) == 0
    out = capsys.readouterr().out
    deficit = float(out.split("max_deficit=")[1].split()[0])
    assert deficit <= 0.05


def test_parser_requires_subcommand():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fdswipt.cli", "solve", "--channel",
                           "1,1,0.3,0.3"], capture_output=True, text=True)
    assert proc.returncode == 0 and "sum=" in proc.stdout
