import csv
import io
import math

import pytest

from idpsim.cli import main
from idpsim.components import MEASURED_CALIBRATION, format_calibration
from idpsim.errors import DomainError
from idpsim.sweep import (
    BASE_FIELDS,
    COUNT_FIELDS,
    RunConfig,
    alpha_grid,
    csv_text,
    emit_csv,
    format_value,
    run_sweep,
    summarize,
)

from conftest import cos2


def parse(text):
    body = [l for l in text.splitlines() if not l.startswith("#")]
    comments = dict(l[2:].split(" = ") for l in text.splitlines() if l.startswith("#"))
    return list(csv.DictReader(io.StringIO("\n".join(body)))), comments


@pytest.fixture(scope="module")
def ideal_sweep():
    return run_sweep(RunConfig())


@pytest.fixture(scope="module")
def calibrated_sweep():
    return run_sweep(RunConfig(model_tag="calibrated"))


def test_alpha_grid_default():
    g = alpha_grid(0, 45, 4)
    assert g[0] == 0 and g[-1] == 45 and len(g) == 13
    assert all(b > a for a, b in zip(g, g[1:]))


def test_alpha_grid_exact_stop():
    assert alpha_grid(0, 45, 5).tolist() == [0, 5, 10, 15, 20, 25, 30, 35, 40, 45]
    assert alpha_grid(45, 45, 1).tolist() == [45]


@pytest.mark.parametrize(
    "kw", [dict(alpha_step=0), dict(alpha_start=10, alpha_stop=5), dict(alpha_stop=50),
           dict(model_tag="other"), dict(n_pulses=-1)]
)
def test_run_config_validation(kw):
    with pytest.raises(DomainError):
        RunConfig(**kw)


def test_ideal_default_sweep(ideal_sweep):
    rows, summary = ideal_sweep
    assert summary["rms_deviation_percent"] / 100 < 1e-9
    for r in rows:
        if r.alpha > 0:
            assert r.error_rate_plus < 1e-9 and r.error_rate_minus < 1e-9
        assert r.status == "ok"
    assert rows[0].error_rate_plus is None


def test_calibrated_default_sweep(calibrated_sweep):
    rows, summary = calibrated_sweep
    assert 0 < summary["mean_error_rate"] < 0.1
    errs = [(r.error_rate_plus + r.error_rate_minus) / 2 for r in rows if r.error_rate_plus is not None]
    assert errs[0] == max(errs)
    assert errs[0] > max(errs[1:])


def test_rms_formula(ideal_sweep):
    rows, _ = ideal_sweep
    rows = [r for r in rows]
    rows[3].simulated_inconclusive += 0.01
    s = summarize(rows)
    assert s["rms_deviation_percent"] == pytest.approx(100 * math.sqrt(1e-4 / len(rows)), rel=1e-6)
    rows[3].simulated_inconclusive -= 0.01


def test_csv_header_and_values(ideal_sweep):
    rows, summary = ideal_sweep
    table, comments = parse(csv_text(rows, summary))
    assert tuple(table[0].keys()) == BASE_FIELDS
    assert [float(r["alpha"]) for r in table] == [r.alpha for r in rows]
    assert table[0]["error_rate_plus"] == ""
    for r in table:
        assert float(r["simulated_inconclusive"]) == pytest.approx(cos2(float(r["alpha"])), abs=1e-8)
    assert comments["model"] == "ideal"
    assert comments["n_rows"] == "13"


def test_empty_sweep():
    text = csv_text([], summarize([]))
    lines = text.splitlines()
    assert lines[0] == ",".join(BASE_FIELDS)
    assert all(l.startswith("#") for l in lines[1:])


def test_single_row_45():
    rows, summary = run_sweep(RunConfig(alpha_start=45, alpha_stop=45))
    table, _ = parse(csv_text(rows, summary))
    assert len(table) == 1
    assert table[0]["ideal_inconclusive"] == "0.000000000"


def test_format_value():
    assert format_value(None) == ""
    assert format_value(3) == "3"
    assert format_value(1e-12) == "0.000000000"
    assert format_value(0.70710678118) == "0.707106781"
    assert format_value(12.2348956) == "12.2348956"


def test_monte_carlo_columns_and_determinism(tmp_path):
    cfg = RunConfig(alpha_start=20, alpha_stop=25, alpha_step=2.5, n_pulses=1_000_000, seed=7)
    a = emit_csv(*run_sweep(cfg), tmp_path / "a.csv").read_bytes()
    b = emit_csv(*run_sweep(cfg), tmp_path / "b.csv").read_bytes()
    assert a == b
    table, _ = parse(a.decode())
    assert tuple(table[0].keys()) == BASE_FIELDS + COUNT_FIELDS
    row = next(r for r in table if float(r["alpha"]) == 22.5)
    n = 166000
    frac = float(row["mc_inconclusive"])
    assert abs(frac - math.sqrt(0.5)) < 3 * math.sqrt(0.5 * (1 - math.sqrt(0.5)) / n) + 3 / math.sqrt(n)
    c = run_sweep(RunConfig(alpha_start=20, alpha_stop=25, alpha_step=2.5, n_pulses=1_000_000, seed=8))
    assert emit_csv(*c, tmp_path / "c.csv").read_bytes() != a


# -- command line ------------------------------------------------------------------------

def test_cli_sweep_stdout(capsys):
    assert main(["sweep", "--alpha-start", "10", "--alpha-stop", "20", "--alpha-step", "5"]) == 0
    table, _ = parse(capsys.readouterr().out)
    assert [float(r["alpha"]) for r in table] == [10, 15, 20]


def test_cli_flags_before_subcommand(tmp_path):
    out = tmp_path / "s.csv"
    assert main(["--model", "calibrated", "--alpha-start", "40", "--alpha-stop", "40", "sweep", "--out", str(out)]) == 0
    table, comments = parse(out.read_text())
    assert table[0]["model_tag"] == "calibrated"
    assert 0 < float(table[0]["error_rate_plus"]) < 0.05


def test_cli_calibration_file(tmp_path):
    cal = tmp_path / "pbs.cal"
    cal.write_text(format_calibration(MEASURED_CALIBRATION), encoding="utf-8")
    out = tmp_path / "s.csv"
    args = ["sweep", "--model", "calibrated", "--alpha-start", "30", "--alpha-stop", "30"]
    assert main(args + ["--calibration", str(cal), "--out", str(out)]) == 0
    assert main(args + ["--out", str(tmp_path / "d.csv")]) == 0
    assert out.read_bytes() == (tmp_path / "d.csv").read_bytes()


def test_cli_bad_inputs(tmp_path, capsys):
    assert main(["sweep", "--alpha-step", "0"]) == 2
    assert main(["sweep", "--model", "calibrated", "--calibration", str(tmp_path / "missing.cal")]) == 2
    bad = tmp_path / "bad.cal"
    bad.write_text("t_hh = 1\n")
    assert main(["sweep", "--model", "calibrated", "--calibration", str(bad)]) == 2
    with pytest.raises(SystemExit):
        main(["sweep", "--model", "other"])


def test_cli_verify_exit_code(monkeypatch, capsys):
    import idpsim.verify as v

    ok = v.CheckResult("fine", True, "x")
    bad = v.CheckResult("broken", False, "y")
    monkeypatch.setattr(v, "run_all", lambda: [ok, ok])
    assert main(["verify"]) == 0
    monkeypatch.setattr(v, "run_all", lambda: [ok, bad])
    assert main(["verify"]) == 1
    assert "1/2 checks passed" in capsys.readouterr().out
