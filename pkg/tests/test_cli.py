"""End-to-end CLI flows and exit codes."""

import csv

import numpy as np
import pytest

from tailtest.cli import load_config, main
from tailtest.dataio import load_returns, load_series, write_series
from tailtest.rng import RngStream
from tailtest.series import TimeSeries


@pytest.fixture
def returns_csv(tmp_path):
    from datetime import date, timedelta

    gen = RngStream(950).generator()
    n = 1200
    values = gen.standard_normal(n) * 0.01
    values[values == 0.0] = 0.001
    start = date(2019, 1, 1)
    dates = tuple((start + timedelta(days=d)).isoformat() for d in range(n))
    series = TimeSeries(values, dates)
    path = tmp_path / "returns.csv"
    write_series(path, series, value_header="return")
    return path


def test_simulate_then_hill_and_ci(tmp_path):
    sim = tmp_path / "sim.csv"
    assert main(["simulate", "--family", "stable-sym", "--kappa", "1.5",
                 "--n", "2000", "--burn-in", "1000", "--seed", "3",
                 "--out", str(sim)]) == 0
    assert len(load_series(sim)) == 2000

    hill = tmp_path / "hill.csv"
    assert main(["hill", "--input", str(sim), "--out", str(hill)]) == 0
    with open(hill) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["k", "kappa_hat"]
    assert len(rows) > 10

    assert main(["ci", "--input", str(sim), "--out", str(tmp_path / "ci.csv")]) == 0


def test_simulate_deterministic_in_seed(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["simulate", "--family", "stable-asym", "--kappa", "1.3", "--n", "500",
            "--burn-in", "100", "--seed", "11"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_mc_size_flow(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text(
        "kappas = 1.5\n"
        "sample_sizes = 300\n"
        "replications = 10\n"
        "noise = stable-sym\n"
        "tests = DM, Alg1\n"
        "burn_in = 200\n"
        "seed = 5\n"
    )
    out = tmp_path / "out.csv"
    assert main(["mc-size", "--config", str(cfg), "--out", str(out)]) == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["kappa", "n", "delta", "test", "reject_pct", "mc_se", "M", "seed"]
    assert len(rows) == 3


def test_config_unknown_key_rejected(tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("kappa_grid = 1.5\nsample_sizes = 300\n")
    with pytest.raises(ValueError, match="unknown key"):
        load_config(cfg)
    out = tmp_path / "out.csv"
    assert main(["mc-size", "--config", str(cfg), "--out", str(out)]) == 1


def test_epa_flow_with_native_and_external_methods(tmp_path, returns_csv):
    returns = load_returns(returns_csv).series
    forecasts = tmp_path / "forecasts.csv"
    gen = RngStream(951).generator()
    with open(forecasts, "w") as fh:
        fh.write("date,noisy\n")
        for stamp in returns.timestamps:
            fh.write(f"{stamp},{-0.016 + 0.002 * gen.standard_normal()}\n")
    out = tmp_path / "epa.csv"
    code = main(["epa", "--returns", str(returns_csv), "--forecasts", str(forecasts),
                 "--rw", "125,250", "--tau", "0.05", "--out", str(out)])
    assert code == 0
    with open(out) as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "row_method"
    assert len(rows) == 1 + 3 * 2  # ordered pairs of three methods


def test_spa_flow(tmp_path, returns_csv):
    code = main(["spa", "--returns", str(returns_csv), "--rw", "125,250,500",
                 "--benchmark", "RW-500", "--tau", "0.05",
                 "--out", str(tmp_path / "spa.csv")])
    assert code == 0


def test_missing_file_is_validation_error(tmp_path):
    assert main(["ci", "--input", str(tmp_path / "nope.csv")]) == 1


def test_bad_family_is_validation_error(tmp_path):
    assert main(["simulate", "--family", "levy-flight", "--n", "100",
                 "--out", str(tmp_path / "x.csv")]) == 1
