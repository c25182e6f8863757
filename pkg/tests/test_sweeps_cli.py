import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from divprog.cli import main
from divprog.errors import ConfigInvalid
from divprog.kloosterman import kloosterman
from divprog.mainterm import error_vector
from divprog.sweeps import (
    ExperimentConfig,
    choose_y,
    emit_report,
    exceptional_count_bound,
    interval_abs_error_bound,
    interval_abs_regime,
    interval_signed_error_bound,
    interval_signed_regime,
    run_theorem_sweep,
    set_abs_error_bound,
    set_abs_regime,
)
from divprog.tausieve import divisor_sum_progressions, total_divisor_sum


# ---------------------------------------------------------------- bounds

def test_signed_bound_spec_point():
    A, X, q = 32, 10**6, 10**4
    want = A * X**0.5 * q**-0.5 + A**0.125 * X**0.25 * q**0.5 + A**0.5 * X**0.25 * q**0.25
    assert math.isclose(interval_signed_error_bound(A, X, q), want, rel_tol=1e-12)


def test_abs_bound_terms():
    A, X, p = 16, 10**5, 499
    want = (A * X**0.5 / p**0.5 + A**1.5 * X**0.5 / p**0.625
            + A**0.5 * X**0.5 / p**0.125 + A ** (5 / 6) * X ** (5 / 18) * p ** (11 / 72))
    assert math.isclose(interval_abs_error_bound(A, X, p), want, rel_tol=1e-12)
    want_set = A**0.75 * X**0.25 * p**0.25 + A ** (2 / 3) * X ** (1 / 3)
    assert math.isclose(set_abs_error_bound(A, X, p), want_set, rel_tol=1e-12)
    assert math.isclose(
        exceptional_count_bound(X, p, 0.1),
        max(p * X ** (-1 / 3 + 0.4), X**0.3),
        rel_tol=1e-12,
    )


def test_regime_predicates():
    # X = 10^5: X^(4/7) ~ 721, X^(19/31) ~ 1162
    X = 10**5
    assert interval_abs_regime(16, X, 997)
    assert not interval_abs_regime(16, X, 499)      # below X^(4/7)
    assert not interval_abs_regime(2000, X, 997)    # A > p
    assert not interval_abs_regime(16, X, 1001)     # 7*11*13, not prime
    assert interval_signed_regime(16, X, 2000)
    assert not interval_signed_regime(16, X, 1100)  # below X^(19/31)
    assert set_abs_regime(100, X, 499)
    assert not set_abs_regime(2, X, 499)            # p > A X^(1/3-eps)


def test_choose_y_policies():
    y, clamped = choose_y("fixed", 10**4, 20, value=300.0)
    assert y == 300.0 and not clamped
    y, clamped = choose_y("sqrt_qx", 10**4, 20)
    assert math.isclose(y, math.sqrt(20 * (10**4) ** 1.05), rel_tol=1e-12)
    y, clamped = choose_y("fixed", 100, 5, value=5000.0)
    assert y == 50.0 and clamped
    y, clamped = choose_y("set_abs", 10**4, 101, A=10)
    assert math.isclose(y, (10**4) ** (1 / 3) * 101 / 10 ** (1 / 3), rel_tol=1e-12)
    assert not clamped
    with pytest.raises(ConfigInvalid):
        choose_y("fixed", 100, 5)
    with pytest.raises(ConfigInvalid):
        choose_y("unknown", 100, 5)


# ---------------------------------------------------------------- config

def _write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return p


BASE = {
    "experiment": "interval_abs",
    "x_grid": [2000],
    "modulus_grid": [101],
    "sets": {"kind": "interval", "lengths": [8], "offsets": [1]},
    "seed": 5,
}


def test_config_round_trip(tmp_path):
    cfg = ExperimentConfig.from_json(_write(tmp_path, BASE))
    assert cfg.experiment == "interval_abs"
    assert cfg.lengths == (8,)
    assert cfg.seed == 5


@pytest.mark.parametrize(
    "mutate,needle",
    [
        (lambda d: d.update(experiment="quux"), "experiment"),
        (lambda d: d.update(x_grid=[]), "x_grid"),
        (lambda d: d.update(modulus_grid=[1]), "modulus_grid"),
        (lambda d: d.update(modulus_grid=[5000]), "exceeds"),
        (lambda d: d.update(sets={"kind": "interval", "lengths": []}), "lengths"),
        (lambda d: d.update(sets={"kind": "banana", "lengths": [4]}), "set_kind"),
        (lambda d: d.update(bogus_key=1), "unknown"),
        (lambda d: d.update(thresholds={"ratio_nope": 1}), "thresholds"),
    ],
)
def test_config_validation_messages(tmp_path, mutate, needle):
    doc = json.loads(json.dumps(BASE))
    mutate(doc)
    with pytest.raises(ConfigInvalid) as exc:
        ExperimentConfig.from_json(_write(tmp_path, doc))
    assert needle in str(exc.value)


def test_config_syntax_error_cites_line(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{\n "experiment": "set_abs",\n parse error here\n}')
    with pytest.raises(ConfigInvalid) as exc:
        ExperimentConfig.from_json(p)
    assert ":3:" in str(exc.value)


def test_exceptional_requires_kappas_and_primes(tmp_path):
    doc = {"experiment": "exceptional", "x_grid": [2000], "modulus_grid": [101]}
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_json(_write(tmp_path, doc))
    doc["kappas"] = [0.1]
    cfg = ExperimentConfig.from_json(_write(tmp_path, doc))
    bad = ExperimentConfig(
        experiment="exceptional", x_grid=(2000,), modulus_grid=(100,), kappas=(0.1,)
    )
    with pytest.raises(ConfigInvalid):
        run_theorem_sweep(bad, "/tmp/sweep_should_not_write")
    assert cfg.kappas == (0.1,)


# ---------------------------------------------------------------- reports

def test_emit_report_empty_rows(tmp_path):
    path = tmp_path / "empty.csv"
    emit_report([], "csv", path, seed=3)
    text = path.read_text()
    assert text.startswith("# seed=3\n")
    assert len(text.strip().splitlines()) == 1  # header comment only


def test_emit_report_formats(tmp_path):
    rows = [{"a": 1, "val": 0.1234567890123456, "flag": True},
            {"a": 2, "val": float(np.float64(2.5)), "flag": False}]
    cpath = tmp_path / "r.csv"
    emit_report(rows, "csv", cpath, seed=1)
    lines = cpath.read_text().splitlines()
    assert lines[0] == "# seed=1"
    assert lines[1] == "a,val,flag"
    assert lines[2] == "1,0.123456789012,true"
    assert lines[3] == "2,2.5,false"
    jpath = tmp_path / "r.json"
    emit_report(rows, "json", jpath, seed=1)
    doc = json.loads(jpath.read_text())
    assert doc["seed"] == 1
    assert doc["rows"][0]["a"] == 1


def test_emit_report_byte_stable(tmp_path):
    rows = [{"x": i, "y": math.sqrt(i)} for i in range(20)]
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_report(rows, "csv", p1, seed=9)
    emit_report(rows, "csv", p2, seed=9)
    assert p1.read_bytes() == p2.read_bytes()


# ----------------------------------------------------------------- sweeps

def test_sweep_determinism_and_totality(tmp_path):
    doc = {
        "experiment": "set_abs",
        "x_grid": [3000, 2000],
        "modulus_grid": [101, 61],
        "sets": {"kind": "random", "lengths": [10, "sqrt"]},
        "seed": 21,
    }
    cfg = ExperimentConfig.from_json(_write(tmp_path, doc))
    r1 = run_theorem_sweep(cfg, tmp_path / "run1")
    r2 = run_theorem_sweep(cfg, tmp_path / "run2")
    for a, b in zip(r1.paths, r2.paths):
        with open(a, "rb") as fa, open(b, "rb") as fb:
            assert fa.read() == fb.read()
    # totality: every row carries every regime flag, no row dropped
    assert len(r1.rows) == 2 * 2 * 2
    for row in r1.rows:
        for key in ("in_regime_interval_abs", "in_regime_interval_signed", "in_regime_set_abs"):
            assert isinstance(row[key], (bool, np.bool_))
    # grids are traversed sorted regardless of config order
    xs = [row["X"] for row in r1.rows]
    assert xs == sorted(xs)


def test_sweep_interval_e_matches_error_vector(tmp_path):
    doc = dict(BASE, x_grid=[2500], modulus_grid=[101])
    cfg = ExperimentConfig.from_json(_write(tmp_path, doc))
    res = run_theorem_sweep(cfg, tmp_path)
    row = res.rows[0]
    R = error_vector(2500, 101).R
    expect_E = math.fsum(float(R[a]) for a in range(2, 10))  # interval {2..9}
    assert abs(row["E"] - expect_E) < 1e-9
    expect_D = math.fsum(abs(float(R[a])) for a in range(2, 10))
    assert abs(row["D"] - expect_D) < 1e-9


def test_sweep_exceptional_counts(tmp_path):
    doc = {
        "experiment": "exceptional",
        "x_grid": [3000],
        "modulus_grid": [101],
        "kappas": [0.05, 0.2],
        "seed": 1,
    }
    cfg = ExperimentConfig.from_json(_write(tmp_path, doc))
    res = run_theorem_sweep(cfg, tmp_path)
    from divprog.mainterm import exceptional_set

    for row in res.rows:
        assert row["count"] == len(exceptional_set(3000, 101, row["kappa"]))
        assert row["ratio_exceptional"] == row["count"] / row["rhs_exceptional"]


def test_sweep_breach_reporting(tmp_path):
    doc = dict(BASE, thresholds={"ratio_interval_abs": 1e-9})
    cfg = ExperimentConfig.from_json(_write(tmp_path, doc))
    res = run_theorem_sweep(cfg, tmp_path)
    assert res.breaches
    assert "ratio_interval_abs" in res.breaches[0]


# ------------------------------------------------------------------- CLI

def test_cli_tau_all_and_single(tmp_path, capsys):
    rc = main(["--out-dir", str(tmp_path), "tau", "--x", "500", "--q", "9"])
    assert rc == 0
    out = capsys.readouterr().out.strip()
    with open(out) as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    assert len(rows) == 9
    vec = divisor_sum_progressions(500, 9)
    assert int(rows[4]["S"]) == vec[4]
    assert sum(int(r["S"]) for r in rows) == total_divisor_sum(500)

    rc = main(["tau", "--x", "500", "--q", "9", "--a", "4"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["S"] == vec[4]


def test_cli_errors_set_file(tmp_path, capsys):
    listing = tmp_path / "set.txt"
    listing.write_text("1\n5\n8\n")
    rc = main(["--out-dir", str(tmp_path), "errors", "--x", "2000", "--q", "9",
               "--set", str(listing)])
    assert rc == 0
    out = capsys.readouterr().out.strip()
    with open(out) as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    assert [int(r["a"]) for r in rows] == [1, 5, 8]
    for r in rows:
        assert abs(float(r["S"]) - float(r["M"]) - float(r["R"])) < 1e-6


def test_cli_kloosterman_scalar_and_batch(tmp_path, capsys):
    rc = main(["kloosterman", "--d", "13", "--m", "2", "--n", "5"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["value"] - kloosterman(13, 2, 5)) < 1e-9
    assert doc["weil_ok"] is True

    rc = main(["--out-dir", str(tmp_path), "kloosterman", "--d", "13", "--m", "2",
               "--batch-a", "0,12"])
    assert rc == 0
    out = capsys.readouterr().out.strip()
    with open(out) as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    assert len(rows) == 13
    for r in rows:
        assert abs(float(r["K"]) - kloosterman(13, 2, int(r["a"]))) < 1e-9


def test_cli_bilinear_fast_flag(capsys):
    rc = main(["--seed", "3", "bilinear", "--d", "101", "--I", "0,16", "--J", "0,16"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) >= {"value_re", "value_im", "bound_21", "bound_22", "ratios"}
    rc = main(["--seed", "3", "bilinear", "--d", "101", "--I", "0,16", "--J", "0,16",
               "--fast"])
    assert rc == 0
    doc_fast = json.loads(capsys.readouterr().out)
    assert doc_fast["ratios"]["general"] >= 0


def test_cli_moment4_and_congcount(capsys):
    rc = main(["moment4", "--p", "11", "--k", "1", "--h", "4"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["moment"] - 145.0) < 1e-9
    rc = main(["congcount", "--p", "5", "--boxes", "1,4,1,4,1,4,1,4"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["count"] == 64


def test_cli_poisson_check(capsys):
    rc = main(["poisson-check", "--q", "7", "--z", "3"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["residual"] < 1e-8
    rc = main(["poisson-check", "--q", "7", "--chi", "2"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["residual"] < 1e-8
    assert abs(math.hypot(doc["eta_re"], doc["eta_im"]) - 1.0) < 1e-10


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"experiment": "nope"}')
    assert main(["sweep", "--config", str(bad)]) == 2
    capsys.readouterr()

    doc = dict(BASE, thresholds={"ratio_interval_abs": 1e-9})
    cfg = tmp_path / "breach.json"
    cfg.write_text(json.dumps(doc))
    assert main(["--out-dir", str(tmp_path), "sweep", "--config", str(cfg)]) == 3
    capsys.readouterr()

    assert main(["errors", "--x", "100", "--q", "7", "--set", "not-a-thing"]) == 2
    capsys.readouterr()

    assert main(["kloosterman", "--d", "5", "--m", "1"]) == 2
    capsys.readouterr()


def test_cli_voronoi_check(tmp_path, capsys):
    rc = main(["--out-dir", str(tmp_path), "voronoi-check", "--x", "2000", "--q", "12",
               "--y", "320", "--a", "1,5"])
    assert rc == 0
    out = capsys.readouterr().out.strip()
    with open(out) as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    assert [int(r["a"]) for r in rows] == [1, 5]
    for r in rows:
        assert abs(float(r["residual"])) <= float(r["budget"])


def test_cli_sweep_seed_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(dict(BASE, sets={"kind": "random", "lengths": [6]})))
    assert main(["--out-dir", str(tmp_path / "o1"), "sweep", "--config", str(cfg)]) == 0
    capsys.readouterr()
    assert main(["--out-dir", str(tmp_path / "o2"), "sweep", "--config", str(cfg),
                 "--seed-override", "99"]) == 0
    capsys.readouterr()
    b1 = (tmp_path / "o1" / "sweep_interval_abs.csv").read_text()
    b2 = (tmp_path / "o2" / "sweep_interval_abs.csv").read_text()
    assert b1.splitlines()[0] == "# seed=5"
    assert b2.splitlines()[0] == "# seed=99"


def test_console_script_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "divprog.cli", "tau", "--x", "100", "--q", "4", "--a", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["q"] == 4
