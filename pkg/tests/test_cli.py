import json
import subprocess
import sys

import numpy as np
import pytest

import parahaar.checks as checks
import parahaar.cli as cli


def run_cli(args):
    return cli.main(args)


def test_unknown_experiment(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "nope", "seed": 1}))
    assert run_cli(["run", "--config", str(cfg)]) == 1


def test_seed_mandatory(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "theorem1"}))
    assert run_cli(["run", "--config", str(cfg)]) == 1


def test_run_deterministic(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "theorem1", "d": 2, "depth": 4,
                               "p": [1.0, 2.0], "trials": 20, "seed": 11}))
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    assert run_cli(["run", "--config", str(cfg), "--out", str(out_a)]) == 0
    assert run_cli(["run", "--config", str(cfg), "--out", str(out_b)]) == 0
    assert (out_a / "theorem1.csv").read_bytes() == (out_b / "theorem1.csv").read_bytes()
    assert (out_a / "summary.json").read_bytes() == (out_b / "summary.json").read_bytes()
    payload = json.loads((out_a / "summary.json").read_text())
    assert payload["experiment"] == "theorem1"
    assert {"name", "paper_ref", "pass", "worst"} <= set(payload["assertions"][0])


def test_run_median_experiment(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "median-verify", "trials": 60, "seed": 3}))
    out = tmp_path / "m"
    assert run_cli(["run", "--config", str(cfg), "--out", str(out)]) == 0
    payload = json.loads((out / "summary.json").read_text())
    byname = {a["name"]: a for a in payload["assertions"]}
    assert byname["fallbacks"]["pass"] and byname["fallbacks"]["worst"] == 0.0


def test_run_shift_growth(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "shift-growth", "depth": 4,
                               "i_range": [0, 1], "j_range": [0, 1],
                               "trials": 2, "seed": 5, "p": [2.0]}))
    out = tmp_path / "s"
    assert run_cli(["run", "--config", str(cfg), "--out", str(out)]) == 0
    header = (out / "shift_growth.csv").read_text().splitlines()[0]
    assert header == "i,j,seed,p,norm,besov,ratio"


def test_verify_unknown_suite():
    with pytest.raises(KeyError):
        checks.run_suite("bogus")


def test_verify_suite_cli(tmp_path):
    assert run_cli(["verify", "--suite", "shifts", "--out", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "verify.json").read_text())
    assert all(a["pass"] for a in payload["assertions"])


def test_verify_detects_corruption(monkeypatch, capsys):
    # a corrupted wavelet phase must fail the product-rule assertion by name
    import parahaar.checks as chk

    rng = np.random.default_rng(0)
    rec = chk.check_product_rule(rng, corrupt=True)
    assert not rec.passed
    assert rec.name == "haar-product-rule"

    orig = chk.check_product_rule
    monkeypatch.setattr(chk, "check_product_rule", lambda rng: orig(rng, corrupt=True))
    code = run_cli(["verify", "--suite", "exact-identities"])
    out = capsys.readouterr().out
    assert code == 1
    assert "haar-product-rule" in out.splitlines()[-1] or "haar-product-rule" in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "parahaar.cli", "verify",
                           "--suite", "covering"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "covering-dim1" in proc.stdout


def test_calibrate_command(tmp_path):
    out = tmp_path / "cal.json"
    assert run_cli(["calibrate", "--out", str(out), "--trials", "8", "--seed", "1"]) == 0
    calib = json.loads(out.read_text())
    assert "paraproduct_ratio" in calib and "diff_haar_ratio" in calib
    # a freshly measured file is itself a valid verify input
    recs = checks.calibrated_suite(calib, seed=99, trials=8)
    assert all(r.passed for r in recs)
