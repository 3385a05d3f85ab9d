import json

import pytest

from stable_wavelet.cli import main, resolve_config
from stable_wavelet.errors import ConfigurationError


@pytest.fixture
def out(tmp_path, monkeypatch):
    monkeypatch.delenv("STABLE_WAVELET_OUT", raising=False)
    return tmp_path / "out"


def run(out, *args):
    return main([*args, "--out-dir", str(out)])


def test_selfcheck(out):
    assert run(out, "selfcheck", "--lemma53-n", "2000") == 0
    rep = json.loads((out / "selfcheck.json").read_text())
    assert rep["report"]["passed"]
    assert rep["command"] == "selfcheck"


def test_synth_deterministic(out, tmp_path):
    args = ("synth", "--n", "1024", "--seed", "5")
    assert run(out, *args) == 0
    first = (out / "path.csv").read_text()
    assert len(first.splitlines()) == 1026
    assert run(tmp_path / "again", *args) == 0
    assert (tmp_path / "again" / "path.csv").read_text() == first
    meta = json.loads((out / "path.json").read_text())
    assert meta["seed"] == 5


def test_synth_rejects_bad_hurst(out, capsys):
    assert run(out, "synth", "--hurst", "1.2") == 2
    assert "(0, 1)" in capsys.readouterr().err


def test_dwt_and_estimate_pipeline(out):
    assert run(out, "synth", "--n", "4096") == 0
    assert run(out, "dwt", "--mode", "pyramidal", "--input", str(out / "path.csv"),
               "--j-max", "4") == 0
    assert run(out, "estimate", "--input", str(out / "coeffs.csv")) == 0
    est = json.loads((out / "estimate.json").read_text())
    assert 0.3 < est["result"]["H_hat"] < 1.1
    assert run(out, "estimate", "--input", str(out / "coeffs.csv"), "--method", "power",
               "--beta", "0.9") == 2


def test_missing_input(out):
    assert run(out, "dwt", "--mode", "pyramidal", "--input", str(out / "nope.csv")) == 2


def test_output_cannot_escape(out):
    assert run(out, "selfcheck", "--output", "../x.json") == 2
    assert run(out, "selfcheck", "--output", "/tmp/x.json") == 2


def test_bounds_lemma52(out):
    assert run(out, "bounds", "--check", "lemma52") == 0


def test_config_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("STABLE_WAVELET_OUT", str(tmp_path / "env"))
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"R": 77, "alpha": 1.4, "out_dir": "fromfile"}))
    import os
    eff = resolve_config("clt", {"config_file": str(cfg), "alpha": 1.7}, os.environ)
    assert eff["R"] == 77
    assert eff["alpha"] == 1.7
    assert eff["out_dir"] == str(tmp_path / "env")
    cfg.write_text(json.dumps({"bogus": 1}))
    with pytest.raises(ConfigurationError):
        resolve_config("clt", {"config_file": str(cfg)}, {})


def test_clt_rerun_from_output(out, tmp_path):
    assert run(out, "clt", "--preset", "iid-bounded", "--format", "csv", "--seed", "3") == 0
    assert (out / "clt.csv").exists()
    first = json.loads((out / "clt.json").read_text())
    again = tmp_path / "again"
    assert main(["clt", "--config", str(out / "clt.json"), "--out-dir", str(again)]) == 0
    second = json.loads((again / "clt.json").read_text())
    for d in (first, second):
        d["report"].pop("runtime")
        d["config"].pop("out_dir", None)
    assert first["report"] == second["report"]
