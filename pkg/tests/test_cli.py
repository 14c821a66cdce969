import csv
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from diffentropy.cli import build_model, dump_config, load_config, main
from diffentropy.models import CIRParams, GIGParams


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def value_line(out):
    return float(next(line.split()[1] for line in out.splitlines() if line.startswith("value")))


def test_entropy_examples(capsys):
    code, out, _ = run(capsys, "entropy", "--set", "family=ou")
    assert code == 0 and abs(value_line(out) - 1.4189385) < 1e-7
    code, out, _ = run(capsys, "entropy", "--set", "family=skewt", "--set", "gamma=3", "--set", "beta=3", "--measure", "song")
    assert code == 0 and abs(value_line(out) - 0.79106) < 1e-5
    code, out, _ = run(capsys, "entropy", "--set", "family=jacobi", "--set", "a=-0.5", "--set", "mu=0.5", "--measure", "renyi", "--alpha", "2")
    assert code == 0 and abs(value_line(out)) < 1e-12


def test_entropy_json_and_csv(capsys):
    code, out, _ = run(capsys, "entropy", "--set", "family=cir", "--set", "mu=2", "--measure", "renyi", "--alpha", "2", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["method"] == "closed"
    assert_allclose(rec["value"], 2 * math.log(2), rtol=1e-15)
    code, out, _ = run(capsys, "entropy", "--set", "family=cir", "--set", "mu=2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["measure"] == "shannon" and "\r" not in out
    # 17 significant digits round-trip exactly
    assert float(rows[0]["value"]) == CIRParams(mu=2.0).shannon()


def test_entropy_numeric_song_for_gig(capsys):
    code, out, _ = run(capsys, "entropy", "--set", "family=gig", "--set", "theta1=1.5", "--set", "theta2=2", "--set", "theta3=0.5", "--measure", "song")
    assert code == 0 and "quadrature" in out


def test_entropy_alpha_rules(capsys):
    assert run(capsys, "entropy", "--set", "family=ou", "--measure", "renyi")[0] == 1
    assert run(capsys, "entropy", "--set", "family=ou", "--alpha", "2")[0] == 1
    assert run(capsys, "entropy", "--set", "family=ou", "--measure", "renyi", "--alpha", "1")[0] == 1


def test_spectrum_csv(capsys, tmp_path):
    path = tmp_path / "ou.csv"
    code, _, _ = run(capsys, "spectrum", "--set", "family=ou", "--alpha-min", "0.5", "--alpha-max", "4", "--steps", "8", "--out", str(path))
    assert code == 0
    raw = path.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.DictReader(io.StringIO(raw.decode())))
    assert list(rows[0]) == ["alpha", "renyi", "method", "err", "flag"]
    assert len(rows) == 9
    vals = np.array([float(r["renyi"]) for r in rows])
    assert np.all(np.diff(vals) < 0)


def test_spectrum_uniform_and_divergent(capsys):
    code, out, _ = run(capsys, "spectrum", "--set", "family=jacobi", "--set", "a=-0.5", "--set", "mu=0.5", "--alpha-min", "0.5", "--alpha-max", "4", "--steps", "4")
    assert code == 0
    assert all(abs(float(r["renyi"])) < 1e-12 for r in csv.DictReader(io.StringIO(out)))
    code, out, _ = run(capsys, "spectrum", "--set", "family=skewt", "--set", "gamma=0.5", "--set", "beta=0.5", "--alpha-min", "0.3", "--alpha-max", "3", "--steps", "5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    for r in rows:
        if float(r["alpha"]) <= 0.5:
            assert r["flag"] == "divergent" and r["renyi"] == "" and r["err"] == ""
        else:
            assert math.isfinite(float(r["renyi"]))


def test_spectrum_json_and_bad_grid(capsys):
    code, out, _ = run(capsys, "spectrum", "--set", "family=ou", "--alpha-min", "0.5", "--alpha-max", "2", "--steps", "4", "--format", "json")
    assert code == 0 and len(json.loads(out)) == 5
    assert run(capsys, "spectrum", "--set", "family=ou", "--alpha-min", "2", "--alpha-max", "1")[0] == 1
    assert run(capsys, "spectrum", "--set", "family=ou", "--steps", "1")[0] == 1


def test_validate_gig(capsys):
    code, out, _ = run(capsys, "validate", "--set", "family=gig", "--set", "theta1=-0.5", "--set", "theta2=1", "--set", "theta3=1", "--tol", "1e-6", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0])[:5] == ["alpha", "closed", "numeric", "abs_diff", "pass"]
    assert {r["pass"] for r in rows} == {"true"}
    assert {float(r["alpha"]) for r in rows if r["measure"] == "renyi"} == {0.6, 2.0, 3.0}


def test_validate_hyperbolic(capsys):
    code, out, _ = run(capsys, "validate", "--set", "family=hyperbolic", "--set", "gamma=1", "--set", "beta=0", "--set", "delta=1", "--format", "json")
    rows = json.loads(out)
    assert code == 0
    assert all(r["pass"] == "true" for r in rows if r["measure"] in ("renyi", "shannon", "song"))
    info = [r for r in rows if r["measure"] == "song-published"]
    assert info and info[0]["pass"] == "paper-formula-informational" and info[0]["abs_diff"] > 0.8


def test_validate_pearson4_informational(capsys):
    code, out, _ = run(capsys, "validate", "--set", "family=pearson4", "--set", "a=1", "--set", "mu=0", "--format", "json")
    rows = json.loads(out)
    assert code == 0
    info = [r for r in rows if r["measure"] == "shannon-published"]
    assert len(info) == 1 and info[0]["pass"] == "paper-formula-informational" and info[0]["abs_diff"] > 1
    assert all(r["pass"] == "true" for r in rows if r["measure"] == "shannon")


def test_validate_text_and_failures(capsys):
    code, out, _ = run(capsys, "validate", "--set", "family=cir", "--set", "mu=2")
    assert code == 0 and "checks passed" in out
    # an impossible tolerance turns quadrature noise into failures
    assert run(capsys, "validate", "--set", "family=pearson4", "--set", "a=0.5", "--set", "mu=0.8", "--tol", "0")[0] == 3
    assert run(capsys, "validate", "--set", "family=custom", "--set", "drift=-x", "--set", "squared_diffusion=2")[0] == 1
    assert run(capsys, "validate", "--set", "family=ou", "--alphas", "a,b")[0] == 1


def test_divergence(capsys):
    code, out, _ = run(capsys, "divergence", "--set", "family=ou", "--set-g", "family=ou", "--alpha", "0.5", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and abs(rec["renyi_divergence"]) < 1e-12 and abs(rec["power_divergence"]) < 1e-12
    code, out, _ = run(capsys, "divergence", "--set", "family=ou", "--set-g", "family=ou", "--set-g", "mu=1", "--alpha", "0.5", "--format", "json")
    rec = json.loads(out)
    assert_allclose(rec["renyi_divergence"], 0.5, rtol=1e-10)
    assert_allclose(rec["power_divergence"], 0.4700123897, rtol=1e-9)
    # f normal and g Cauchy: f^2 / g is integrable
    code, out, _ = run(capsys, "divergence", "--set", "family=ou", "--set-g", "family=skewt", "--set-g", "gamma=0.5", "--set-g", "beta=0.5", "--alpha", "2", "--format", "json")
    assert code == 0 and 0 < json.loads(out)["renyi_divergence"] < math.inf
    assert run(capsys, "divergence", "--set", "family=skewt", "--set", "gamma=0.5", "--set", "beta=0.5", "--set-g", "family=ou", "--alpha", "2")[0] == 2
    assert run(capsys, "divergence", "--set", "family=ou", "--set-g", "family=ou")[0] == 1


def test_custom_and_expfam_models(capsys):
    code, out, _ = run(capsys, "entropy", "--set", "family=custom", "--set", "drift=-theta*(x - m)", "--set", "squared_diffusion=2*theta",
                       "--set", "theta=0.7", "--set", "m=2", "--format", "json")
    assert code == 0 and abs(json.loads(out)["value"] - 1.4189385332046727) < 1e-9
    code, out, _ = run(capsys, "entropy", "--set", "family=custom", "--set", "drift=-(x - 0.5)", "--set", "squared_diffusion=2*x",
                       "--set", "state_space=0,inf", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and any("not_ergodic" in n for n in rec["notes"])
    code, out, _ = run(capsys, "entropy", "--set", "family=expfam", "--set", 'b=["1", "-x"]', "--set", "theta=[1, 0.5]",
                       "--set", "squared_diffusion=x", "--set", "state_space=0,inf", "--format", "json")
    assert code == 0 and abs(json.loads(out)["value"] - CIRParams(mu=2.0).shannon()) < 1e-8


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "entropy", "--set", "family=nope")[0] == 1
    with pytest.raises(SystemExit) as info:
        main(["entropy", "--bogus"])
    assert info.value.code == 1
    assert run(capsys, "entropy", "--set", "family=custom", "--set", "drift=__import__('os')", "--set", "squared_diffusion=1")[0] == 1
    assert run(capsys, "entropy", "--set", "family=ou", "--set", "theta=-1")[0] == 2
    assert run(capsys, "entropy", "--set", "family=ou", "--set", "wrong=1")[0] == 1
    assert run(capsys, "entropy", "--set", "family=custom", "--set", "drift=x", "--set", "squared_diffusion=1")[0] == 2
    assert run(capsys, "entropy", "--set", "family=custom", "--set", "drift=-x", "--set", "squared_diffusion=-1")[0] == 1
    assert run(capsys, "entropy", "-m", str(tmp_path / "missing.json"))[0] == 4
    assert run(capsys, "entropy", "--set", "family=ou", "--out", str(tmp_path / "no" / "dir" / "x.txt"))[0] == 4


def test_model_file_and_overrides(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"family": "cir", "params": {"mu": 2, "theta": 0.5}}))
    code, out, _ = run(capsys, "entropy", "-m", str(path), "--set", "mu=3", "--format", "json")
    assert code == 0
    assert_allclose(json.loads(out)["value"], CIRParams(mu=3.0).shannon(), rtol=1e-15)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "entropy", "-m", str(bad))[0] == 1


@pytest.mark.parametrize(
    "overrides",
    [
        ["family=gig", "theta1=1.5", "theta2=2", "theta3=0.5", "gamma=0.25"],
        ["family=custom", "drift=-x^3", "squared_diffusion=1 + x^2"],
        ["family=expfam", 'b=["1", "-x"]', "theta=[1, 0.5]", "squared_diffusion=x", "state_space=0,inf"],
    ],
)
def test_dump_config_round_trip(capsys, tmp_path, overrides):
    argv = ["entropy"] + [a for o in overrides for a in ("--set", o)]
    code, out, _ = run(capsys, *argv, "--dump-config")
    assert code == 0
    path = tmp_path / "cfg.json"
    path.write_text(out)
    cfg = load_config(str(path))
    assert dump_config(cfg) == out
    first = build_model(load_config(None, overrides))
    again = build_model(cfg)
    xs = np.array([0.3, 1.0, 2.0])
    assert_allclose(again.density().logpdf(xs) if hasattr(again, "density") else again.logpdf(xs),
                    first.density().logpdf(xs) if hasattr(first, "density") else first.logpdf(xs), rtol=1e-14)


def test_build_model_named():
    model = build_model(load_config(None, ["family=gig", "theta1=1.5", "theta2=2", "theta3=0.5"]))
    assert model == GIGParams(1.5, 2.0, 0.5)


def test_module_entry_point():
    env = dict(os.environ, LC_ALL="de_DE.UTF-8")
    res = subprocess.run([sys.executable, "-m", "diffentropy", "entropy", "--set", "family=ou", "--format", "csv"],
                         capture_output=True, text=True, env=env, check=False)
    assert res.returncode == 0
    assert "1.4189385332046" in res.stdout and "," in res.stdout.splitlines()[0]
