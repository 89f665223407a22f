import json
import math

import numpy as np
import pytest

from morreykit import cli
from morreykit.cli import (EXIT_EXACT, EXIT_OK, EXIT_STABILITY, EXIT_USAGE,
                           main, parse_params, validate_params)
from morreykit.growth import SpaceParams, power
from morreykit.gridfn import make_bank, preset_function
from morreykit.norms import CoeffField, space_norm

INF = math.inf


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.strip(), out.err.strip()


def test_parse_params_grammar():
    p = parse_params("power-p2-q1-s0-E-r2")
    assert (p.q, p.r, p.s, p.variant) == (1.0, 2.0, 0.0, "E")
    assert p.phi.family == "power" and p.phi.p == 2.0
    p = parse_params("loginv-e2-q2-s0-E-r0.5")
    assert p.phi.family == "loginv" and p.phi.exponent == 2.0
    p = parse_params("powerlog-e1.5-p4-q1-s1-N-rinf-hom")
    assert p.r == INF and p.homogeneous and p.phi.family == "powerlog"
    with pytest.raises(ValueError):
        parse_params("bogus-p2")
    with pytest.raises(ValueError):
        parse_params("power-x3")


def test_trace_presets_all_validate():
    for name in ("A", "B", "C", "D"):
        p = parse_params(f"trace-{name}", n=2)
        msgs = validate_params(p, for_trace=True)
        assert any("threshold" in m for m in msgs)


def test_norm_command_matches_library(capsys):
    code, out, _ = run(capsys, "norm", "--params", "power-p2-q1-s0-N-r2",
                       "--res", "64", "--fn", "gaussian")
    assert code == EXIT_OK
    got = json.loads(out)["norm"]
    params = parse_params("power-p2-q1-s0-N-r2")
    f = preset_function("gaussian", 1, 64)
    assert got == pytest.approx(space_norm(f, params, make_bank(1, 64)))


def test_norm_dry_run(capsys):
    code, out, _ = run(capsys, "norm", "--params", "power-p2-q1-s0-N-r2",
                       "--dry-run")
    assert code == EXIT_OK
    assert "checked" in json.loads(out)


def test_norm_bad_family(capsys):
    code, _, err = run(capsys, "norm", "--params", "bogus-p2")
    assert code == EXIT_USAGE
    assert "growth family" in err


def test_usage_error_on_missing_args(capsys):
    assert run(capsys, "norm")[0] == EXIT_USAGE
    assert run(capsys, "nonsense")[0] == EXIT_USAGE


def test_decompose_round_trip(capsys, tmp_path):
    out_file = tmp_path / "lam.csv"
    code, out, _ = run(capsys, "decompose", "--res", "64", "--L", "1",
                       "--out", str(out_file))
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["roundtrip_residual"] < 1e-8
    lam = CoeffField.from_csv(out_file.read_text(), 1)
    assert lam.level_list() == d["levels"]


def test_seqnorm_command(capsys, tmp_path):
    lam = CoeffField(1, {2: np.array([0.0, 1.0, 0.0, 0.0])})
    path = tmp_path / "lam.csv"
    path.write_text(lam.to_csv())
    code, out, _ = run(capsys, "seqnorm", "--params", "power-p2-q1-s1-N-r2",
                       "--input", str(path))
    assert code == EXIT_OK
    from morreykit.norms import seq_norm
    want = seq_norm(lam, parse_params("power-p2-q1-s1-N-r2"))
    assert json.loads(out)["norm"] == pytest.approx(want)


def test_quark_command(capsys):
    code, out, _ = run(capsys, "quark", "--res", "256",
                       "--fn", "random-bandlimited", "--beta-cutoff", "2")
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["residual"] < 0.05
    assert [0] in d["betas"]


def test_trace_command_and_validator(capsys, tmp_path):
    lam = CoeffField(2, {1: np.array([[1.0, 0.0], [0.0, 2.0]])})
    path = tmp_path / "lam.csv"
    path.write_text(lam.to_csv())
    code, out, _ = run(capsys, "trace", "--params", "trace-A",
                       "--input", str(path))
    assert code == EXIT_OK
    d = json.loads(out)
    assert d["bound_I"] > 0 and d["bound_II"] > 0
    # an s below the threshold must be rejected before any work happens
    code, _, err = run(capsys, "trace", "--params", "power-p2-q2-s0.1-N-r2",
                       "--dry-run")
    assert code == EXIT_USAGE
    assert "threshold" in err


def test_extend_command(capsys, tmp_path):
    mu = CoeffField(1, {1: np.array([1.0, 0.5])})
    path = tmp_path / "mu.csv"
    path.write_text(mu.to_csv())
    out_file = tmp_path / "ext.csv"
    code, out, _ = run(capsys, "extend", "--params", "trace-A",
                       "--input", str(path), "--out", str(out_file))
    assert code == EXIT_OK
    assert json.loads(out)["extension_bound"] > 0
    ext = CoeffField.from_csv(out_file.read_text(), 2)
    assert ext.levels[1].shape == (2, 2)


def test_campaign_command(capsys):
    code, out, _ = run(capsys, "campaign", "--name", "hardy",
                       "--trials", "50")
    assert code == EXIT_OK
    assert json.loads(out)["passed"] is True
    code, _, err = run(capsys, "campaign", "--name", "unknown")
    assert code == EXIT_USAGE


def test_suite_command(capsys, tmp_path):
    cfg = tmp_path / "suite.json"
    cfg.write_text(json.dumps([
        {"name": "hardy", "trials": 25},
        {"name": "maximal", "trials": 2, "resolutions": [32, 64]},
    ]))
    code, out, _ = run(capsys, "suite", "--file", str(cfg))
    assert code == EXIT_OK
    summary = json.loads(out)
    assert len(summary) == 2 and all(s["pass"] for s in summary)


def test_env_seed_override(capsys, monkeypatch):
    monkeypatch.setenv("MORREYKIT_SEED", "7")
    code, out1, _ = run(capsys, "campaign", "--name", "hardy",
                        "--trials", "20", "--seed", "0")
    monkeypatch.setenv("MORREYKIT_SEED", "7")
    code, out2, _ = run(capsys, "campaign", "--name", "hardy",
                        "--trials", "20", "--seed", "99")
    # same env seed beats different --seed flags: byte-identical reports
    # modulo the runtime field
    d1, d2 = json.loads(out1), json.loads(out2)
    d1.pop("runtime"), d2.pop("runtime")
    assert d1 == d2


def test_exit_codes_distinct():
    assert len({EXIT_OK, EXIT_USAGE, EXIT_EXACT, EXIT_STABILITY}) == 4
