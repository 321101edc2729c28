import json
import os

import numpy as np
import pytest

from cauchygap.cli import EXIT_CONFIG, EXIT_OK, EXIT_TOLERANCE, load_config, main


def test_gap_json(tmp_path, capsys):
    out = tmp_path / "gap.json"
    code = main(["gap", "--n", "3", "--beta", "5.0", "--m", "256",
                 "--out", str(out)])
    assert code == EXIT_OK
    d = json.loads(out.read_text())
    assert d["n"] == 3 and d["beta"] == 5.0
    assert d["range_tag"] == "upper"
    assert np.isclose(d["closed_form"], 8.0)
    assert abs(d["rel_error"]) < 1e-3


def test_gap_csv_format(tmp_path):
    out = tmp_path / "gap.csv"
    code = main(["gap", "--n", "2", "--beta", "4.0", "--m", "128",
                 "--delta", "1e-2", "--format", "csv", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0].startswith("n,beta,range_tag")
    assert len(lines) == 2


def test_gap_invalid_params():
    assert main(["gap", "--n", "2", "--beta", "0.9"]) == EXIT_CONFIG
    assert main(["gap", "--n", "0", "--beta", "2.0"]) == EXIT_CONFIG
    assert main(["gap", "--n", "2"]) == EXIT_CONFIG  # beta missing


def test_gap_tolerance_failure(tmp_path):
    # the essential-spectrum edge converges too slowly for the default grid:
    # an honest exit 2, not a wrong answer
    out = tmp_path / "gap.json"
    code = main(["gap", "--n", "1", "--beta", "1.0", "--m", "256",
                 "--out", str(out)])
    assert code == EXIT_TOLERANCE
    d = json.loads(out.read_text())
    assert np.isclose(d["closed_form"], 0.25)
    assert d["rel_error"] > 1e-3


def test_sweep(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--n", "2", "--beta-min", "1.2", "--beta-max", "4.0",
                 "--steps", "6", "--m", "96", "--delta", "1e-2",
                 "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert len(lines) == 7
    # deterministic: a second run writes byte-identical output
    out2 = tmp_path / "sweep2.csv"
    main(["sweep", "--n", "2", "--beta-min", "1.2", "--beta-max", "4.0",
          "--steps", "6", "--m", "96", "--delta", "1e-2", "--out", str(out2)])
    assert out.read_bytes() == out2.read_bytes()
    assert main(["sweep", "--n", "2", "--beta-min", "3.0", "--beta-max", "2.0",
                 "--steps", "4"]) == EXIT_CONFIG


def test_verify_single_point(tmp_path):
    out = tmp_path / "verify.json"
    code = main(["verify", "--n", "2", "--beta", "2.5", "--trials", "2",
                 "--out", str(out)])
    assert code == EXIT_OK
    d = json.loads(out.read_text())
    assert d["all_pass"] is True
    assert len(d["points"]) == 1
    pt = d["points"][0]
    assert pt["n"] == 2 and pt["beta"] == 2.5
    tags = {r["tag"] for r in pt["reports"]}
    assert {"IPP1", "IPP2", "GAMMABIS", "IRG", "LOWFACT"} <= tags
    # eps0 candidates are distinct away from beta = n/2 + 2: plus wins
    assert pt["lowfact_sign"]["resolved"] == "plus"
    assert np.isclose(pt["lowfact_sign"]["resolved_eps0"], 0.5)


def test_verify_corrupt_control(tmp_path):
    out = tmp_path / "verify.json"
    code = main(["verify", "--n", "2", "--beta", "3.0", "--trials", "2",
                 "--corrupt-ipp1", "--out", str(out)])
    assert code == EXIT_TOLERANCE
    d = json.loads(out.read_text())
    assert d["all_pass"] is False
    assert d["corrupt_ipp1"] is True


def test_deficit_csv(tmp_path):
    out = tmp_path / "deficit.csv"
    code = main(["deficit", "--n", "3", "--beta", "4.0", "--range", "upper",
                 "--f", "linear", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "n,beta,range_tag,f,deficit"
    row = lines[1].split(",")
    assert row[:4] == ["3", "4", "upper", "linear"]
    assert abs(float(row[4])) < 1e-8


def test_deficit_lower_bump(tmp_path):
    out = tmp_path / "deficit.csv"
    code = main(["deficit", "--n", "2", "--beta", "1.5", "--range", "lower",
                 "--f", "bump", "--seed", "0", "--out", str(out)])
    assert code == EXIT_OK
    val = float(out.read_text().splitlines()[1].split(",")[4])
    assert val < -1e-6


def test_rayleigh(tmp_path):
    out = tmp_path / "rayleigh.csv"
    code = main(["rayleigh", "--family", "power", "--n", "2", "--beta", "1.8",
                 "--eps-from-limit", "0.05,0.01,0.001", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "family,n,beta,eps_from_limit,epsilon,quotient,limit"
    assert len(lines) == 4
    quots = [float(l.split(",")[5]) for l in lines[1:]]
    limit = float(lines[1].split(",")[6])
    assert np.isclose(limit, (1.8 - 1.0) ** 2)
    # quotients decrease toward the limit as eps approaches admissibility
    assert quots[0] > quots[1] > quots[2] > limit
    # the one-dimensional family rejects n != 1
    assert main(["rayleigh", "--family", "oned", "--n", "2", "--beta", "1.8",
                 "--eps-from-limit", "0.01"]) == EXIT_CONFIG


def test_sample(tmp_path):
    out = tmp_path / "sample.csv"
    code = main(["sample", "--n", "2", "--beta", "3.0", "--count", "500",
                 "--seed", "9", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    data = [l for l in lines if not l.startswith("#") and not l.startswith("x")]
    assert len(data) == 500
    checks = [l for l in lines if l.startswith("# moment_check")]
    assert len(checks) == 2  # omega_inv and mean_sq_norm (beta > n/2 + 1)
    # heavy tail: no second-moment row when it diverges
    out2 = tmp_path / "sample2.csv"
    main(["sample", "--n", "2", "--beta", "1.5", "--count", "100",
          "--seed", "9", "--out", str(out2)])
    checks2 = [l for l in out2.read_text().splitlines()
               if l.startswith("# moment_check")]
    assert len(checks2) == 1


def test_sample_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["sample", "--n", "1", "--beta", "2.0", "--count", "64",
          "--seed", "3", "--out", str(a)])
    main(["sample", "--n", "1", "--beta", "2.0", "--count", "64",
          "--seed", "3", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sampler setup\nn = 2\nbeta = 3.0\ncount = 40\nseed = 5\n")
    vals = load_config(cfg)
    assert vals == {"n": 2, "beta": 3.0, "count": 40, "seed": 5}
    out = tmp_path / "s.csv"
    code = main(["sample", "--config", str(cfg), "--out", str(out)])
    assert code == EXIT_OK
    rows = [l for l in out.read_text().splitlines()
            if not l.startswith(("#", "x"))]
    assert len(rows) == 40
    # explicit flags take precedence over the file
    out2 = tmp_path / "s2.csv"
    main(["sample", "--config", str(cfg), "--count", "7", "--out", str(out2)])
    rows2 = [l for l in out2.read_text().splitlines()
             if not l.startswith(("#", "x"))]
    assert len(rows2) == 7


def test_config_file_unknown_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("nonsense = 12\n")
    with pytest.raises(ValueError):
        load_config(cfg)
    assert main(["sample", "--config", str(cfg)]) == EXIT_CONFIG


def test_outdir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("CAUCHYGAP_OUTDIR", str(tmp_path))
    code = main(["gap", "--n", "2", "--beta", "4.0", "--m", "96",
                 "--delta", "1e-2"])
    assert code == EXIT_OK
    assert (tmp_path / "gap_n2_beta4.json").exists()
