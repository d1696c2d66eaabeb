import json
from pathlib import Path

import numpy as np
import pytest

from grouplegendre.cli import main
from grouplegendre.matgroup import matrix_from_dict, matrix_to_dict, random_su

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def run(tmp_path, *args):
    out = tmp_path / "out"
    return main(list(args) + ["--out", str(out)]), out


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# command=")
    assert "seed=" in lines[0]
    return lines[1].split(","), [ln.split(",") for ln in lines[2:]]


def test_decompose_identity(tmp_path):
    ident = json.dumps(matrix_to_dict(np.eye(2)))
    code, out = run(tmp_path, "decompose", "--g", ident)
    assert code == 0
    doc = json.loads((out / "decompose.json").read_text())
    for side in ("left", "right"):
        np.testing.assert_array_equal(matrix_from_dict(doc[side]["u"]), np.eye(2))
        np.testing.assert_array_equal(matrix_from_dict(doc[side]["gamma"]), np.eye(2))


def test_evolve_unitary_start_is_static(tmp_path):
    u = random_su(2, np.random.default_rng(1))
    code, out = run(tmp_path, "evolve-sun", "--g0", json.dumps(matrix_to_dict(u)), "--steps", "50")
    assert code == 0
    header, rows = read_csv(out / "evolve_sun.csv")
    assert header == ["t", "H", "detdrift", "gammaLdrift", "gammaRdrift"]
    assert len(rows) == 51
    assert max(abs(float(r[1]) - 1.0) for r in rows) < 1e-13
    final = matrix_from_dict(json.loads((out / "evolve_sun_final.json").read_text())["g_final"])
    np.testing.assert_allclose(final, u, atol=1e-13)


def test_compat_default_residuals_positive(tmp_path):
    code, out = run(tmp_path, "compat", "--steps", "200", "--per-norm", "1")
    assert code == 0
    header, rows = read_csv(out / "compat.csv")
    assert header == ["epsilon", "c", "variant", "v_id", "v_norm", "residual"]
    assert len(rows) == 4 * 3
    assert min(float(r[-1]) for r in rows) > 0


def test_compat_scan_ranked(tmp_path):
    code, out = run(tmp_path, "compat", "--steps", "100", "--per-norm", "1", "--norms", "[1.0]",
                    "--scan", "0.5:2:3,0.5:2:2")
    assert code == 0
    _, ranked = read_csv(out / "compat_ranked.csv")
    assert len(ranked) == 6
    means = [float(r[3]) for r in ranked]
    assert means == sorted(means)


def test_phi_prints_json(tmp_path, capsys):
    eta = json.dumps(matrix_to_dict(np.diag([0.5j, -0.5j])))
    code, out = run(tmp_path, "phi", "--eta0", eta, "--steps", "200")
    assert code == 0
    gamma = matrix_from_dict(json.loads(capsys.readouterr().out))
    np.testing.assert_allclose(gamma, np.diag([np.exp(0.5), np.exp(-0.5)]), atol=1e-10)


def test_phi_oracle_and_grid(tmp_path):
    eta = json.dumps(matrix_to_dict(np.diag([0.5j, -0.5j])))
    assert run(tmp_path, "phi", "--eta0", eta, "--oracle", "--steps", "100")[0] == 0
    code, out = run(tmp_path, "phi", "--grid", "--grid-count", "3", "--steps", "100")
    assert code == 0
    header, rows = read_csv(out / "phi_grid.csv")
    assert header[:3] == ["eta0", "eta1", "eta2"] and len(rows) == 3


@pytest.mark.parametrize("k", [1, 2, 3])
def test_examples(tmp_path, k):
    code, out = run(tmp_path, "examples", "run", str(k), "--config", str(CONFIGS / f"example{k}.json"))
    assert code == 0
    header, rows = read_csv(out / f"example{k}.csv")
    assert len(rows) == 50 and "energy_drift" in header


def test_casimir_checks(tmp_path):
    code, out = run(tmp_path, "casimir-checks", "--units", "3", "--starts", "3")
    assert code == 0
    _, rows = read_csv(out / "casimir_checks.csv")
    assert [r[0] for r in rows] == ["commutation", "isotropy", "matched_differential", "exponential_formula"]
    assert all(r[-1] == "pass" for r in rows)


def test_fe_maps_invert(tmp_path):
    code, out = run(tmp_path, "fe-maps", "--invert", "--count", "5", "--n", "3")
    assert code == 0
    header, rows = read_csv(out / "fe_maps.csv")
    assert header[-1] == "roundtrip_residual" and len(rows) == 10


@pytest.mark.parametrize("args", [
    ["decompose", "--config", "/nonexistent.json"],
    ["decompose", "--no-such-flag"],
    ["decompose", "--seed", "-1"],
    ["evolve-sun", "--steps", "0"],
    ["phi"],
    ["compat", "--scan", "1:2"],
    ["evolve-sun", "--g0", '{"n": 2, "re": [[2, 0], [0, 2]]}'],
    ["casimir-checks", "--f", "nope"],
])
def test_config_errors_exit_2(tmp_path, args):
    assert run(tmp_path, *args)[0] == 2


def test_unknown_config_key_exit_2(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"n": 2, "stepz": 3}))
    assert run(tmp_path, "evolve-sun", "--config", str(cfg))[0] == 2
    cfg.write_text(json.dumps({"steps": 2.5}))
    assert run(tmp_path, "evolve-sun", "--config", str(cfg))[0] == 2


def test_numerical_abort_exit_3(tmp_path):
    assert run(tmp_path, "examples", "run", "3", "--window", "0.5")[0] == 3


def test_invariant_violation_exit_4(tmp_path):
    assert run(tmp_path, "evolve-sun", "--steps", "10", "--tol", "1e-20")[0] == 4
    assert (tmp_path / "out" / "evolve_sun.csv").exists()


def test_overrides_beat_config_file(tmp_path):
    code, out = run(tmp_path, "evolve-sun", "--config", str(CONFIGS / "evolve-sun.json"), "--steps", "20",
                    "--tol", "1e-3")
    assert code == 0
    assert len(read_csv(out / "evolve_sun.csv")[1]) == 21
