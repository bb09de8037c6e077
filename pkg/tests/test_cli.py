"""CLI surface tests: JSON contracts, exit codes, file outputs."""

import json
import math

from click.testing import CliRunner

from cyldyn.cli import cli

CENTER_1_MINUS = "-1,-2.9781881070693568"


def invoke(*args):
    return CliRunner().invoke(cli, list(args))


def test_analyze_reports_cycle_and_diagnosis():
    res = invoke("analyze", "--lam", CENTER_1_MINUS, "--raw")
    assert res.exit_code == 0
    rec = json.loads(res.stdout)
    assert rec["member"] is True
    assert rec["classification"]["kind"] == "cycle"
    assert rec["classification"]["period"] == 1
    assert rec["diagnosis"]["text"] == "wandering (σ=1)"


def test_analyze_bare_real_parameter():
    res = invoke("analyze", "--lam", "0", "--raw")
    assert res.exit_code == 0
    rec = json.loads(res.stdout)
    assert rec["member"] is False
    assert rec["classification"]["kind"] == "fixed-root"
    assert rec["color_index"] == 0


def test_analyze_singularity_exits_3_with_json_on_stderr():
    res = invoke("analyze", "--lam", "0,3.141592653589793")
    assert res.exit_code == 3
    err = json.loads(res.stderr)
    assert err["error"] == "param-singularity"


def test_malformed_lambda_is_usage_error():
    res = invoke("analyze", "--lam", "nope")
    assert res.exit_code == 2


def test_ray_polyline_lands_at_closed_form():
    res = invoke("ray", "--region", "omega-minus", "--theta", "0",
                 "--k", "-1", "--t", "-8", "--samples", "64", "--raw")
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert len(out["points"]) == 64
    last = out["points"][-1]["lambda"]
    assert abs(last[0] - (-1.0)) <= 1e-12
    assert abs(last[1] - (-math.pi)) <= 1e-12


def test_ray_beyond_landing_is_usage_error():
    res = invoke("ray", "--region", "omega-minus", "--theta", "0",
                 "--k", "-1", "--t", "2")
    assert res.exit_code == 2


def test_ray_degenerate_sheet_is_computation_error():
    res = invoke("ray", "--region", "omega-minus", "--theta", "0",
                 "--k", "0", "--t", "0.5")
    assert res.exit_code == 3
    assert json.loads(res.stderr)["error"] == "degenerate-ray"


def test_pseudo_reports_superattracting_point():
    res = invoke("pseudo", "--lam", CENTER_1_MINUS, "--sigma", "1", "--raw")
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert abs(out["w_star"][0] - (-37.45171655853391)) <= 1e-9
    assert abs(out["rho"][0]) <= 1e-12 and abs(out["rho"][1]) <= 1e-12


def test_render_param_writes_png_and_sidecar(tmp_path):
    out = tmp_path / "plane.png"
    res = invoke("render-param", "--out", str(out), "--width", "24",
                 "--height", "20", "--config", '{"max_iter": 150}', "--raw")
    assert res.exit_code == 0
    side = json.loads(res.stdout)
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    disk = json.loads((tmp_path / "plane.json").read_text())
    assert disk["cfg_hash"] == side["cfg_hash"]
    assert side["viewport"]["width"] == 24


def test_render_dyn_z_coordinates(tmp_path):
    out = tmp_path / "dyn.png"
    res = invoke("render-dyn", "--lam", CENTER_1_MINUS, "--out", str(out),
                 "--width", "20", "--height", "16", "--coords", "z",
                 "--config", '{"max_iter": 150}', "--raw")
    assert res.exit_code == 0
    assert json.loads(res.stdout)["coords"] == "z"
    assert out.exists()


def test_render_window_validation():
    res = invoke("render-param", "--out", "/tmp/x.png",
                 "--window", "1,0,0,1")
    assert res.exit_code == 2


def test_rotation_measure_frozen_value():
    spec = json.dumps({"preset": "mero-standard", "a": [0.3, 0.0],
                       "alpha": [0.25, 0.0], "beta": [0.05, 0.0]})
    res = invoke("rotation", "measure", "--spec", spec, "--n", "20000",
                 "--raw")
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert abs(out["rotation_number"] - 0.24999929731194584) <= 1e-12


def test_rotation_tune_small_budget():
    res = invoke("rotation", "tune", "--a", "0.3", "--beta", "0.05",
                 "--target", "0.25", "--tol", "1e-4", "--n", "20000", "--raw")
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert abs(out["alpha"] - 0.25) < 0.02


def test_prepole_search_classifies_hit():
    res = invoke("prepole-search", "--order", "1", "--seed", "-1.1,-2.4",
                 "--raw")
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert out["classification"]["kind"] == "prepole"
    assert abs(out["lambda"][0] - (-1.0962129170699302)) <= 1e-9
    assert abs(out["lambda"][1] - (-2.461602329611283)) <= 1e-9


def test_mu_reference_point():
    res = invoke("mu", "--lam", "0,-3.141592653589793", "--raw")
    assert res.exit_code == 0
    out = json.loads(res.stdout)
    assert abs(out["mu"][0] - (-1.0)) <= 1e-12
    assert abs(out["mu"][1]) <= 1e-12
