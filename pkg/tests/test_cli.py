"""End-to-end checks of the command line front end."""

import json
import math

import numpy as np
import pytest

from nls_solitons import cli
from nls_solitons.dynamics import read_snapshot


def run_json(capsys, argv):
    code = cli.run(argv)
    out = capsys.readouterr().out
    assert code == 0, out
    return json.loads(out)


# ---------------------------------------------------------------------------
# Deterministic JSON emitter


def test_dumps_sorted_keys_and_float_format():
    s = cli.dumps({"b": 1.0, "a": [1, 2.5, None, True]})
    assert s == '{"a":[1,2.5,null,true],"b":1}'
    assert cli.dumps({"x": 0.1}) == '{"x":0.10000000000000001}'
    assert cli.dumps(float("nan")) == "null"
    assert cli.dumps(float("inf")) == "null"
    assert cli.dumps(complex(1.0, -2.0)) == "[1,-2]"
    assert cli.dumps(np.float64(0.5)) == "0.5"
    assert cli.dumps(np.arange(3)) == "[0,1,2]"


def test_dumps_rejects_unknown_types():
    with pytest.raises(TypeError):
        cli.dumps(object())


# ---------------------------------------------------------------------------
# Exit codes


def test_no_arguments_is_usage_error(capsys):
    assert cli.run([]) == 2


def test_unknown_command_is_usage_error(capsys):
    assert cli.run(["frobnicate"]) == 2


def test_help_exits_zero(capsys):
    assert cli.run(["--help"]) == 0


def test_missing_form_parameter(capsys):
    assert cli.run(["analyze", "--form", "NLS3", "--alpha1", "0.8"]) == 2
    err = capsys.readouterr().err
    assert "alpha2" in err


def test_fractional_discrete_parameter(capsys):
    assert cli.run(["analyze", "--form", "NLS1", "--alpha", "0.5",
                    "--beta", "0"]) == 2
    assert "integer" in capsys.readouterr().err


def test_invalid_normalisation(capsys):
    assert cli.run(["analyze", "--form", "NLS3", "--alpha1", "0.2",
                    "--alpha2", "0.6", "--r", "0"]) == 2


def test_missing_system_file(capsys):
    assert cli.run(["analyze", "--system", "/nonexistent/x.json"]) == 2


def test_csv_rejected_for_json_only_commands(capsys):
    assert cli.run(["analyze", "--form", "NLS1", "--alpha", "-1",
                    "--beta", "-1", "--format", "csv"]) == 2


# ---------------------------------------------------------------------------
# analyze


def test_analyze_defocusing_example(capsys):
    data = run_json(capsys, ["analyze", "--form", "NLS3", "--alpha1", "0.8",
                             "--alpha2", "0.6", "--r", "0"])
    assert data["schema"] == "nls-solitons/1"
    assert abs(data["g_min"] - 1.6) <= 1e-12
    assert data["ground_state_exists"] is False


def test_analyze_focusing_example(capsys):
    data = run_json(capsys, ["analyze", "--form", "NLS3", "--alpha1", "0.8",
                             "--alpha2", "0.6", "--r", "-2"])
    assert abs(data["g_min"] + 0.4) <= 1e-12
    assert data["ground_state_exists"] is True
    assert data["T0"]
    for fam in data["T0"]:
        assert set(fam) == {"kind", "label", "generator", "value"}
    assert data["critical_sets"]


def test_analyze_byte_identical_repeats(capsys):
    argv = ["analyze", "--form", "NLS4", "--alpha1", "0.1", "--alpha2", "0.2",
            "--alpha3", str(math.sqrt(0.95)), "--r", "0.4"]
    assert cli.run(argv) == 0
    first = capsys.readouterr().out
    assert cli.run(argv) == 0
    second = capsys.readouterr().out
    assert first == second


def test_analyze_from_file(tmp_path, capsys):
    spec = {"kind": "lambda",
            "lambdas": [-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1], "d": 1}
    path = tmp_path / "system.json"
    path.write_text(json.dumps(spec))
    data = run_json(capsys, ["analyze", "--system", str(path)])
    assert abs(data["g_min"] + 1.0) <= 1e-9


# ---------------------------------------------------------------------------
# ground-state


def test_ground_state_reference_numbers(capsys):
    data = run_json(capsys, ["ground-state", "--form", "NLS1",
                             "--alpha", "-1", "--beta", "-1"])
    assert abs(data["action"] - 4.0 / 3.0) <= 1e-12
    assert abs(data["C_GN"] - 1 / math.sqrt(3)) <= 1e-12
    assert abs(data["a"] - 1.0) <= 1e-12
    assert data["all_passed"] is True
    assert data["verdict"]["regime"] == "stable"
    assert all(r <= 1e-5 for r in data["residuals"])


def test_ground_state_rejects_defocusing(capsys):
    assert cli.run(["ground-state", "--form", "NLS1", "--alpha", "1",
                    "--beta", "1"]) == 2
    assert "nonnegative" in capsys.readouterr().err


def test_ground_state_profile_dump(tmp_path, capsys):
    path = tmp_path / "profile.csv"
    data = run_json(capsys, ["ground-state", "--form", "NLS2", "--alpha", "1",
                             "--beta", "1", "--sigma", "-1",
                             "--omega", "2.0", "--dump-profile", str(path),
                             "--samples", "101"])
    assert data["omega"] == 2.0
    lines = path.read_text().splitlines()
    assert lines[0] == "r,Q,u1_re,u1_im,u2_re,u2_im"
    assert len(lines) == 102
    row = [float(v) for v in lines[1].split(",")]
    assert row[0] == 0.0
    # peak amplitude follows the (omega/a)^{1/(p-2)} scaling at a = 1/2
    assert abs(row[1] - math.sqrt(2.0 / 0.5) * math.sqrt(2)) <= 1e-9


# ---------------------------------------------------------------------------
# profile


def test_profile_json_norms(capsys):
    data = run_json(capsys, ["profile", "--d", "1", "--p", "4"])
    assert abs(data["l2_sq"] - 4.0) <= 1e-12
    assert abs(data["grad_sq"] - 4.0 / 3.0) <= 1e-12
    assert abs(data["p_int"] - 16.0 / 3.0) <= 1e-12
    assert data["residual"] <= 1e-9


def test_profile_csv_stdout(capsys):
    code = cli.run(["profile", "--d", "2", "--p", "4", "--format", "csv",
                    "--samples", "11"])
    out = capsys.readouterr().out
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "r,Q"
    assert len(lines) == 12
    q0 = float(lines[1].split(",")[1])
    assert abs(q0 - 2.206201) <= 1e-4


def test_profile_invalid_power(capsys):
    assert cli.run(["profile", "--d", "3", "--p", "6"]) == 2


# ---------------------------------------------------------------------------
# simulate


def test_simulate_soliton_with_table_and_snapshot(tmp_path, capsys):
    csv_path = tmp_path / "diag.csv"
    snap_path = tmp_path / "final.snap"
    data = run_json(capsys, [
        "simulate", "--experiment", "soliton", "--form", "NLS1",
        "--alpha", "-1", "--beta", "-1", "--T", "0.5", "--grid", "256",
        "--box", "40", "--dt", "1e-3", "--out", str(csv_path),
        "--snapshot", str(snap_path)])
    assert data["experiment"] == "soliton"
    assert abs(data["t_final"] - 0.5) <= 1e-9
    assert data["info"]["sup_error"] <= 1e-4
    lines = csv_path.read_text().splitlines()
    assert lines[0].split(",") == ["t", "M", "E", "P", "H", "V", "J",
                                   "orbit_dist"]
    assert len(lines) >= 3
    back = read_snapshot(snap_path)
    assert back.grid.shape == (256,)
    assert abs(back.t - 0.5) <= 1e-9
    # the snapshot really is the evolved field: mass matches the datum
    mass = 0.5 * float(np.sum(np.abs(back.u[0]) ** 2
                              + np.abs(back.u[1]) ** 2)) * back.grid.cell
    assert abs(mass - 2.0) <= 1e-6


def test_simulate_requires_experiment(capsys):
    assert cli.run(["simulate", "--form", "NLS1", "--alpha", "-1",
                    "--beta", "-1"]) == 2


def test_simulate_stability_short(capsys):
    data = run_json(capsys, [
        "simulate", "--experiment", "stability", "--form", "NLS2",
        "--alpha", "1", "--beta", "1", "--sigma", "-1", "--T", "1.0",
        "--grid", "256", "--box", "40", "--eps", "0.01"])
    assert data["info"]["eps"] == 0.01
    assert data["info"]["max_relative_dist"] <= 0.05


# ---------------------------------------------------------------------------
# classify


def test_classify_standard_form(capsys):
    data = run_json(capsys, ["classify", "--form", "NLS3", "--alpha1", "0.8",
                             "--alpha2", "0.6", "--r", "-2"])
    assert data["rank_C"] >= 1
    assert data["admissible_abc"] is not None
    assert data["match"]["form"] == "NLS3"
    assert data["match"]["residual"] <= 1e-8
    assert np.allclose(np.array(data["match"]["M"]), np.eye(2))


def test_classify_inadmissible_system(tmp_path, capsys):
    spec = {"kind": "lambda",
            "lambdas": [0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0], "d": 1}
    path = tmp_path / "l4.json"
    path.write_text(json.dumps(spec))
    data = run_json(capsys, ["classify", "--system", str(path)])
    assert data["admissible_abc"] is None
    assert data["match"] is None


def test_classify_rejects_resonant_model(capsys):
    assert cli.run(["classify", "--form", "CO", "--kappa", "0.7",
                    "--gamma", "1.3"]) == 2


# ---------------------------------------------------------------------------
# gn-check


def test_gn_check_small_run(capsys):
    data = run_json(capsys, ["gn-check", "--form", "NLS1", "--alpha", "-1",
                             "--beta", "-1", "--fields", "200"])
    assert data["violations"] == 0
    assert data["worst_ratio"] <= 1.0
    assert abs(data["constant"] - 1 / math.sqrt(3)) <= 1e-12
    assert data["equality_gap"] <= 1e-6


def test_gn_check_seed_changes_fields(capsys):
    a = run_json(capsys, ["gn-check", "--form", "NLS1", "--alpha", "-1",
                          "--beta", "-1", "--fields", "50", "--seed", "1"])
    b = run_json(capsys, ["gn-check", "--form", "NLS1", "--alpha", "-1",
                          "--beta", "-1", "--fields", "50", "--seed", "2"])
    assert a["worst_ratio"] != b["worst_ratio"]
