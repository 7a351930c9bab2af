"""End-to-end CLI runs in subprocesses: tables, config, exit codes."""

import json
import os
import re
import subprocess
import sys

import pytest

SPECTRUM_HEADER = "n,m,spin,zeeman,nu,alpha_tilde,alpha,epsilon"
QSL_HEADER = "n,b0_G_pm_n,spin,nu,beta,tau_qsl_s,rho_disp_pm,v_over_c,bound"
BBOUND_HEADER = "n,b0_G_pm_n,spin,meanH_erg,rhs_erg,region"
SQSL_HEADER = "n,spin,nu,sqsl_v_over_c"

FLOAT_CELL = re.compile(r"-?\d\.\d{16}e[+-]\d{2,3}$")


@pytest.fixture(scope="module")
def cli_env(tmp_path_factory):
    # One shared eigenvalue cache keeps repeated CLI invocations cheap.
    env = os.environ.copy()
    env["QSL_CACHE_DIR"] = str(tmp_path_factory.mktemp("cli-cache"))
    return env


def run_cli(args, env):
    return subprocess.run(
        [sys.executable, "-m", "magqsl.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        timeout=600,
    )


def parse_csv(stdout):
    lines = stdout.splitlines()
    return lines[0], [line.split(",") for line in lines[1:]]


def test_spectrum_table(cli_env):
    proc = run_cli(["spectrum", "--n", "0", "--levels", "3"], cli_env)
    assert proc.returncode == 0
    header, rows = parse_csv(proc.stdout)
    assert header == SPECTRUM_HEADER
    assert len(rows) == 6
    ladder = {"up": [2.0, 4.0, 6.0], "down": [0.0, 2.0, 4.0]}
    for row in rows:
        spin, nu, alpha_tilde = row[2], int(row[4]), float(row[5])
        assert alpha_tilde == pytest.approx(ladder[spin][nu], abs=1e-8)
        assert FLOAT_CELL.match(row[5])
    assert "beta = 1.000000e+00" in proc.stderr


def test_spectrum_with_zeeman_off_branch(cli_env):
    proc = run_cli(
        ["spectrum", "--n", "0", "--levels", "2", "--zeeman", "both-and-off"],
        cli_env,
    )
    assert proc.returncode == 0
    _, rows = parse_csv(proc.stdout)
    assert [row[2] for row in rows] == ["up", "up", "down", "down", "off", "off"]
    assert [row[3] for row in rows] == ["on"] * 4 + ["off"] * 2
    off_levels = [float(row[5]) for row in rows if row[2] == "off"]
    assert off_levels == pytest.approx([1.0, 3.0], abs=1e-8)


def test_config_file_with_flag_precedence(tmp_path, cli_env):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults for the uniform scan\nn = 2\nlevels = 2\n")
    proc = run_cli(["spectrum", "--config", str(cfg), "--n", "0"], cli_env)
    assert proc.returncode == 0
    _, rows = parse_csv(proc.stdout)
    assert len(rows) == 4  # levels taken from the file, two branches
    assert all(float(row[0]) == 0.0 for row in rows)  # flag wins over file


def test_unknown_config_key_rejected(tmp_path, cli_env):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("n = 0\nfrobnicate = 3\n")
    proc = run_cli(["spectrum", "--config", str(cfg)], cli_env)
    assert proc.returncode == 2
    assert "unrecognized arguments: --frobnicate" in proc.stderr


def test_exponent_below_validity_limit_rejected(cli_env):
    proc = run_cli(["qsl", "--n", "-1.5", "--b0", "1.0"], cli_env)
    assert proc.returncode == 2
    assert "n must exceed -1" in proc.stderr


def test_steps_floor_rejected(cli_env):
    proc = run_cli(["spectrum", "--n", "0", "--steps", "50"], cli_env)
    assert proc.returncode == 2
    assert "steps must be at least 100" in proc.stderr


def test_beta_and_b0_conflict_rejected(cli_env):
    proc = run_cli(["spectrum", "--n", "0", "--beta", "1", "--b0", "1"], cli_env)
    assert proc.returncode == 2
    assert "either --b0 or --beta" in proc.stderr


def test_solver_error_maps_to_exit_one(cli_env):
    proc = run_cli(
        [
            "bbound", "--n", "0", "--b0-range", "1e10:1e12:2",
            "--critical", "intersection",
        ],
        cli_env,
    )
    assert proc.returncode == 1
    assert "keep one ordering" in proc.stderr


def test_json_document_carries_meta(cli_env):
    proc = run_cli(
        ["qsl", "--n", "0", "--b0", "1e12", "--format", "json"], cli_env
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["meta"]["artifact"] == "magqsl"
    assert doc["meta"]["command"] == "qsl"
    assert doc["meta"]["constants"]["b_cr_gauss"] == pytest.approx(4.414e13, rel=1e-4)
    assert doc["meta"]["solver"]["steps"] == 40_000
    assert len(doc["rows"]) == 2
    assert list(doc["rows"][0]) == QSL_HEADER.split(",")
    assert doc["rows"][0]["bound"] == "MT"


def test_output_file_reruns_byte_identical(tmp_path, cli_env):
    args = ["bbound", "--n", "0", "--b0-range", "1e10:1e14:2"]
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    proc = run_cli([*args, "--out", str(first)], cli_env)
    assert proc.returncode == 0
    assert f"-> {first}" in proc.stdout
    assert run_cli([*args, "--out", str(second)], cli_env).returncode == 0
    assert first.read_bytes() == second.read_bytes()
    header, rows = parse_csv(first.read_text())
    assert header == BBOUND_HEADER
    assert len(rows) == 18  # nine field points, two branch rows each


def test_sqsl_closed_form_table(cli_env):
    proc = run_cli(["sqsl", "--n", "0"], cli_env)
    assert proc.returncode == 0
    header, rows = parse_csv(proc.stdout)
    assert header == SQSL_HEADER
    values = {row[1]: float(row[3]) for row in rows}
    assert values["up"] == pytest.approx(0.2336950, rel=1e-4)
    assert values["down"] == pytest.approx(0.5641896, rel=1e-4)


def test_sweep_n_grid_expansion(cli_env):
    proc = run_cli(
        ["sweep-n", "--n-range", "0:1:0.5", "--b0", "1e15"], cli_env
    )
    assert proc.returncode == 0
    header, rows = parse_csv(proc.stdout)
    assert header == QSL_HEADER
    assert len(rows) == 6
    assert [float(row[0]) for row in rows] == [0.0, 0.5, 1.0, 0.0, 0.5, 1.0]
    assert {row[2] for row in rows} == {"up", "down"}


def test_lab_example_reference_values(cli_env):
    proc = run_cli(["lab-example"], cli_env)
    assert proc.returncode == 0
    header, rows = parse_csv(proc.stdout)
    assert header == QSL_HEADER
    assert len(rows) == 3
    assert rows[0][2] == "both"
    velocities = [float(row[7]) for row in rows]
    assert velocities[0] == pytest.approx(1.899e-7, rel=1e-3)
    assert velocities[1] == pytest.approx(3.237e-7, rel=1e-3)
    assert velocities[2] == pytest.approx(3.026e-7, rel=1e-3)


def test_s0_override_leaves_physics_unchanged(cli_env):
    base = run_cli(["qsl", "--n", "0", "--b0", "1e12", "--spin", "up"], cli_env)
    moved = run_cli(
        ["qsl", "--n", "0", "--b0", "1e12", "--spin", "up", "--s0", "1e-5"],
        cli_env,
    )
    assert base.returncode == 0 and moved.returncode == 0
    _, base_rows = parse_csv(base.stdout)
    _, moved_rows = parse_csv(moved.stdout)
    assert float(moved_rows[0][7]) == pytest.approx(
        float(base_rows[0][7]), rel=1e-6
    )
