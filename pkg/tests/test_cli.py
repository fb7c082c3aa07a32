import json
import math

import numpy as np
import pytest

from focalqed import __version__
from focalqed.cli import main
from focalqed.observables import BARIUM_NOTE, casimir_decomposition, CasimirParams
from focalqed.sweeps import (DEFAULTS, SweepResult, SweepSpec, execute,
                             resolve_spec, snap_phase)

SMALL_GRID = ["--grid-theta", "48", "--grid-phi", "96"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------------------
# sweep layer

def test_resolve_fills_every_default():
    spec = resolve_spec("fig3_displacement")
    assert set(spec.parameters) == set(DEFAULTS["fig3_displacement"])
    with pytest.raises(ValueError):
        resolve_spec("fig3_displacement", {"bogus": 1})
    with pytest.raises(ValueError):
        resolve_spec("fig9")


@pytest.mark.parametrize("kind,params", [
    ("fig2_na_sweep", {"na_steps": 9}),
    ("fig2_na_sweep", {"rho": 1.2}),
    ("fig3_displacement", {"direction": "up"}),
    ("fig3_displacement", {"r_max": 0.0}),
    ("fig3_displacement", {"grid_theta": 4}),
    ("fig4_distance", {"a_min": 5.0}),
    ("fig4_distance", {"a_max": 10.0}),
    ("fig4_distance", {"kappa": 1.0}),
    ("casimir_scaling", {"n_list": [10, 100]}),
    ("casimir_scaling", {"n_list": [1, 200]}),
])
def test_resolve_rejects(kind, params):
    with pytest.raises(ValueError):
        resolve_spec(kind, params)


def test_dipole_is_normalized():
    spec = resolve_spec("fig3_displacement", {"dipole": [0, 3, 4]})
    assert spec.parameters["dipole"] == [0.0, 0.6, 0.8]


def test_snap_phase():
    assert snap_phase(20 * math.pi + 1.0) == (20, 20 * math.pi)
    assert snap_phase(20 * math.pi + 1.0, antinode=True) == (20, 20.5 * math.pi)
    assert snap_phase(0.1) == (1, math.pi)


def test_sweep_result_round_trip():
    res = SweepResult(["x", "y"], [[0.1, 1 / 3], [2.0, -1e-300]], {"k": [1, 2.5], "name": "t"})
    back = SweepResult.from_csv(res.to_csv())
    assert back.header == res.header and back.metadata == res.metadata
    np.testing.assert_array_equal(back.rows, res.rows)
    with pytest.raises(ValueError):
        SweepResult(["x"], [[1.0, 2.0]], {})


def test_fig2_small():
    res = execute(resolve_spec("fig2_na_sweep", {"na_steps": 12, "grid_theta": 48, "grid_phi": 96}))
    assert res.header == ["na", "gamma_antinode", "gamma_node"]
    last = res.rows[-1]
    np.testing.assert_allclose(last, [1.0, 2.0, 0.0], atol=1e-8)
    np.testing.assert_allclose(res.rows[0, 1:], 1.0, atol=1e-5)
    assert res.metadata["n_node"] == 20 and res.metadata["a_antinode"] == 20.5 * math.pi


def test_fig4_small():
    res = execute(resolve_spec("fig4_distance", {"steps": 81, "grid_theta": 48, "grid_phi": 96}))
    g, e, cp = res.column("gamma_bar"), res.column("delta_e_bar"), res.column("delta_cp_bar")
    assert g.min() == pytest.approx(0.0, abs=1e-6) and g.max() == pytest.approx(2.0, abs=1e-6)
    assert e.min() == pytest.approx(-1.0, abs=1e-6) and e.max() == pytest.approx(1.0, abs=1e-6)
    assert abs(cp[-1]) < abs(cp[0])


def test_scaling_table():
    res = execute(resolve_spec("casimir_scaling"))
    assert res.metadata["slope_delta_cp"] == pytest.approx(-2.0, abs=0.05)
    assert res.metadata["slope_plane_mirror"] == pytest.approx(-4.0, abs=1e-9)


def test_check_suite_kind_has_no_table():
    with pytest.raises(ValueError):
        execute(SweepSpec("check_suite"))


# ---------------------------------------------------------------------------
# command line

def test_fig3_stdout_csv(capsys):
    code, out, _ = run(capsys, "fig3", "--r-max", "1", "--steps", "11", *SMALL_GRID)
    assert code == 0
    res = SweepResult.from_csv(out)
    assert res.header == ["r_wavelengths", "gamma_bar"]
    assert res.rows[0, 1] < 1e-8
    assert res.metadata["version"] == __version__
    assert res.metadata["parameters"]["steps"] == 11


def test_output_file_and_json(tmp_path, capsys):
    path = tmp_path / "f.json"
    assert main(["fig3", "--steps", "5", "--r-max", "0.5", "--json", "--output", str(path)]) == 0
    doc = json.loads(path.read_text())
    assert doc["header"] == ["r_wavelengths", "gamma_bar"] and len(doc["rows"]) == 5


def test_config_with_flag_override(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"kind": "fig3_displacement",
                               "parameters": {"steps": 7, "r_max": 2.0, "direction": "transverse"}}))
    code, out, _ = run(capsys, "fig3", "--config", str(cfg), "--steps", "5", *SMALL_GRID)
    assert code == 0
    res = SweepResult.from_csv(out)
    assert len(res.rows) == 5
    assert res.metadata["parameters"]["direction"] == "transverse"
    assert res.rows[-1, 0] == 2.0


def test_config_kind_mismatch(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"kind": "fig2_na_sweep"}))
    code, _, err = run(capsys, "fig3", "--config", str(cfg))
    assert code == 2 and "fig2_na_sweep" in err


def test_na_flag_converts_to_alpha(capsys):
    code, out, _ = run(capsys, "fig3", "--na", "0.5", "--steps", "3", "--r-max", "0.1", *SMALL_GRID)
    assert code == 0
    assert SweepResult.from_csv(out).metadata["parameters"]["alpha_deg"] == pytest.approx(30.0)


def test_alpha_and_na_are_exclusive(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fig3", "--na", "0.5", "--alpha-deg", "30"])
    assert exc.value.code == 2


def test_invalid_inputs_exit_2(capsys):
    assert run(capsys, "fig2", "--na-steps", "3")[0] == 2
    assert run(capsys, "fig3", "--na", "1.5")[0] == 2
    assert run(capsys, "fig4", "--a-min", "3")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["fig3", "--direction", "diagonal"])
    assert exc.value.code == 2


def test_casimir_dimensionless(capsys):
    code, out, _ = run(capsys, "casimir", "--a", str(100 * math.pi), "--kappa", "1000", "--json")
    assert code == 0
    rep = json.loads(out)
    ref = casimir_decomposition(CasimirParams(100 * math.pi, 1000.0))
    assert rep["delta_cp"] == ref.delta_cp
    assert rep["delta_se"] + rep["delta_fs"] + rep["delta_cp"] == pytest.approx(rep["lamb_direct"], rel=1e-6)


def test_casimir_physical(capsys):
    code, out, _ = run(capsys, "casimir", "--lambda-nm", "493", "--gamma-hz", "15e6", "--radius-m", "0.01")
    assert code == 0
    assert "shift_hz:" in out and "claimed_hz: 100" in out and BARIUM_NOTE in out


@pytest.mark.parametrize("argv", [
    ["casimir"],
    ["casimir", "--a", "100", "--lambda-nm", "493"],
    ["casimir", "--lambda-nm", "493", "--gamma-hz", "15e6"],
    ["casimir", "--lambda-nm", "493", "--gamma-hz", "15e6", "--radius-m", "1e-6"],
])
def test_casimir_invalid(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "usage:" in err


def test_check_command(capsys, tmp_path):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "check", "--only", "addition_sum_two_thirds", "--only", "barium_emission",
                       "--output", str(path))
    assert code == 0
    assert out.count("PASS") == 2
    rep = json.loads(path.read_text())
    assert rep["passed"] and {c["name"] for c in rep["checks"]} == {"addition_sum_two_thirds", "barium_emission"}


def test_check_failure_exit_code(capsys, monkeypatch):
    import focalqed.checks as checks
    monkeypatch.setitem(checks.CHECKS, "addition_sum_two_thirds", lambda: (1.0, 1e-10))
    code, out, _ = run(capsys, "check", "--only", "addition_sum_two_thirds")
    assert code == 1 and "FAIL" in out


def test_missing_subcommand_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
