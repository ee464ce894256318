import csv
import json
import math

import jsonschema
import pytest

from cavity_ququart import cli
from cavity_ququart.hilbert import ConfigurationError
from cavity_ququart.protocols import teleportation as tp


def run_cli(tmp_path, scenario, config=None, *extra):
    tmp_path.mkdir(parents=True, exist_ok=True)
    out = tmp_path / scenario
    args = [scenario, "--out", str(out), *extra]
    if config is not None:
        path = tmp_path / f"{scenario}.json"
        path.write_text(json.dumps(config))
        args += ["--config", str(path)]
    code = cli.main(args)
    summary = json.loads((out / "summary.json").read_text()) if (out / "summary.json").exists() else None
    return code, summary, out


@pytest.mark.parametrize("scenario", ["transfer", "ames", "teleport", "validate-effective"])
def test_default_scenarios_pass(tmp_path, scenario):
    code, summary, out = run_cli(tmp_path, scenario, {"grid": {"n_samples": 41}})
    assert code == 0
    assert summary["status"] == "ok"
    assert all(c["passed"] for c in summary["checks"])
    jsonschema.validate(summary, cli._schema())
    for name in summary["artifacts"]:
        assert (out / name).exists()


def test_scan_reports_failed_coupling_floor(tmp_path):
    code, summary, out = run_cli(tmp_path, "scan")
    failed = {c["name"] for c in summary["checks"] if not c["passed"]}
    assert code == 2
    assert failed == {"coupling_scan_min_fidelity"}
    rows = list(csv.reader((out / "scan_time.csv").open()))
    assert rows[0] == ["relative_error", "fidelity"] and len(rows) == 22


def test_runs_are_byte_reproducible(tmp_path):
    cfg = {"grid": {"n_samples": 31}, "seed": 5}
    _, _, a = run_cli(tmp_path / "a", "teleport", cfg)
    _, _, b = run_cli(tmp_path / "b", "teleport", cfg)
    for name in ("summary.json", "teleport_branches.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_timeseries_rows_and_header(tmp_path):
    _, summary, out = run_cli(tmp_path, "transfer", {"grid": {"n_samples": 17}})
    rows = list(csv.reader((out / "transfer_timeseries.csv").open()))
    assert rows[0][0] == "t_seconds" and rows[0][-1] == "fidelity"
    assert rows[0][1:4] == ["gg1_re", "gg1_im", "gg1_pop"]
    assert len(rows) == 18
    assert (out / "transfer_timeseries.csv").read_bytes().count(b"\r") == 0


def test_rejected_ames_exits_two(tmp_path):
    code, summary, _ = run_cli(tmp_path, "ames", {"params": {"lambda_prime": 100e6}})
    assert code == 2
    assert summary["status"] == "rejected"
    assert summary["results"]["condition_margin"] < 0


def test_angular_units_flag(tmp_path):
    cfg = {"params": {"g": 2 * math.pi * 15.2e9, "omega_op": 2 * math.pi * 192e12}, "grid": {"n_samples": 5}}
    _, hz_summary, _ = run_cli(tmp_path / "hz", "transfer", {"grid": {"n_samples": 5}})
    _, rad_summary, _ = run_cli(tmp_path / "rad", "transfer", cfg, "--angular")
    assert rad_summary["params"]["g_A"] == pytest.approx(hz_summary["params"]["g_A"], rel=1e-15)


def test_zero_coupling_validate_needs_t_end(tmp_path):
    bad = {"params": {"g": 0.0, "detuning": 1.5e12}}
    assert run_cli(tmp_path / "bad", "validate-effective", bad)[0] == 1
    good = {"params": {"g": 0.0, "detuning": 1.5e12}, "grid": {"t_end": 1e-9, "n_samples": 11}}
    code, summary, _ = run_cli(tmp_path / "good", "validate-effective", good)
    assert code == 0
    assert summary["results"]["max_population_deviation"] == 0.0


def test_moderate_detuning_is_informational(tmp_path):
    code, summary, _ = run_cli(tmp_path, "validate-effective",
                               {"params": {"detuning_over_g": 10}, "grid": {"n_samples": 41}})
    assert code == 0
    assert summary["results"]["thresholds_enforced"] is False
    assert summary["results"]["max_photon_population"] > 5e-4


def test_imperfect_resource_reports_channel_fidelity(tmp_path):
    cfg = {"resource": "ames", "resource_time_error": 0.05}
    code, summary, _ = run_cli(tmp_path, "teleport", cfg)
    res = summary["results"]
    assert code == 0
    assert res["entanglement_fidelity"] == pytest.approx(res["resource_fidelity"], abs=1e-12)
    assert res["average_fidelity"] == pytest.approx((4 * res["entanglement_fidelity"] + 1) / 5, abs=1e-12)


@pytest.mark.parametrize("config, field", [
    ({"params": {"g": -1.0}}, "params.g"),
    ({"params": {"n_max": 0}}, "params.n_max"),
    ({"params": {"colour": 1}}, "params.colour"),
    ({"grid": {"n_samples": 1}}, "grid.n_samples"),
    ({"variant": "two_photon"}, "variant"),
    ({"tolerances": {"norm": -1}}, "tolerances.norm"),
    ({"tolerances": {"speed": 1}}, "tolerances.speed"),
    ({"seed": "x"}, "seed"),
    ({"input": {"gg": [0, 0]}}, "input"),
])
def test_config_errors_name_the_field(config, field):
    with pytest.raises(ConfigurationError, match=field.replace(".", r"\.")):
        cli.parse_config(config, "transfer")


def test_config_error_exit_code(tmp_path, capsys):
    code, summary, _ = run_cli(tmp_path, "transfer", {"params": {"g": "fast"}})
    assert code == 1 and summary is None
    assert "params.g" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert cli.main(["transfer", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 1


def test_transfer_and_ames_never_sample_measurements(tmp_path, monkeypatch):
    def forbidden(*args, **kwargs):
        raise AssertionError("measurement sampling in a deterministic protocol")

    monkeypatch.setattr(tp, "bell_measure", forbidden)
    assert run_cli(tmp_path, "transfer", {"grid": {"n_samples": 5}})[0] == 0
    assert run_cli(tmp_path, "ames", {"grid": {"n_samples": 5}})[0] == 0
