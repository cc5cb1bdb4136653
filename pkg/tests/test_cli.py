import json
import os

import numpy as np
import pytest

from nlcoupler import cli, reporting

FAST_NUMERICS = {"step": 2e-3, "sample_every": 50}


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run_cli(args, tmp_path, monkeypatch):
    monkeypatch.setenv("NLCOUPLER_OUTPUT_ROOT", str(tmp_path))
    return cli.main(args)


def test_simulate_figure_preset_writes_artifacts(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, {
        "device": {"zeta_end": 1.0},
        "output": {"directory": "fig3"},
        "numerics": FAST_NUMERICS,
    })
    code = run_cli(["simulate", "--config", cfg, "--figure", "fig3", "--svg"],
                   tmp_path, monkeypatch)
    assert code == cli.EXIT_OK
    out = tmp_path / "fig3"
    for name in ("trajectory.csv", "covariance.csv", "entanglement.csv",
                 "run_metadata.json", "entanglement.svg", "vlf.svg"):
        assert (out / name).exists()
    meta, columns, data, footer = reporting.read_csv(out / "entanglement.csv")
    assert meta["kappa"] == "1.13"
    assert meta["log_base"] == "2"
    for col in ("en_ff", "en_hh", "en_fh_same", "en_fh_cross",
                "vlf_1", "vlf_2", "vlf_3", "vlf_threshold"):
        assert col in columns
    assert data.shape[0] > 5
    assert data[0, columns.index("zeta")] == 0.0
    assert np.all(data[:, columns.index("vlf_threshold")] == 2.0)
    svg = (out / "entanglement.svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_simulate_outputs_are_deterministic(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, {
        "device": {"kind": "coupler", "kappa": 1.13, "zeta_end": 0.5},
        "output": {"directory": "run"},
        "numerics": FAST_NUMERICS,
    })
    run_cli(["simulate", "--config", cfg], tmp_path, monkeypatch)
    first = (tmp_path / "run" / "entanglement.csv").read_bytes()
    run_cli(["simulate", "--config", cfg], tmp_path, monkeypatch)
    assert (tmp_path / "run" / "entanglement.csv").read_bytes() == first


def test_simulate_missing_config_fails_without_outputs(tmp_path, monkeypatch):
    code = run_cli(["simulate", "--config", str(tmp_path / "nope.json")],
                   tmp_path, monkeypatch)
    assert code == cli.EXIT_USAGE
    assert list(tmp_path.iterdir()) == []


def test_simulate_malformed_config_reports_location(tmp_path, monkeypatch, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"device": }')
    code = run_cli(["simulate", "--config", str(bad)], tmp_path, monkeypatch)
    assert code == cli.EXIT_USAGE
    assert ":1:" in capsys.readouterr().err


def test_simulate_unknown_device_kind(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, {"device": {"kind": "laser"}})
    code = run_cli(["simulate", "--config", cfg], tmp_path, monkeypatch)
    assert code == cli.EXIT_USAGE


def test_simulate_single_shg(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, {
        "device": {},
        "output": {"directory": "fig7"},
        "numerics": FAST_NUMERICS,
    })
    code = run_cli(["simulate", "--config", cfg, "--figure", "fig7"],
                   tmp_path, monkeypatch)
    assert code == cli.EXIT_OK
    meta, columns, data, _ = reporting.read_csv(tmp_path / "fig7" / "trajectory.csv")
    assert "en_fh" in columns and "dtheta" in columns
    dtheta = data[1:, columns.index("dtheta")]
    assert np.abs(dtheta - np.pi / 2).max() < 1e-6


def test_simulate_two_mode_squeezer(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, {
        "device": {"z_grid_mm": list(np.linspace(0.0, 39.27, 41))},
        "output": {"directory": "fig8"},
        "numerics": FAST_NUMERICS,
    })
    code = run_cli(["simulate", "--config", cfg, "--figure", "fig8"],
                   tmp_path, monkeypatch)
    assert code == cli.EXIT_OK
    meta, columns, data, _ = reporting.read_csv(tmp_path / "fig8" / "entanglement.csv")
    assert columns[0] == "z_mm"
    en_hh = data[:, columns.index("en_hh")]
    assert np.abs(en_hh).max() < 1e-9


def test_sweep_summary_and_ordering(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, {
        "device": {"kind": "coupler", "kappa": 1.13, "zeta_end": 2.2},
        "output": {"directory": "sweep"},
        "numerics": FAST_NUMERICS,
    })
    code = run_cli(["sweep", "--config", cfg, "--param", "kappa",
                    "--values", "1.13,0.9"], tmp_path, monkeypatch)
    assert code == cli.EXIT_OK
    meta, columns, data, _ = reporting.read_csv(
        tmp_path / "sweep" / "sweep_summary.csv")
    assert data.shape[0] == 2
    peak = columns.index("peak_en_hh")
    # entanglement grows as the effective coupling decreases
    assert data[1, peak] >= data[0, peak]
    assert (tmp_path / "sweep" / "kappa=1.13" / "entanglement.csv").exists()
    assert (tmp_path / "sweep" / "kappa=0.9" / "entanglement.csv").exists()


def test_sweep_usage_errors(tmp_path, monkeypatch):
    cfg = write_config(tmp_path, {"device": {"kind": "coupler", "kappa": 1.13}})
    assert run_cli(["sweep", "--config", cfg, "--param", "bogus",
                    "--values", "1"], tmp_path, monkeypatch) == cli.EXIT_USAGE
    assert run_cli(["sweep", "--config", cfg, "--param", "kappa",
                    "--values", ""], tmp_path, monkeypatch) == cli.EXIT_USAGE


def test_selfcheck_passes(capsys):
    assert cli.main(["selfcheck", "--seed", "1"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_unknown_subcommand_is_usage_error():
    assert cli.main(["transmogrify"]) == cli.EXIT_USAGE
