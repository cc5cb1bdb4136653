"""Command-line front end.

Subcommands:
  simulate  --config cfg.json [--figure figN] [--svg]
  sweep     --config cfg.json --param name --values v1,v2,... [--workers N]
  selfcheck [--seed N]

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure,
3 invariant failure. The environment variable NLCOUPLER_OUTPUT_ROOT, when
set, prefixes every relative output directory.
"""

import argparse
import concurrent.futures
import json
import math
import os
import sys

import numpy as np

from . import reporting, selfcheck
from .classical import (CouplerParams, IntegrationError, power_for_kappa,
                        zeta_to_z)
from .devices import (CouplerDevice, TwoModeSqueezerDevice, beat_length,
                      run_coupler, run_single_shg, run_two_mode_squeezer)
from .gaussian import Bipartition, InvalidStateError, log_negativity
from .loss import ETA_CONVENTIONS, LossSpec
from .metrics import VLF_THRESHOLD
from .presets import FIGURE_TAGS, preset_device

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_INVARIANT = 3

SWEEP_PARAMS = ("kappa", "P", "C", "g", "zeta_end", "gamma_f", "gamma_h")


class ConfigError(ValueError):
    pass


def load_config(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")


def resolve_output_dir(config):
    directory = config.get("output", {}).get("directory", "out")
    root = os.environ.get("NLCOUPLER_OUTPUT_ROOT")
    if root and not os.path.isabs(directory):
        directory = os.path.join(root, directory)
    return directory


def _device_section(config, figure=None):
    device = dict(config.get("device", {}))
    if figure is not None:
        base = preset_device(figure)
        base.update(device)
        device = base
    if "kind" not in device:
        raise ConfigError("device section needs a 'kind' "
                          "(coupler, single_shg, two_mode_squeezer)")
    return device


def _numerics(config):
    section = config.get("numerics", {})
    step = float(section.get("step", 1e-3))
    sample_every = int(section.get("sample_every", 5))
    if step <= 0 or sample_every < 1:
        raise ConfigError("numerics: step must be positive, sample_every >= 1")
    return step, sample_every


def _coupler_params(device):
    coupling = float(device.get("coupling", 0.08))
    nonlinearity = float(device.get("nonlinearity", 0.0025))
    if "kappa" in device:
        return CouplerParams.from_kappa(float(device["kappa"]), coupling,
                                        nonlinearity)
    if "power" in device:
        return CouplerParams.from_physical(coupling, nonlinearity,
                                           float(device["power"]))
    raise ConfigError("coupler device needs 'kappa' or 'power'")


def _loss_spec(device):
    section = device.get("loss")
    if not section:
        return None, "db"
    convention = section.get("convention", "db")
    if convention not in ETA_CONVENTIONS:
        raise ConfigError(f"unknown loss convention {convention!r}")
    return LossSpec(float(section["gamma_f"]), float(section["gamma_h"])), convention


def _single_power(device):
    if "power" in device:
        return float(device["power"])
    kappa_ref = float(device.get("kappa_reference", 1.13))
    fraction = float(device.get("power_fraction", 0.5))
    total = power_for_kappa(kappa_ref, float(device.get("coupling", 0.08)),
                            float(device.get("nonlinearity", 0.0025)))
    return fraction * total


def _base_metadata(device, extra=None):
    meta = {
        "device": device,
        "log_base": 2,
        "vacuum_variance": 0.5,
        "vlf_threshold": VLF_THRESHOLD,
        "vlf_combinations": "I:(fa,ha)+g(fb,hb) II:(fa,fb)+g(ha,hb) III:(fb,hb)+g(fa,ha)",
    }
    meta.update(extra or {})
    return meta


def run_simulate_coupler(device, step, sample_every, out_dir, svg):
    params = _coupler_params(device)
    loss, convention = _loss_spec(device)
    dev = CouplerDevice(
        params=params,
        power_ratio=float(device.get("power_ratio", 1e-18)),
        theta_f0=float(device.get("theta_f0", 0.0)),
        phi_f0=float(device.get("phi_f0", 0.0)),
        zeta_end=float(device.get("zeta_end", 3.5)),
        step=step,
        sample_every=sample_every,
        loss=loss,
        loss_convention=convention,
        method=device.get("method", "exponential"),
    )
    report = run_coupler(dev)
    meta = _base_metadata(device, {
        "kappa": params.kappa,
        "power_mw": params.power,
        "z_mm_per_zeta": zeta_to_z(1.0, params.nonlinearity, params.power),
        "loss_convention": convention if loss else None,
        "step": step,
        "sample_every": sample_every,
    })
    zetas = report.zetas
    reporting.write_trajectory_csv(
        os.path.join(out_dir, "trajectory.csv"), report.propagation.trajectory, meta)
    reporting.write_covariance_csv(
        os.path.join(out_dir, "covariance.csv"), zetas,
        report.propagation.covariances, meta)
    reporting.write_entanglement_csv(
        os.path.join(out_dir, "entanglement.csv"), zetas, report.pair_rows,
        report.vlf_rows, report.epr, meta, report.lossy_pair_rows)
    reporting.write_json(os.path.join(out_dir, "run_metadata.json"), meta)
    if svg:
        en = np.array([r.values() for r in report.pair_rows])
        reporting.write_svg_lines(
            os.path.join(out_dir, "entanglement.svg"), zetas,
            {"E(fa,fb)": en[:, 0], "E(ha,hb)": en[:, 1],
             "E(fa,ha)": en[:, 2], "E(fa,hb)": en[:, 3]},
            title="bipartite negativities", xlabel="zeta", ylabel="E_N")
        vlf = np.array([r.values for r in report.vlf_rows])
        reporting.write_svg_lines(
            os.path.join(out_dir, "vlf.svg"), zetas,
            {"I": vlf[:, 0], "II": vlf[:, 1], "III": vlf[:, 2],
             "threshold": np.full(len(zetas), VLF_THRESHOLD)},
            title="optimized inequality values", xlabel="zeta", ylabel="value")
        powers = report.propagation.trajectory.powers()
        reporting.write_svg_lines(
            os.path.join(out_dir, "powers.svg"), zetas,
            {"u_f^2": powers[:, 0], "v_f^2": powers[:, 1],
             "u_h^2": powers[:, 2], "v_h^2": powers[:, 3]},
            title="classical powers", xlabel="zeta", ylabel="power")
    return report


def run_simulate_single(device, step, sample_every, out_dir, svg):
    power = _single_power(device)
    nonlinearity = float(device.get("nonlinearity", 0.0025))
    report = run_single_shg(power, nonlinearity,
                            float(device.get("zeta_end", 1.0)),
                            power_ratio=float(device.get("power_ratio", 1e-18)),
                            step=step, sample_every=sample_every,
                            method=device.get("method", "exponential"))
    meta = _base_metadata(device, {
        "power_mw": power,
        "z_mm_per_zeta": zeta_to_z(1.0, nonlinearity, power),
        "step": step,
        "sample_every": sample_every,
    })
    amps = report.propagation.trajectory.amplitudes
    zetas = report.zetas
    with np.errstate(invalid="ignore"):
        th = np.angle(amps)
    en_fh = [log_negativity(V, Bipartition((0,), (1,)))
             for V in report.propagation.covariances]
    rows = [(float(z), float(abs(amps[i, 0]) ** 2), float(abs(amps[i, 1]) ** 2),
             float(th[i, 0]), float(th[i, 1]), float(report.dtheta[i]),
             float(en_fh[i]))
            for i, z in enumerate(zetas)]
    reporting.write_csv(
        os.path.join(out_dir, "trajectory.csv"),
        ("zeta", "u_f2", "u_h2", "theta_f", "theta_h", "dtheta", "en_fh"),
        rows, meta)
    reporting.write_json(os.path.join(out_dir, "run_metadata.json"), meta)
    if svg:
        reporting.write_svg_lines(
            os.path.join(out_dir, "shg.svg"), zetas,
            {"u_f^2": np.abs(amps[:, 0]) ** 2, "u_h^2": np.abs(amps[:, 1]) ** 2,
             "E(f,h)": np.array(en_fh)},
            title="single-waveguide SHG", xlabel="zeta", ylabel="power / E_N")
    return report


def run_simulate_squeezer(device, step, sample_every, out_dir, svg):
    coupling = float(device.get("coupling", 0.08))
    z_grid = device.get("z_grid_mm")
    dev = TwoModeSqueezerDevice(
        stage1_length_mm=float(device.get("stage1_length_mm", 10.0)),
        nonlinearity=float(device.get("nonlinearity", 0.0025)),
        power_per_waveguide_mw=_single_power(device),
        coupling=coupling,
        z_grid_mm=np.asarray(z_grid, dtype=float) if z_grid is not None else None,
        power_ratio=float(device.get("power_ratio", 1e-18)),
        step=step,
        sample_every=sample_every,
        method=device.get("method", "exponential"),
    )
    report = run_two_mode_squeezer(dev)
    meta = _base_metadata(device, {
        "power_per_waveguide_mw": dev.power_per_waveguide_mw,
        "beat_length_mm": beat_length(coupling),
        "step": step,
        "sample_every": sample_every,
    })
    columns = ["z_mm", *reporting.PAIR_COLUMNS, *reporting.VLF_COLUMNS]
    rows = [(float(z), *report.pair_rows[i].values(), *report.vlf_rows[i].values)
            for i, z in enumerate(report.z_mm)]
    reporting.write_csv(os.path.join(out_dir, "entanglement.csv"),
                        columns, rows, meta)
    reporting.write_json(os.path.join(out_dir, "run_metadata.json"), meta)
    if svg:
        en = np.array([r.values() for r in report.pair_rows])
        reporting.write_svg_lines(
            os.path.join(out_dir, "entanglement.svg"), report.z_mm,
            {"E(fa,fb)": en[:, 0], "E(ha,hb)": en[:, 1],
             "E(fa,ha)": en[:, 2], "E(fa,hb)": en[:, 3]},
            title="coupler-length sweep", xlabel="z (mm)", ylabel="E_N")
    return report


_RUNNERS = {
    "coupler": run_simulate_coupler,
    "single_shg": run_simulate_single,
    "two_mode_squeezer": run_simulate_squeezer,
}


def simulate_from_config(config, figure=None, svg=False, out_dir=None):
    device = _device_section(config, figure)
    step, sample_every = _numerics(config)
    if out_dir is None:
        out_dir = resolve_output_dir(config)
    kind = device["kind"]
    if kind not in _RUNNERS:
        raise ConfigError(f"unknown device kind {kind!r}")
    svg = svg or "svg" in config.get("output", {}).get("formats", [])
    return _RUNNERS[kind](device, step, sample_every, out_dir, svg)


def cmd_simulate(args):
    config = load_config(args.config)
    simulate_from_config(config, figure=args.figure, svg=args.svg)
    return EXIT_OK


def _set_sweep_param(device, name, value):
    if name == "kappa":
        device["kappa"] = value
        device.pop("power", None)
    elif name == "P":
        device["power"] = value
        device.pop("kappa", None)
    elif name == "C":
        device["coupling"] = value
    elif name == "g":
        device["nonlinearity"] = value
    elif name == "zeta_end":
        device["zeta_end"] = value
    elif name in ("gamma_f", "gamma_h"):
        loss = device.setdefault("loss", {"gamma_f": 0.0, "gamma_h": 0.0})
        loss[name] = value
    else:
        raise ConfigError(f"unknown sweep parameter {name!r}; "
                          f"one of {', '.join(SWEEP_PARAMS)}")
    return device


def _sweep_one(config, name, value, out_dir):
    config = json.loads(json.dumps(config))  # deep copy, keeps workers isolated
    device = _device_section(config)
    _set_sweep_param(device, name, value)
    config["device"] = device
    report = simulate_from_config(config, out_dir=out_dir)
    zetas = np.asarray(report.zetas)
    peaks = {}
    arg_peaks = {}
    en = np.array([row.values() for row in report.pair_rows])
    for j, col in enumerate(reporting.PAIR_COLUMNS):
        peaks[col] = float(en[:, j].max())
        arg_peaks[col] = float(zetas[int(np.argmax(en[:, j]))])
    vlf = np.array([row.values for row in report.vlf_rows])
    violated = np.all(vlf < VLF_THRESHOLD, axis=1)
    window = (float(zetas[violated][0]), float(zetas[violated][-1])) \
        if violated.any() else (math.nan, math.nan)
    return value, peaks, arg_peaks, window


def cmd_sweep(args):
    config = load_config(args.config)
    values = [float(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError("empty sweep value list")
    if args.param not in SWEEP_PARAMS:
        raise ConfigError(f"unknown sweep parameter {args.param!r}; "
                          f"one of {', '.join(SWEEP_PARAMS)}")
    root = resolve_output_dir(config)
    jobs = [(config, args.param, v,
             os.path.join(root, f"{args.param}={v:g}")) for v in values]
    if args.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(args.workers) as pool:
            results = list(pool.map(_sweep_one, *zip(*jobs)))
    else:
        results = [_sweep_one(*job) for job in jobs]

    columns = ["value"]
    columns += [f"peak_{c}" for c in reporting.PAIR_COLUMNS]
    columns += [f"zeta_peak_{c}" for c in reporting.PAIR_COLUMNS]
    columns += ["vlf_window_start", "vlf_window_end"]
    rows = []
    for value, peaks, arg_peaks, window in results:
        rows.append((value, *peaks.values(), *arg_peaks.values(), *window))
    reporting.write_csv(os.path.join(root, "sweep_summary.csv"), columns, rows,
                        {"param": args.param, "values": values})
    return EXIT_OK


def cmd_selfcheck(args):
    results = selfcheck.run_all(seed=args.seed)
    width = max(len(name) for name, _, _ in results)
    failed = False
    for name, ok, detail in results:
        status = "PASS" if ok else "FAIL"
        print(f"{name:<{width}}  {status}  {detail}")
        failed = failed or not ok
    return EXIT_INVARIANT if failed else EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nlcoupler",
        description="Nonlinear directional coupler simulation front end")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one device and write artifacts")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--figure", choices=FIGURE_TAGS, default=None)
    p_sim.add_argument("--svg", action="store_true",
                       help="also write SVG line plots")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--param", required=True)
    p_sweep.add_argument("--values", required=True,
                         help="comma-separated numeric list")
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.set_defaults(func=cmd_sweep)

    p_check = sub.add_parser("selfcheck", help="run the invariant suite")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except InvalidStateError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
