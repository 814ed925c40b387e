"""Command-line orchestration: forward data, imaging, SVD, theory, calibration.

Subcommands: forward, image, svd, theory, compare, calibrate.  Every command
is deterministic given the config and seed; floats are written with repr (17
significant digits) so outputs are byte-reproducible.

Exit codes: 0 success, 2 config error, 3 numeric failure.
"""

import argparse
import importlib.resources
import json
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import music, presets, theory
from .calibrate import CalibrationPlan, calibrate_and_image
from .forward_asym import assemble_msr, load_msr, save_msr
from .forward_bie import assemble_msr_bie
from .music import ImageGrid
from .noise import add_awgn
from .scene import make_directions, scene_from_dict
from .theory import TheoryParams


class ConfigError(Exception):
    pass


def _load_schema():
    pkg = importlib.resources.files("crackmusic.schemas")
    run = json.loads((pkg / "runconfig.schema.json").read_text())
    scene = json.loads((pkg / "scene.schema.json").read_text())
    run["properties"]["scene"]["oneOf"][0] = scene   # inline the cross-file ref
    return run


def load_config(args):
    if args.preset:
        cfg = presets.preset_config(args.preset)
    elif args.config:
        with open(args.config) as f:
            cfg = json.load(f)
    else:
        raise ConfigError("one of --config or --preset is required")
    if args.eta:
        cfg["etas"] = list(args.eta)
    if args.snr_db is not None:
        cfg["snr_db"] = args.snr_db
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.grid:
        parts = args.grid.split(",")
        if len(parts) != 5:
            raise ConfigError('--grid expects "x0,x1,y0,y1,step"')
        x0, x1, y0, y1, step = (float(p) for p in parts)
        cfg["grid"] = {"x0": x0, "x1": x1, "y0": y0, "y1": y1, "step": step}
    if args.signal_dim:
        cfg["signal_dim"] = _parse_signal_dim(args.signal_dim)
    try:
        jsonschema.validate(cfg, _load_schema())
    except jsonschema.ValidationError as e:
        raise ConfigError(f"config does not match schema: {e.message}") from e
    return cfg


def _parse_signal_dim(spec):
    if spec == "log_gap":
        return {"method": "log_gap"}
    if spec.startswith("manual:"):
        return {"method": "manual", "m": int(spec.split(":", 1)[1])}
    if spec.startswith("threshold:"):
        return {"method": "threshold", "tau": float(spec.split(":", 1)[1])}
    raise ConfigError(f"bad --signal-dim {spec!r}; use manual:M, log_gap, or threshold:T")


def _scene(cfg):
    sc = cfg["scene"]
    if "file" in sc:
        with open(sc["file"]) as f:
            sc = json.load(f)
    return scene_from_dict(sc)


def _dirs(cfg):
    d = cfg["directions"]
    return make_directions(d["n"], d.get("mode", "closed"))


def _grid(cfg):
    g = cfg["grid"]
    return ImageGrid(x0=g["x0"], x1=g["x1"], y0=g["y0"], y1=g["y1"], step=g["step"])


def _signal_dim(cfg):
    sd = cfg.get("signal_dim", {"method": "log_gap"})
    if sd["method"] == "manual":
        return ("manual", sd["m"])
    if sd["method"] == "threshold":
        return ("threshold", sd["tau"])
    return ("log_gap", None)


def _select(space, cfg):
    method, arg = _signal_dim(cfg)
    if method == "manual":
        return music.select_signal_dim(space, "manual", m=arg)
    if method == "threshold":
        return music.select_signal_dim(space, "threshold", tau=arg)
    return music.select_signal_dim(space, "log_gap")


def compute_msr(cfg):
    scene = _scene(cfg)
    dirs = _dirs(cfg)
    if cfg["forward"] == "asym":
        if "h" not in cfg:
            raise ConfigError("asymptotic forward model requires h")
        msr = assemble_msr(scene, cfg["h"], dirs)
    else:
        msr = assemble_msr_bie(scene, dirs, n=cfg.get("bie_n"))
    if "snr_db" in cfg:
        msr = add_awgn(msr, cfg["snr_db"], cfg.get("seed", 0))
    return msr


def _get_msr(args, cfg):
    if args.msr:
        csv_path = Path(args.msr)
        return load_msr(csv_path, csv_path.with_suffix(".json"))
    return compute_msr(cfg)


def _etatag(eta):
    return f"{eta:g}"


def _write_json(obj, path):
    with open(path, "w") as f:
        json.dump(obj, f, indent=2, sort_keys=True)


def cmd_forward(args):
    cfg = load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    msr = compute_msr(cfg)
    save_msr(msr, out / "msr.csv", out / "msr.json")
    print(out / "msr.csv")
    return 0


def cmd_image(args):
    cfg = load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    msr = _get_msr(args, cfg)
    space = _select(music.svd_msr(msr), cfg)
    grid = _grid(cfg)
    for eta in cfg["etas"]:
        imap = music.imaging_map(space, grid, eta, msr.directions)
        tag = _etatag(eta)
        music.save_map_csv(imap, out / f"map_eta{tag}.csv")
        music.save_map_pgm(imap, out / f"map_eta{tag}.pgm")
        peaks = music.find_peaks(imap, max(space.m, 1))
        _write_json({"eta": eta, "m": space.m, "complete": peaks.complete,
                     "peaks": [{"x": p[0], "y": p[1], "value": v}
                               for p, v in peaks.peaks]},
                    out / f"peaks_eta{tag}.json")
        if space.m == 0:
            print(f"warning: M=0, map at eta={tag} is flat", file=sys.stderr)
        print(out / f"map_eta{tag}.csv")
    return 0


def cmd_svd(args):
    cfg = load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    msr = _get_msr(args, cfg)
    space = _select(music.svd_msr(msr), cfg)
    music.save_spectrum_csv(space, out / "spectrum.csv")
    _write_json({"m": space.m, "ambiguous": space.ambiguous,
                 "method": cfg.get("signal_dim", {"method": "log_gap"})["method"]},
                out / "selection.json")
    print(out / "spectrum.csv")
    return 0


def cmd_theory(args):
    cfg = load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    scene = _scene(cfg)
    grid = _grid(cfg)
    for eta in cfg["etas"]:
        params = TheoryParams(wavenumber=scene.wavenumber, eta=eta,
                              centers=scene.centers(),
                              variant=cfg.get("theory_variant", "squared"))
        tmap = theory.theory_map(params, grid)
        tag = _etatag(eta)
        music.save_map_csv(tmap, out / f"theory_eta{tag}.csv")
        music.save_map_pgm(tmap, out / f"theory_eta{tag}.pgm")
        print(out / f"theory_eta{tag}.csv")
    return 0


def cmd_compare(args):
    cfg = load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    scene = _scene(cfg)
    msr = _get_msr(args, cfg)
    space = _select(music.svd_msr(msr), cfg)
    grid = _grid(cfg)
    excl = cfg.get("exclusion_radius", 0.5)
    for eta in cfg["etas"]:
        imap = music.imaging_map(space, grid, eta, msr.directions)
        params = TheoryParams(wavenumber=scene.wavenumber, eta=eta,
                              centers=scene.centers(),
                              variant=cfg.get("theory_variant", "squared"))
        tmap = theory.theory_map(params, grid)
        report = theory.compare_maps(imap, tmap, params, exclusion_radius=excl)
        report["eta"] = eta
        _write_json(report, out / f"compare_eta{_etatag(eta)}.json")
        print(out / f"compare_eta{_etatag(eta)}.json")
    return 0


def cmd_calibrate(args):
    cfg = load_config(args)
    if "calibration" not in cfg:
        raise ConfigError("calibrate requires a 'calibration' config section")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cal = cfg["calibration"]
    plan = CalibrationPlan(y=tuple(cal["y"]), eta=cal["eta"],
                           kind=cal.get("kind", "extended"))
    msr = _get_msr(args, cfg)
    k_hat, remap, info = calibrate_and_image(msr, plan, _grid(cfg),
                                             signal_dim=_signal_dim(cfg))
    _write_json(info, out / "calibration.json")
    music.save_map_csv(remap, out / "map_khat.csv")
    music.save_map_pgm(remap, out / "map_khat.pgm")
    print(out / "calibration.json")
    return 0


_COMMANDS = {
    "forward": cmd_forward,
    "image": cmd_image,
    "svd": cmd_svd,
    "theory": cmd_theory,
    "compare": cmd_compare,
    "calibrate": cmd_calibrate,
}


def build_parser():
    p = argparse.ArgumentParser(prog="crackmusic",
                                description="MUSIC-type crack imaging from multistatic far-field data")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="run configuration JSON file")
        sp.add_argument("--preset", choices=presets.PRESET_NAMES,
                        help="use a built-in configuration")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--msr", help="existing MSR CSV file (sidecar: same name .json)")
        sp.add_argument("--eta", type=float, action="append",
                        help="probe wavenumber (repeatable; overrides config)")
        sp.add_argument("--snr-db", dest="snr_db", type=float)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--grid", help='"x0,x1,y0,y1,step"')
        sp.add_argument("--signal-dim", dest="signal_dim",
                        help="manual:M | log_gap | threshold:T")
        sp.set_defaults(fn=fn)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (ArithmeticError, ValueError, np.linalg.LinAlgError) as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
