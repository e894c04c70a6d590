"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain or numerical error, 3 I/O
error.  ``HYPERTUBE_CONFIG`` may name a JSON file of default values; a
top-level key applies to every subcommand and a key holding an object
(e.g. ``"tube": {"l": 0.01}``) applies to that subcommand only.  Flags given
on the command line win.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__, checks, comparison, helicoid, mesh, shrinkwrap, tube
from .isometry import T_AXIS
from .numerics import BracketError, QuadratureError
from .serialize import dumps, to_csv

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3

# defaults applied after the config file
DEFAULTS = {
    "theta": None, "r": None, "a": None, "sigma": 0.1, "t": 0.5, "grid": None, "tol": 1e-12,
    "seed": 0, "format": None, "out": None, "umax": 3.0, "periods": 1.0,
    "surface": "helicoid", "s": 1.0, "tilt": 0.7, "slices": 200, "perturb": 0.0, "steps": 0,
    "step_size": 0.1, "save_mesh": None, "samples": 101,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _grid(text: str) -> tuple[int, int]:
    parts = text.replace("x", ",").split(",")
    try:
        vals = tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like M,N, got {text!r}")
    if len(vals) == 1:
        vals = vals * 2
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"grid must look like M,N, got {text!r}")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, allow_abbrev=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=["json", "csv"])
    common.add_argument("--out")
    common.add_argument("--tol", type=float)

    p = _Parser(prog="hypertube", allow_abbrev=False,
                description="Tubes, helicoidal annuli and area comparisons for short geodesics.")
    p.add_argument("--version", action="version", version=f"hypertube {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("tube", parents=[common], allow_abbrev=False, help="maximal tube profile")
    s.add_argument("--l", type=float)

    s = sub.add_parser("annulus", parents=[common], allow_abbrev=False,
                       help="helicoidal annulus area inside a tube")
    s.add_argument("--l", type=float)
    s.add_argument("--theta", type=float)
    s.add_argument("--r", type=float)

    s = sub.add_parser("crossover", parents=[common], allow_abbrev=False,
                       help="annulus vs torus area crossover")
    s.add_argument("--l", type=float)
    s.add_argument("--theta", type=float)
    s.add_argument("--samples", type=int)

    s = sub.add_parser("stability", parents=[common], allow_abbrev=False,
                       help="smallest Jacobi eigenvalue on a helicoid patch")
    s.add_argument("--a", type=float)
    s.add_argument("--umax", type=float)
    s.add_argument("--periods", type=float)
    s.add_argument("--grid", type=_grid)

    s = sub.add_parser("shrinkwrap", parents=[common], allow_abbrev=False,
                       help="conformal shrinkwrapping metric")
    s.add_argument("--sigma", type=float)
    s.add_argument("--t", type=float)

    s = sub.add_parser("mesh", parents=[common], allow_abbrev=False,
                       help="mesh area and minimization")
    s.add_argument("--surface", choices=["helicoid", "disk"])
    s.add_argument("--l", type=float)
    s.add_argument("--theta", type=float)
    s.add_argument("--r", type=float)
    s.add_argument("--grid", type=_grid)
    s.add_argument("--perturb", type=float)
    s.add_argument("--steps", type=int)
    s.add_argument("--step-size", dest="step_size", type=float)
    s.add_argument("--save-mesh", dest="save_mesh")

    s = sub.add_parser("coarea", parents=[common], allow_abbrev=False,
                       help="direct vs sliced area near an axis")
    s.add_argument("--surface", choices=["helicoid", "plane"])
    s.add_argument("--l", type=float)
    s.add_argument("--theta", type=float)
    s.add_argument("--s", type=float)
    s.add_argument("--tilt", type=float)
    s.add_argument("--grid", type=_grid)
    s.add_argument("--slices", type=int)

    s = sub.add_parser("report", parents=[common], allow_abbrev=False,
                       help="run the full verification sweep")
    return p


def load_config(command: str, env=None) -> dict:
    env = os.environ if env is None else env
    path = env.get("HYPERTUBE_CONFIG")
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad config file {path}: {exc}")
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    merged = {k: v for k, v in data.items() if not isinstance(v, dict)}
    merged.update(data.get(command, {}))
    return merged


def resolve(args: argparse.Namespace, env=None) -> dict:
    cfg = dict(DEFAULTS)
    cfg.update(load_config(args.command, env))
    for key, val in vars(args).items():
        if val is not None:
            cfg[key] = val
    if isinstance(cfg.get("grid"), list):
        cfg["grid"] = tuple(cfg["grid"])
    cfg.pop("command", None)
    if cfg["tol"] is not None and not cfg["tol"] > 0:
        raise UsageError("--tol must be positive")
    return cfg


def _require(cfg, *names):
    missing = [n for n in names if cfg.get(n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + n for n in missing))


def _used(cfg: dict, keys) -> dict:
    out = {k: cfg.get(k) for k in keys}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in out.items()}


def _envelope(command: str, cfg: dict, keys, result) -> dict:
    return {"command": command, "version": __version__, "seed": cfg["seed"],
            "config": _used(cfg, keys), "result": result}


def _csv_comments(command: str, cfg: dict, keys, extra: dict | None = None) -> list[str]:
    lines = [f"command: {command}", f"version: {__version__}", f"seed: {cfg['seed']}",
             "config: " + dumps(_used(cfg, keys))]
    for k, v in (extra or {}).items():
        lines.append(f"{k}: {dumps(v)}")
    return lines


# ---------------------------------------------------------------------------
# commands; each returns (text, exit_code)

def cmd_tube(cfg):
    _require(cfg, "l")
    keys = ("l", "format")
    prof = tube.tube_profile(cfg["l"]).as_dict()
    prof["length_bound"] = tube.max_length_bound()
    if cfg["format"] == "csv":
        return to_csv(list(prof), [list(prof.values())], _csv_comments("tube", cfg, keys)), EXIT_OK
    return dumps(_envelope("tube", cfg, keys, prof), indent=2), EXIT_OK


def cmd_annulus(cfg):
    _require(cfg, "l", "theta")
    l, theta = cfg["l"], cfg["theta"]
    r = cfg["r"] if cfg["r"] is not None else tube.tube_radius(l)
    keys = ("l", "theta", "r", "format")
    res = {
        "l": l, "theta": theta, "r": r, "pitch": theta / l,
        "annulus_area": helicoid.annulus_area(l, theta, r),
        "lower_bound_twist": 2 * theta * (math.cosh(r) - 1),
        "lower_bound_core": 2 * l * math.sinh(r),
        "longitude_length": helicoid.longitude_length(l, theta, r),
    }
    if cfg["format"] == "csv":
        return to_csv(list(res), [list(res.values())], _csv_comments("annulus", cfg, keys)), EXIT_OK
    return dumps(_envelope("annulus", cfg, keys, res), indent=2), EXIT_OK


def cmd_crossover(cfg):
    _require(cfg, "l")
    l = cfg["l"]
    fmt = cfg["format"]
    if cfg["theta"] is not None:
        keys = ("l", "theta", "format")
        rep = comparison.main_inequalities(l, cfg["theta"]).as_dict()
        if fmt == "csv":
            return to_csv(list(rep), [list(rep.values())],
                          _csv_comments("crossover", cfg, keys)), EXIT_OK
        return dumps(_envelope("crossover", cfg, keys, rep), indent=2), EXIT_OK
    keys = ("l", "samples", "tol", "format")
    cr = comparison.crossover(l, cfg["tol"])
    n = int(cfg["samples"])
    if n < 2:
        raise UsageError("--samples must be at least 2")
    thetas = np.linspace(2 * cr.theta_star / n, 2 * cr.theta_star, n)
    rows = comparison.gap_curve(l, thetas)
    header = ["l", "theta", "annulus_area", "torus_area", "gap"]
    if fmt == "csv":
        extra = {"theta_star": cr.theta_star, "pitch_star": cr.pitch_star}
        return to_csv(header, rows.tolist(), _csv_comments("crossover", cfg, keys, extra)), EXIT_OK
    res = {"theta_star": cr.theta_star, "pitch_star": cr.pitch_star,
           "curve": [dict(zip(header, row)) for row in rows.tolist()]}
    return dumps(_envelope("crossover", cfg, keys, res), indent=2), EXIT_OK


def cmd_stability(cfg):
    _require(cfg, "a")
    a = cfg["a"]
    keys = ("a", "umax", "periods", "grid", "format")
    patch = helicoid.HelicoidPatch.symmetric(a, cfg["umax"], cfg["periods"])
    grid = cfg["grid"] or helicoid.patch_grid(patch, 16, 16)
    cfg["grid"] = tuple(grid)
    est = helicoid.jacobi_lambda_min(a, patch, grid)
    fine = helicoid.jacobi_lambda_min(a, patch, (2 * grid[0] + 1, 2 * grid[1] + 1))
    stable = est.stable_sign == fine.stable_sign
    res = {"a": a, "patch": [patch.u_min, patch.u_max, patch.v_min, patch.v_max],
           "grid": list(est.grid), "lambda_min": est.lambda_min,
           "stable_sign": est.stable_sign if stable else "inconclusive",
           "refined_grid": list(fine.grid), "refined_lambda_min": fine.lambda_min,
           "sign_stable_under_refinement": stable}
    if cfg["format"] == "csv":
        flat = {k: (" ".join(map(str, v)) if isinstance(v, list) else v) for k, v in res.items()}
        return to_csv(list(flat), [list(flat.values())],
                      _csv_comments("stability", cfg, keys)), EXIT_OK
    return dumps(_envelope("stability", cfg, keys, res), indent=2), EXIT_OK


def cmd_shrinkwrap(cfg):
    keys = ("sigma", "t", "format")
    p = shrinkwrap.ShrinkwrapParams(cfg["sigma"], cfg["t"])
    if cfg["format"] == "csv":
        comments = _csv_comments("shrinkwrap", cfg, keys)
        body = shrinkwrap.profile_csv(p)
        return "".join(f"# {c}\n" for c in comments) + body, EXIT_OK
    barrier = shrinkwrap.minimal_torus(p)
    grid = np.linspace(0.0, 1.5 * p.radius, 1025)
    area = shrinkwrap.disk_cross_section_area(p)
    res = {"sigma": p.sigma, "t": p.t, "support_radius": p.radius,
           "barrier_radius": barrier.radius, "window": list(barrier.window),
           "disk_cross_section_area": area, "disk_ratio": area / (1 - p.t) ** 2,
           "disk_ratio_band": list(shrinkwrap.disk_ratio_band(p.sigma)),
           "area_domination": shrinkwrap.area_domination_check(p, grid)}
    return dumps(_envelope("shrinkwrap", cfg, keys, res), indent=2), EXIT_OK


def _mesh_for(cfg):
    m, n = cfg["grid"] or (32, 32)
    if cfg["surface"] == "disk":
        r = cfg["r"] if cfg["r"] is not None else 1.0
        return mesh.build_meridian_disk_mesh(r, m, n), tube.meridian_disk_area(r)
    _require(cfg, "l", "theta")
    l, theta = cfg["l"], cfg["theta"]
    r = cfg["r"] if cfg["r"] is not None else tube.tube_radius(l)
    return (mesh.build_helicoid_annulus_mesh(l, theta, r, m, n),
            helicoid.annulus_area(l, theta, r))


def cmd_mesh(cfg):
    keys = ("surface", "l", "theta", "r", "grid", "perturb", "steps", "step_size", "format")
    M, reference = _mesh_for(cfg)
    if cfg["perturb"] > 0:
        M = mesh.perturb(M, cfg["perturb"], cfg["seed"])
    area0 = mesh.mesh_area(M)
    res = {"surface": cfg["surface"], "vertices": len(M.vertices), "faces": len(M.faces),
           "reference_area": reference, "mesh_area": area0,
           "rel_err": area0 / reference - 1}
    if cfg["steps"] > 0:
        mr = mesh.minimize_area(M, max_steps=cfg["steps"], step_size=cfg["step_size"])
        M = mr.mesh
        res.update({"minimized_area": mr.areas[-1], "minimized_rel_err": mr.areas[-1] / reference - 1,
                    "steps": mr.steps, "grad_norm": mr.grad_norm, "converged": mr.converged})
    if cfg["save_mesh"]:
        mesh.write_mesh(M, cfg["save_mesh"])
    if cfg["format"] == "csv":
        return to_csv(list(res), [list(res.values())], _csv_comments("mesh", cfg, keys)), EXIT_OK
    return dumps(_envelope("mesh", cfg, keys, res), indent=2), EXIT_OK


def cmd_coarea(cfg):
    keys = ("surface", "l", "theta", "s", "tilt", "grid", "slices", "format")
    s = cfg["s"]
    if cfg["surface"] == "plane":
        tilt = cfg["tilt"]
        m, n = cfg["grid"] or (64, 128)
        radius = 1.1 * math.asinh(math.sinh(s) / math.cos(tilt))
        M = mesh.build_geodesic_disk_mesh(radius, m, n, tilt)
        reference = mesh.tilted_plane_clipped_area(s, tilt)
    else:
        _require(cfg, "l", "theta")
        l, theta = cfg["l"], cfg["theta"]
        r = max(tube.tube_radius(l), 1.05 * s)
        m, n = cfg["grid"] or (64, 64)
        M = mesh.build_helicoid_annulus_mesh(l, theta, r, m, n)
        reference = helicoid.annulus_area(l, theta, s)
    c = mesh.coarea_verify(M, T_AXIS, s, cfg["slices"])
    res = {"surface": cfg["surface"], "s": s, "direct": c.direct, "sliced": c.sliced,
           "rel_diff": c.rel_diff, "reference": reference}
    if cfg["format"] == "csv":
        return to_csv(list(res), [list(res.values())], _csv_comments("coarea", cfg, keys)), EXIT_OK
    return dumps(_envelope("coarea", cfg, keys, res), indent=2), EXIT_OK


def cmd_report(cfg):
    keys = ("seed",)
    results = checks.run_all(cfg["seed"])
    passed = all(c.passed for c in results)
    body = {"passed": passed, "checks": [c.as_dict() for c in results]}
    return dumps(_envelope("report", cfg, keys, body), indent=2), EXIT_OK if passed else EXIT_DOMAIN


COMMANDS = {
    "tube": cmd_tube, "annulus": cmd_annulus, "crossover": cmd_crossover,
    "stability": cmd_stability, "shrinkwrap": cmd_shrinkwrap, "mesh": cmd_mesh,
    "coarea": cmd_coarea, "report": cmd_report,
}


def main(argv=None, env=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        cfg = resolve(args, env)
        if cfg["format"] is None:
            cfg["format"] = "csv" if args.command == "crossover" else "json"
        if cfg["format"] not in ("json", "csv"):
            raise UsageError(f"unknown format {cfg['format']!r}")
        text, code = COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"hypertube: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, ArithmeticError, BracketError, QuadratureError) as exc:
        print(f"hypertube: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if not text.endswith("\n"):
        text += "\n"
    out = cfg.get("out")
    try:
        if out:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"hypertube: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
