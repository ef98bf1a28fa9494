"""Command-line surface: one subcommand per solver or diagnostic.

Flags override values from an optional JSON config file (``--config``),
which in turn override built-in defaults; unknown config keys are rejected.
Results land in ``--out`` (or ``$NLHELM_OUTDIR``, default the working
directory) as JSON/CSV files that are byte-identical across reruns with the
same configuration and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import ball_spectrum, bessel, capacity, nonlinearity, radial, variational
from .results import ResultEnvelope, write_csv, write_json

OUTDIR_ENV = "NLHELM_OUTDIR"


class UsageError(SystemExit):
    def __init__(self, message: str):
        print(f"error: {message}", file=sys.stderr)
        super().__init__(2)


# each entry: flag name -> (type, default, required)
_SCHEMAS = {
    "specfun-eval": {"mu": (float, None, True), "x": (float, None, True),
                     "deriv": (bool, False, False)},
    "dtn-coeffs": {"N": (int, None, True), "k": (float, None, True),
                   "R": (float, None, True), "lmax": (int, 32, False)},
    "dtn-exterior": {"field": (str, None, True), "points": (str, None, True)},
    "spectrum": {"N": (int, None, True), "k": (float, None, True),
                 "R": (float, None, True), "lmax": (int, 8, False),
                 "lambda-max": (float, None, True)},
    "degenerate-radii": {"N": (int, None, True), "k": (float, None, True),
                         "lmax": (int, 8, False), "rmin": (float, None, True),
                         "rmax": (float, None, True)},
    "extension-radii": {"N": (int, None, True), "k": (float, None, True),
                        "R": (float, None, True), "ell": (int, 0, False),
                        "rmax": (float, None, True)},
    "shoot": {"N": (int, 3, False), "k": (float, None, True),
              "alpha": (float, 1.0, False), "rmax": (float, None, False),
              "tol": (float, 1e-10, False), "model": (str, None, True),
              "sweep": (str, None, False), "plot-data": (bool, False, False)},
    "solve1d": {"k": (float, None, True), "R": (float, None, True),
                "grid": (int, 513, False), "model": (str, None, True),
                "max-solutions": (int, 12, False), "tol": (float, 1e-10, False)},
    "minimax": {"k": (float, None, True), "R": (float, None, True),
                "grid": (int, 513, False), "model": (str, None, True),
                "mplus": (int, 128, False), "tol": (float, 1e-6, False)},
    "validate-model": {"model": (str, None, True)},
}

_TOLERANCE_KEYS = {"tol"}


def _add_schema_args(parser, schema):
    for name, (typ, default, _req) in schema.items():
        flag = "--" + name
        if typ is bool:
            parser.add_argument(flag, action="store_const", const=True, default=None)
        else:
            parser.add_argument(flag, type=typ, default=None)


def _merge_config(command, args, schema):
    """CLI > config file > defaults, with strict config keys."""
    file_vals = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        known = set(schema) | {"seed", "out"}
        unknown = set(raw) - known
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)} for {command}")
        file_vals = raw
    cfg = {}
    for name, (typ, default, required) in schema.items():
        attr = name.replace("-", "_")
        val = getattr(args, attr)
        if val is None:
            val = file_vals.get(name, default)
        if val is None and required:
            raise UsageError(f"{command}: missing required option --{name}")
        if val is not None and typ is not bool:
            val = typ(val)
        cfg[name] = val
        if name in _TOLERANCE_KEYS and val is not None and val <= 0:
            raise UsageError(f"{command}: --{name} must be positive, got {val}")
    cfg["seed"] = args.seed if args.seed is not None else int(file_vals.get("seed", 0))
    out = args.out or file_vals.get("out") or os.environ.get(OUTDIR_ENV) or "."
    cfg["out"] = str(out)
    return cfg


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="nlhelm",
        description="Standing-wave Helmholtz toolbox: capacity coefficients, "
                    "ball spectra, radial shooting, interval critical points.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, schema_key=None):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        if schema_key:
            _add_schema_args(p, _SCHEMAS[schema_key])
        return p

    spec = sub.add_parser("specfun", help="Bessel function evaluation")
    spec_sub = spec.add_subparsers(dest="subcommand", required=True)
    p = spec_sub.add_parser("eval")
    p.add_argument("--config", type=str, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=str, default=None)
    _add_schema_args(p, _SCHEMAS["specfun-eval"])

    dtn = sub.add_parser("dtn", help="capacity operator and exterior fields")
    dtn_sub = dtn.add_subparsers(dest="subcommand", required=True)
    for name in ("coeffs", "exterior"):
        p = dtn_sub.add_parser(name)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        _add_schema_args(p, _SCHEMAS[f"dtn-{name}"])

    add("spectrum", "nonlocal ball eigenvalues and splitting", "spectrum")
    add("degenerate-radii", "the excluded radius set", "degenerate-radii")
    add("extension-radii", "re-basing radii for an active mode", "extension-radii")
    add("shoot", "radial shooting solver", "shoot")
    add("solve1d", "interval critical-point search", "solve1d")
    add("minimax", "ground-state minimax level", "minimax")
    add("validate-model", "sampled assumption checks for a model file", "validate-model")
    return parser


# ---------------------------------------------------------------------------
# handlers: each returns (payload, extra_files) and may write CSVs

def _load_field(path):
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    unknown = set(raw) - {"N", "k", "R", "coeffs"}
    if unknown:
        raise UsageError(f"unknown field keys {sorted(unknown)}")
    blocks = []
    for block in raw["coeffs"]:
        arr = np.asarray(block, dtype=float)
        if arr.ndim == 2 and arr.shape[1] == 2:
            blocks.append(arr[:, 0] + 1j * arr[:, 1])
        else:
            blocks.append(arr)
    u = capacity.HarmonicCoefficients(N=int(raw["N"]), R=float(raw["R"]), coeffs=blocks)
    return u, float(raw["k"])


def _run_specfun_eval(cfg, warnings):
    val = bessel.bessel_jy(cfg["mu"], cfg["x"])
    payload = {"j": val.j, "y": val.y, "err": val.abs_err_est}
    if cfg["deriv"]:
        payload.update(jp=val.jp, yp=val.yp)
    return payload, []


def _run_dtn_coeffs(cfg, warnings):
    coeffs = capacity.capacity_coeffs(cfg["N"], cfg["k"], cfg["R"], cfg["lmax"])
    return [
        {"ell": c.ell, "re_z": c.z.real, "im_z": c.z.imag,
         "bounds_ok": bool(c.re_bound_ok and c.im_bound_ok)}
        for c in coeffs
    ], []


def _run_dtn_exterior(cfg, warnings, outdir):
    u, k = _load_field(cfg["field"])
    pts = np.loadtxt(cfg["points"], delimiter=",", ndmin=2)
    vals, tail = capacity.exterior_eval(u, k, pts)
    if tail > 0:
        warnings.append(f"truncation tail bound {tail:g}")
    path = os.path.join(outdir, "dtn-exterior.csv")
    header = [f"x{i+1}" for i in range(pts.shape[1])] + ["re_w", "im_w"]
    rows = [list(p) + [v.real, v.imag] for p, v in zip(pts, vals)]
    write_csv(path, header, rows)
    return {"n_points": int(len(vals)), "tail_bound": tail, "csv": "dtn-exterior.csv"}, [path]


def _run_spectrum(cfg, warnings):
    split = ball_spectrum.eigenvalues(cfg["N"], cfg["k"], cfg["R"],
                                      cfg["lmax"], cfg["lambda-max"])
    warnings.extend(split.warnings)
    return {
        "eigenvalues": [
            {"lambda": p.lam, "ell": p.ell, "multiplicity": p.multiplicity,
             "radial_index": p.radial_index}
            for p in split.pairs
        ],
        "splitting": {
            "j_star_lower": split.j_star_lower,
            "j_star_upper": split.j_star_upper,
            "dim_minus": split.dim_minus,
            "dim_zero": split.dim_zero,
        },
    }, []


def _run_degenerate_radii(cfg, warnings):
    radii = ball_spectrum.degenerate_radii(cfg["N"], cfg["k"], cfg["lmax"],
                                           cfg["rmin"], cfg["rmax"])
    return [{"R": d.R, "ell": d.ell, "condition": d.condition} for d in radii], []


def _run_extension_radii(cfg, warnings):
    radii = ball_spectrum.shared_extension_radii(cfg["N"], cfg["k"], cfg["R"],
                                                 cfg["ell"], cfg["rmax"])
    return {"R_prime": list(map(float, radii))}, []


def _shoot_payload(sol):
    return {
        "sup_decay": sol.sup_decay,
        "gronwall_bound": sol.gronwall_bound,
        "gronwall_exponent": sol.gronwall_exponent,
        "gronwall_vacuous": sol.gronwall_vacuous,
        "gronwall_ok": sol.gronwall_ok,
        "eps": sol.eps,
        "r_max": float(sol.r[-1]),
        "max_abs_u": float(np.abs(sol.u).max()),
        "final_residual": float(sol.radiation_residual[-1]),
    }


def _write_shoot_csv(outdir, name, sol, plot_data):
    files = []
    path = os.path.join(outdir, f"{name}.csv")
    rows = zip(sol.r, sol.u, sol.up, sol.rho, sol.radiation_residual)
    write_csv(path, ["r", "u", "up", "rho", "residual"], rows)
    files.append(path)
    if plot_data:
        ppath = os.path.join(outdir, f"{name}_plot.csv")
        weight = sol.r ** ((sol.N - 1) / 2.0)
        write_csv(ppath, ["r", "scaled_u"], zip(sol.r, weight * sol.u))
        files.append(ppath)
    return files


def _run_shoot(cfg, warnings, outdir):
    nl = nonlinearity.load_model(cfg["model"])
    files = []
    if cfg["sweep"]:
        try:
            a0, a1, num = cfg["sweep"].split(":")
            alphas = np.linspace(float(a0), float(a1), int(num))
        except ValueError as exc:
            raise UsageError(f"--sweep expects a0:a1:n, got {cfg['sweep']!r}") from exc
        payload = []
        for i, alpha in enumerate(alphas):
            sol = radial.shoot(nl, cfg["N"], cfg["k"], float(alpha),
                               r_max=cfg["rmax"], tol=cfg["tol"])
            warnings.extend(sol.warnings)
            entry = _shoot_payload(sol)
            entry["alpha"] = float(alpha)
            entry["csv"] = f"shoot_{i:03d}.csv"
            payload.append(entry)
            files.extend(_write_shoot_csv(outdir, f"shoot_{i:03d}", sol, cfg["plot-data"]))
        return payload, files
    sol = radial.shoot(nl, cfg["N"], cfg["k"], cfg["alpha"],
                       r_max=cfg["rmax"], tol=cfg["tol"])
    warnings.extend(sol.warnings)
    payload = _shoot_payload(sol)
    payload["alpha"] = cfg["alpha"]
    payload["csv"] = "shoot.csv"
    files.extend(_write_shoot_csv(outdir, "shoot", sol, cfg["plot-data"]))
    return payload, files


def _run_solve1d(cfg, warnings, outdir):
    nl = nonlinearity.load_model(cfg["model"])
    grid = variational.Grid1D(R=cfg["R"], n=cfg["grid"])
    sols = variational.newton_deflated_solve(grid, nl, cfg["k"],
                                             max_solutions=cfg["max-solutions"],
                                             tol=cfg["tol"], seed=cfg["seed"])
    files = []
    payload = []
    for i, s in enumerate(sols):
        name = f"solution_{i:03d}.csv"
        write_csv(os.path.join(outdir, name), ["x", "u"], zip(grid.x, s.u))
        files.append(os.path.join(outdir, name))
        payload.append({
            "phi": s.phi,
            "grad_residual": s.grad_residual,
            "norm_minus": s.norm_minus,
            "norm_plus": s.norm_plus,
            "max_abs_u": float(np.abs(s.u).max()),
            "csv": name,
        })
    return {"n_solutions": len(sols), "dim_minus": sols[0].dim_minus if sols else None,
            "solutions": payload}, files


def _run_minimax(cfg, warnings):
    nl = nonlinearity.load_model(cfg["model"])
    grid = variational.Grid1D(R=cfg["R"], n=cfg["grid"])
    res = variational.ground_state_minimax(grid, nl, cfg["k"], cfg["mplus"],
                                           tol=cfg["tol"], seed=cfg["seed"])
    warnings.extend(res.warnings)
    return {"c": res.c, "direction": list(map(float, res.direction)),
            "t": res.t, "v_coeffs": list(map(float, res.v_coeffs))}, []


def _run_validate_model(cfg, warnings):
    nl = nonlinearity.load_model(cfg["model"])
    fr = nonlinearity.validate_f(nl, seed=cfg["seed"])
    gr = nonlinearity.validate_g(nl, seed=cfg["seed"])
    ineq = nonlinearity.check_ineq14(nl, n_samples=20_000, seed=cfg["seed"])

    def render(rep):
        return {
            name: {"passed": c.passed, "worst_margin": c.worst_margin,
                   "worst_point": list(c.worst_point), "note": c.note}
            for name, c in rep.checks.items()
        }

    return {
        "f_assumptions": render(fr),
        "g_assumptions": render(gr),
        "ineq14": {"n_samples": ineq.n_samples, "n_violations": ineq.n_violations,
                   "worst_margin": ineq.worst_margin},
    }, []


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    command = args.command
    if getattr(args, "subcommand", None):
        command = f"{command}-{args.subcommand}"
    schema = _SCHEMAS[command]
    cfg = _merge_config(command, args, schema)
    outdir = cfg["out"]
    os.makedirs(outdir, exist_ok=True)

    warnings: list = []
    t0 = time.perf_counter()
    if command == "specfun-eval":
        payload, files = _run_specfun_eval(cfg, warnings)
    elif command == "dtn-coeffs":
        payload, files = _run_dtn_coeffs(cfg, warnings)
    elif command == "dtn-exterior":
        payload, files = _run_dtn_exterior(cfg, warnings, outdir)
    elif command == "spectrum":
        payload, files = _run_spectrum(cfg, warnings)
    elif command == "degenerate-radii":
        payload, files = _run_degenerate_radii(cfg, warnings)
    elif command == "extension-radii":
        payload, files = _run_extension_radii(cfg, warnings)
    elif command == "shoot":
        payload, files = _run_shoot(cfg, warnings, outdir)
    elif command == "solve1d":
        payload, files = _run_solve1d(cfg, warnings, outdir)
    elif command == "minimax":
        payload, files = _run_minimax(cfg, warnings)
    elif command == "validate-model":
        payload, files = _run_validate_model(cfg, warnings)
    else:  # unreachable with required=True subparsers
        raise UsageError(f"unknown command {command}")
    elapsed = time.perf_counter() - t0

    config_echo = {name: cfg[name] for name in schema}
    envelope = ResultEnvelope(command=command, config=config_echo, seed=cfg["seed"],
                              payload=payload, warnings=warnings, timing_s=elapsed)
    json_path = os.path.join(outdir, f"{command}.json")
    write_json(json_path, envelope)
    for p in [json_path] + files:
        print(p)
    print(f"{command}: {elapsed:.3f} s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
