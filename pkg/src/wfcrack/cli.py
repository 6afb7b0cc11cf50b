"""Command-line front end.

Usage::

    wfcrack params  --config run.json
    wfcrack sif     --config run.json [--tol 1e-8]
    wfcrack sweep   [--config run.json] [--grid 20] [--eta -0.99,-0.5,0,0.5,0.99] --out sweep.csv
    wfcrack perturb --config run.json --out advance.csv
    wfcrack field   --config run.json [--grid 8] --out field.csv
    wfcrack mode3   --config run.json

The config is a JSON object::

    {
      "materials": {"eta": 0.5, "nu_plus": 0.2, "nu_minus": 0.3},
      "mode": "plane_strain",
      "loads": [
        {"face": "upper", "kind": "point", "position": -1.0, "components": [0.0, -1.0]},
        {"face": "lower", "kind": "uniform", "lo": -3.0, "hi": -2.0, "components": [0.0, 0.5]},
        {"face": "lower", "kind": "polynomial", "lo": -3.0, "hi": -2.0,
         "coefficients": [[0.0], [1.0, -0.5]]}
      ],
      "gap": 1.0,
      "numerics": {"tol": 1e-8, "omega": 0.25, "n_terms": 3},
      "sweep": {"a": 1.0, "F": 1.0, "b_max": 0.95, "grid": 20, "eta": [-0.99, -0.5, 0.0, 0.5, 0.99]},
      "perturb": {"fractions": [1e-2, 1e-3, 1e-4]},
      "field": {"r": [0.01, 0.1], "theta": [0.0, 1.5707963267948966], "method": "inverse"}
    }

Materials are given either as ``mu_plus, nu_plus, mu_minus, nu_minus`` or as
``eta, nu_plus, nu_minus`` (then ``mu_plus = 1``).  Components are ordered
``(p1, p2)`` in plane strain and ``(p3,)`` in Mode III; polynomial
coefficients are in increasing powers of ``x1``, one list per component.

Exit status is 0 on success, 2 for configuration errors and 3 for numerical
failures; errors are reported as one line ``wfcrack: error[<CODE>]: <message>``
on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import InputDomainError, NumericalError
from .fullfield import field_asymptotics, mellin_inverse, tip_expansion
from .loading import (
    Face,
    FaceTraction,
    LoadCase,
    Mode,
    PointForce,
    SmoothTraction,
    split_symmetric,
    three_point_case,
)
from .materials import ElasticHalfPlane, derive_params, params_from_eta, verify_identities
from .perturb import advance_sif, first_order
from .sif import mode3_sif, sif_closed_form, sif_quadrature

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
DEFAULT_ETAS = (-0.99, -0.5, 0.0, 0.5, 0.99)


class ConfigError(Exception):
    pass


def _fmt(v) -> str:
    return format(float(v) + 0.0, ".17g")


# ---------------------------------------------------------------- config parsing

def load_config(path):
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def parse_materials(block):
    if not isinstance(block, dict):
        raise ConfigError("'materials' block is missing or not an object")
    moduli = {"mu_plus", "nu_plus", "mu_minus", "nu_minus"}
    by_eta = {"eta", "nu_plus", "nu_minus"}
    keys = set(block)
    try:
        if "eta" in keys and not ({"mu_plus", "mu_minus"} & keys):
            if keys != by_eta:
                raise ConfigError(f"eta parameterisation needs exactly {sorted(by_eta)}")
            return params_from_eta(float(block["eta"]), float(block["nu_plus"]), float(block["nu_minus"]))
        if keys != moduli:
            raise ConfigError(f"materials need either {sorted(moduli)} or {sorted(by_eta)}")
        return derive_params(ElasticHalfPlane(float(block["mu_plus"]), float(block["nu_plus"])),
                             ElasticHalfPlane(float(block["mu_minus"]), float(block["nu_minus"])))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid materials: {exc}") from None


def _poly_handles(coeffs, ncomp):
    if len(coeffs) != ncomp:
        raise ConfigError(f"polynomial load needs {ncomp} coefficient list(s)")
    cs = [np.asarray(c, dtype=float) for c in coeffs]
    ders = [[npoly.polyder(c, k) if c.size > k else np.zeros(1) for c in cs] for k in range(3)]

    def make(k):
        return lambda x: np.stack([npoly.polyval(np.asarray(x, dtype=float), d) for d in ders[k]], axis=-1)
    return make(0), make(1), make(2)


def parse_load(entry, mode: Mode):
    if not isinstance(entry, dict):
        raise ConfigError("each load must be an object")
    try:
        face = Face(entry.get("face"))
    except ValueError:
        raise ConfigError(f"load face must be 'upper' or 'lower', got {entry.get('face')!r}") from None
    kind = entry.get("kind", "point")
    ncomp = mode.ncomp
    if kind == "point":
        load = PointForce(float(entry["position"]), tuple(entry["components"]))
    elif kind == "uniform":
        comps = np.asarray(entry["components"], dtype=float)
        if comps.size != ncomp:
            raise ConfigError(f"uniform load needs {ncomp} component(s)")
        zero = np.zeros(ncomp)
        load = SmoothTraction(lambda x, c=comps: np.broadcast_to(c, (np.size(x), ncomp)).copy(),
                              float(entry["lo"]), float(entry["hi"]),
                              lambda x, z=zero: np.broadcast_to(z, (np.size(x), ncomp)).copy(),
                              lambda x, z=zero: np.broadcast_to(z, (np.size(x), ncomp)).copy())
    elif kind == "polynomial":
        f, d1, d2 = _poly_handles(entry["coefficients"], ncomp)
        load = SmoothTraction(f, float(entry["lo"]), float(entry["hi"]), d1, d2)
    else:
        raise ConfigError(f"unknown load kind {kind!r}")
    return FaceTraction(face, load)


def parse_loadcase(cfg):
    try:
        mode = Mode(cfg.get("mode", "plane_strain"))
    except ValueError:
        raise ConfigError(f"mode must be 'plane_strain' or 'mode3', got {cfg.get('mode')!r}") from None
    loads = cfg.get("loads")
    if not isinstance(loads, list) or not loads:
        raise ConfigError("'loads' must be a non-empty list")
    try:
        tr = tuple(parse_load(e, mode) for e in loads)
        gap = cfg.get("gap")
        return LoadCase(mode, tr, gap=None if gap is None else float(gap))
    except KeyError as exc:
        raise ConfigError(f"load entry is missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputDomainError):
            raise
        raise ConfigError(f"invalid load entry: {exc}") from None


def _threads():
    raw = os.environ.get("WFCRACK_THREADS")
    if raw is None:
        return max(1, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError(f"WFCRACK_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ConfigError(f"WFCRACK_THREADS must be a positive integer, got {raw!r}")
    return n


def _pmap(func, items):
    # results come back in input order whatever the completion order
    items = list(items)
    n = min(_threads(), max(1, len(items)))
    if n == 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))


def _numerics(cfg, args):
    num = cfg.get("numerics", {}) or {}
    tol = args.tol if args.tol is not None else float(num.get("tol", 1e-8))
    if not tol > 0.0:
        raise ConfigError("tol must be positive")
    return tol, float(num.get("omega", 0.25)), int(num.get("n_terms", 3))


# ---------------------------------------------------------------------- outputs

def _write_rows(header, rows, out):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([r if isinstance(r, str) else _fmt(r) for r in row])
    text = buf.getvalue()
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# --------------------------------------------------------------------- commands

def cmd_params(cfg, args):
    params = parse_materials(cfg.get("materials"))
    rows = [(k, v) for k, v in params.as_dict().items()]
    resid, worst = verify_identities(params)
    rows += [(f"residual: {name}", v) for name, v in resid]
    rows.append(("worst_residual", worst))
    _write_rows(["quantity", "value"], rows, args.out)


def cmd_sif(cfg, args):
    params = parse_materials(cfg.get("materials"))
    lc = parse_loadcase(cfg)
    tol, _, _ = _numerics(cfg, args)
    if lc.mode is Mode.MODE_III:
        return cmd_mode3(cfg, args)
    closed = sif_closed_form(params, lc)
    quad = sif_quadrature(params, lc, tol=tol)
    rows = []
    for name in ("K", "A"):
        a, b = getattr(closed, name), getattr(quad, name)
        rows.append((name, "closed_form", a.real, a.imag))
        rows.append((name, "quadrature", b.real, b.imag))
        rows.append((name, "relative_delta", abs(a - b) / max(abs(a), 1e-300), 0.0))
    rows.append(("B", "closed_form", closed.B.real, closed.B.imag))
    _write_rows(["quantity", "route", "re", "im"], rows, args.out)


def _sweep_point(task):
    eta, bb, a, F, nu_p, nu_m, tol = task
    params = params_from_eta(eta, nu_p, nu_m)
    sym, skew = split_symmetric(three_point_case(F, a, bb * a))
    KS = sif_quadrature(params, sym, tol=tol)
    KA = sif_quadrature(params, skew, tol=tol)
    ratio = KA.K.real / KS.K.real if KS.K.real != 0.0 else float("nan")
    return (eta, bb, KS.K.real, KS.K.imag, KA.K.real, KA.K.imag,
            KS.A.real, KS.A.imag, KA.A.real, KA.A.imag, ratio)


def cmd_sweep(cfg, args):
    block = cfg.get("sweep", {}) or {}
    mats = cfg.get("materials", {}) or {}
    nu_p = float(mats.get("nu_plus", 0.2))
    nu_m = float(mats.get("nu_minus", 0.3))
    etas = args.eta if args.eta is not None else [float(e) for e in block.get("eta", DEFAULT_ETAS)]
    grid = args.grid if args.grid is not None else int(block.get("grid", 20))
    if grid < 2:
        raise ConfigError("sweep grid needs at least 2 points")
    b_max = float(block.get("b_max", 0.95))
    if not (0.0 < b_max < 1.0):
        raise ConfigError("b_max must lie in (0, 1)")
    a, F = float(block.get("a", 1.0)), float(block.get("F", 1.0))
    tol, _, _ = _numerics(cfg, args)
    tasks = [(eta, bb, a, F, nu_p, nu_m, tol) for eta in etas for bb in np.linspace(0.0, b_max, grid)]
    rows = _pmap(_sweep_point, tasks)
    _write_rows(["eta", "b_over_a", "KS_I", "KS_II", "KA_I", "KA_II", "AS_I", "AS_II",
                 "AA_I", "AA_II", "ratio_KI"], rows, args.out)


def cmd_perturb(cfg, args):
    params = parse_materials(cfg.get("materials"))
    lc = parse_loadcase(cfg)
    block = cfg.get("perturb", {}) or {}
    if "a" in block:
        steps = [float(v) for v in block["a"]]
    else:
        steps = [float(f) * lc.gap for f in block.get("fractions", (1e-2, 1e-3, 1e-4))]
    dK, _ = first_order(params, lc)

    def one(a):
        res = advance_sif(params, lc, a)
        pred = res.K0 + a * dK
        return (a, res.K_star.real, res.K_star.imag, pred.real, pred.imag, abs(res.K_star - pred))

    _write_rows(["a", "ReK_star", "ImK_star", "ReK_pred", "ImK_pred", "abs_err"], _pmap(one, steps), args.out)


def cmd_field(cfg, args):
    params = parse_materials(cfg.get("materials"))
    lc = parse_loadcase(cfg)
    tol, omega, n_terms = _numerics(cfg, args)
    block = cfg.get("field", {}) or {}
    n = args.grid if args.grid is not None else int(block.get("grid", 8))
    rs = [float(v) for v in block.get("r", np.geomspace(1e-3, 0.5, n) * lc.gap)]
    ths = [float(v) for v in block.get("theta", np.linspace(-math.pi, math.pi, n))]
    method = block.get("method", "inverse")
    if method not in ("inverse", "series"):
        raise ConfigError(f"field method must be 'inverse' or 'series', got {method!r}")
    exp = tip_expansion(params, lc) if method == "series" else None

    def one(pt):
        r, th = pt
        if method == "series":
            s, u = field_asymptotics(r, th, n_terms, exp, params)
        else:
            fv = mellin_inverse(r, th, params, lc, omega=omega, tol=tol)
            s, u = fv.stress, fv.displacement
        return (r, th, s[0, 0], s[0, 1], s[1, 1], u[0], u[1])

    rows = _pmap(one, [(r, th) for r in rs for th in ths])
    _write_rows(["r", "theta", "s_rr", "s_rt", "s_tt", "u_r", "u_t"], rows, args.out)


def cmd_mode3(cfg, args):
    params = parse_materials(cfg.get("materials"))
    lc = parse_loadcase(cfg)
    if lc.mode is not Mode.MODE_III:
        raise ConfigError("mode3 needs \"mode\": \"mode3\" in the config")
    tol, _, _ = _numerics(cfg, args)
    res = mode3_sif(params, lc, tol=tol)
    _write_rows(["quantity", "value"], [("K_III", res.K_III), ("A_III", res.A_III)], args.out)


COMMANDS = {
    "params": cmd_params,
    "sif": cmd_sif,
    "sweep": cmd_sweep,
    "perturb": cmd_perturb,
    "field": cmd_field,
    "mode3": cmd_mode3,
}


def _eta_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--eta expects comma-separated numbers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    # usage errors become a single machine-parseable line
    def error(self, message):
        raise ConfigError(message)


def build_parser():
    ap = _Parser(prog="wfcrack", description="Interfacial crack weight functions and tip coefficients.")
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--config", help="JSON run configuration")
    ap.add_argument("--out", help="output CSV path (stdout when omitted)")
    ap.add_argument("--tol", type=float, help="quadrature tolerance")
    ap.add_argument("--grid", type=int, help="number of grid points")
    ap.add_argument("--eta", type=_eta_list, help="comma-separated eta values for sweep")
    return ap


def _fail(code: str, msg: str, status: int) -> int:
    line = " ".join(str(msg).split())
    sys.stderr.write(f"wfcrack: error[{code}]: {line}\n")
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except ConfigError as exc:
        return _fail("USAGE", exc, EXIT_CONFIG)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    try:
        cfg = load_config(args.config)
        if args.command != "sweep" and args.config is None:
            raise ConfigError(f"'{args.command}' needs --config")
        COMMANDS[args.command](cfg, args)
    except (ConfigError, InputDomainError) as exc:
        return _fail("CONFIG", exc, EXIT_CONFIG)
    except NumericalError as exc:
        return _fail("NUMERICAL", exc, EXIT_NUMERICAL)
    except OSError as exc:
        return _fail("CONFIG", f"{exc.filename}: {exc.strerror}", EXIT_CONFIG)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
