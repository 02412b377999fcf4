"""Command line interface.

Subcommands: expand, obstruction, check-pe, evolve, energy, cs, presets.
A human-readable table goes to standard output; --json PATH (or '-') adds a
canonical JSON report ("schema": "1", sorted keys, shortest round-trip float
formatting) for which load + dump is byte identical.

Exit codes: 0 success, 1 validation failure, 2 numeric failure.
A config file in flat key=value format with [geometry], [numeric] and
[output] sections can preload any flag; explicit flags win.
"""
from __future__ import annotations

import argparse
import configparser
import json
import os
import sys

import numpy as np

from .frame_algebra import GeometryError
from .nahm_expansion import BoundaryData, expand, is_smooth, obstruction, \
    self_duality_residual
from .collar_geometry import check_pe
from .dynamics import (FitError, IntegrationError, StepControl, chern_simons,
                       energy_report, evolve)
from . import presets

SCHEMA = "1"

_CONFIG_KEYS = {
    "geometry": {"preset", "h2", "sigma"},
    "numeric": {"order", "tol", "x-from", "x-to", "t-lo", "t-hi", "samples"},
    "output": {"json"},
}


class CliError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad usage; remap to validation failure
    def error(self, message):
        raise CliError(message)


def _mat3(values):
    a = np.asarray([float(v) for v in values], dtype=float)
    if a.size == 3:
        return np.diag(a)
    if a.size == 9:
        return a.reshape(3, 3)
    raise CliError("matrix arguments take 3 (diagonal) or 9 numbers")


def _parse_matrix_arg(text):
    return _mat3([t for t in text.replace(",", " ").split() if t])


def _flat9(m):
    return [float(v) for v in np.asarray(m, dtype=float).reshape(-1)]


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, indent=2, separators=(",", ": "))


def _format_value(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list) and len(value) == 9:
        rows = [value[0:3], value[3:6], value[6:9]]
        return "  ".join("[" + " ".join(f"{v: .12g}" for v in r) + "]"
                         for r in rows)
    if isinstance(value, dict):
        return ", ".join(f"{k}: {v!r}" for k, v in sorted(value.items()))
    if isinstance(value, list):
        return ", ".join(str(v) for v in value)
    return str(value)


def _emit(report, path):
    width = max(len(k) for k in report)
    for key, value in report.items():
        sys.stdout.write(f"{key:<{width}}  {_format_value(value)}\n")
    if path:
        text = canonical_json(report) + "\n"
        if path == "-":
            sys.stdout.write(text)
        else:
            with open(path, "w") as fh:
                fh.write(text)


def _load_config(path):
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise CliError(f"cannot read config file {path!r}")
    out = {}
    for section in cp.sections():
        if section not in _CONFIG_KEYS:
            raise CliError(f"unknown config section [{section}]")
        for key, value in cp.items(section):
            if key not in _CONFIG_KEYS[section]:
                raise CliError(f"unknown config key {key!r} in [{section}]")
            out[key.replace("-", "_")] = value
    return out


def _resolve(args, config, name, cast, default):
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config:
        return cast(config[name])
    return default


def _geometry(args, config, order):
    preset = _resolve(args, config, "preset", str, None)
    if preset is None:
        raise CliError("a --preset is required (see 'presets')")
    h2 = getattr(args, "h2", None)
    if h2 is None and "h2" in config:
        h2 = _parse_matrix_arg(config["h2"])
    return presets.get_preset(preset, order=order, h2=h2), preset


def _sigma(args, config):
    raw = getattr(args, "sigma", None)
    if raw is None and "sigma" in config:
        raw = config["sigma"]
    if raw is None or raw == "zero":
        return np.zeros((3, 3))
    return _parse_matrix_arg(raw)


def build_parser():
    parser = _Parser(prog="nahmcollar",
                     description="Nahm pole expansions on hyperbolic collars")
    parser.add_argument("--config", help="key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, order_default=None):
        p.add_argument("--preset")
        p.add_argument("--h2", type=_parse_matrix_arg,
                       help="3 or 9 numbers for the t3-h2 preset")
        p.add_argument("--json", dest="json_path",
                       help="also emit a JSON report to this file ('-' = stdout)")
        if order_default is not None:
            p.add_argument("--order", type=int)

    p = sub.add_parser("expand", help="formal expansion coefficients")
    common(p, order_default=6)
    p.add_argument("--sigma", help="'zero' or 3/9 numbers (trace-free symmetric)")

    p = sub.add_parser("obstruction", help="obstruction tensor, both routes")
    common(p)

    p = sub.add_parser("check-pe", help="Poincare-Einstein jet conditions")
    common(p, order_default=3)

    p = sub.add_parser("evolve", help="integrate the self-duality flow")
    common(p, order_default=6)
    p.add_argument("--sigma")
    p.add_argument("--x-from", dest="x_from", type=float)
    p.add_argument("--x-to", dest="x_to", type=float)
    p.add_argument("--tol", type=float)

    p = sub.add_parser("energy", help="renormalized energy Laurent data")
    common(p, order_default=6)
    p.add_argument("--t-lo", dest="t_lo", type=float)
    p.add_argument("--t-hi", dest="t_hi", type=float)
    p.add_argument("--samples", type=int)

    p = sub.add_parser("cs", help="Chern-Simons invariant of a constant connection")
    common(p)
    p.add_argument("--connection", default="spin",
                   help="'spin', 'soldering' or 3/9 numbers")

    sub.add_parser("presets", help="list preset geometries")
    return parser


def _cmd_expand(args, config):
    order = _resolve(args, config, "order", int, 6)
    (frame, metric), preset = _geometry(args, config, order + 1)
    sigma = _sigma(args, config)
    exp = expand(BoundaryData(frame=frame, metric=metric, sigma=sigma, N=order))
    report = {
        "schema": SCHEMA,
        "command": "expand",
        "preset": preset,
        "order": order,
        "smooth": is_smooth(exp),
        "residual": self_duality_residual(exp),
        "alpha[-1][0]": _flat9(np.eye(3)),
        "alpha[0][0]": _flat9(exp.alpha0),
    }
    for (k, l), v in sorted(exp.coeffs.items()):
        report[f"alpha[{k}][{l}]"] = _flat9(v)
    return report


def _cmd_obstruction(args, config):
    (frame, metric), preset = _geometry(args, config, 4)
    pair = obstruction(frame, metric)
    return {
        "schema": SCHEMA,
        "command": "obstruction",
        "preset": preset,
        "recursive": _flat9(pair.recursive),
        "weyl": _flat9(pair.weyl),
        "maxDiff": pair.max_diff,
    }


def _cmd_check_pe(args, config):
    order = _resolve(args, config, "order", int, 3)
    (frame, metric), preset = _geometry(args, config, max(order, 3) + 2)
    flags = check_pe(frame, metric, order)
    return {
        "schema": SCHEMA,
        "command": "check-pe",
        "preset": preset,
        "orders": flags,
        "pe": all(flags),
    }


def _cmd_evolve(args, config):
    order = _resolve(args, config, "order", int, 6)
    (frame, metric), preset = _geometry(args, config, order + 1)
    sigma = _sigma(args, config)
    x_from = _resolve(args, config, "x_from", float, 0.05)
    x_to = _resolve(args, config, "x_to", float, 0.2)
    tol = _resolve(args, config, "tol", float, 1e-10)
    exp = expand(BoundaryData(frame=frame, metric=metric, sigma=sigma, N=order))
    traj = evolve(frame, metric, exp.evaluate(x_from), x_from, x_to,
                  StepControl(tol=tol))
    end = traj.value_at(x_to)
    return {
        "schema": SCHEMA,
        "command": "evolve",
        "preset": preset,
        "xFrom": x_from,
        "xTo": x_to,
        "estError": traj.est_error,
        "final": _flat9(end),
    }


def _cmd_energy(args, config):
    order = _resolve(args, config, "order", int, 6)
    (frame, metric), preset = _geometry(args, config, order + 1)
    t_lo = _resolve(args, config, "t_lo", float, 0.02)
    t_hi = _resolve(args, config, "t_hi", float, 0.25)
    samples = _resolve(args, config, "samples", int, 24)
    rep = energy_report(frame, metric, N=order, t_lo=t_lo, t_hi=t_hi,
                        n_samples=samples)
    return {
        "schema": SCHEMA,
        "command": "energy",
        "preset": preset,
        "laurent": {str(p): c for p, c in rep.laurent.items()},
        "csValue": rep.cs_value,
        "stokesResidual": rep.stokes_residual,
        "fitResidual": rep.fit_residual,
    }


def _cmd_cs(args, config):
    (frame, metric), preset = _geometry(args, config, 3)
    from .collar_geometry import intrinsic_geometry
    from .frame_algebra import IDENTITY

    choice = args.connection
    if choice == "spin":
        conn = intrinsic_geometry(frame, IDENTITY).spin_conn
    elif choice == "soldering":
        conn = IDENTITY
    else:
        conn = _parse_matrix_arg(choice)
    return {
        "schema": SCHEMA,
        "command": "cs",
        "preset": preset,
        "connection": _flat9(conn),
        "value": chern_simons(conn, frame),
    }


def _cmd_presets(args, config):
    return {
        "schema": SCHEMA,
        "command": "presets",
        "presets": list(presets.PRESET_NAMES),
    }


_COMMANDS = {
    "expand": _cmd_expand,
    "obstruction": _cmd_obstruction,
    "check-pe": _cmd_check_pe,
    "evolve": _cmd_evolve,
    "energy": _cmd_energy,
    "cs": _cmd_cs,
    "presets": _cmd_presets,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config = _load_config(args.config) if args.config else {}
        report = _COMMANDS[args.command](args, config)
        _emit(report, getattr(args, "json_path", None))
    except (CliError, GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IntegrationError, FitError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
