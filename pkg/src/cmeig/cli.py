"""The ``cmeig`` command line.

Exit status: 0 when everything passes, 1 on a verification failure or an
I/O or numerical error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from dataclasses import asdict

import numpy as np

from .cache import cached_coeffs
from .config import COMMANDS, FIELD_NAMES, FORMATS, QUADRATURE_KEYS, TABULATE_TARGETS, RunConfig
from .errors import CmeigError, ConfigError
from .params import ModelParams
from .quadrature import QuadratureSpec, default_quadrature, phi_quadrature
from .ba import psi_eval
from .serialize import emit_record, emit_report, write_rows
from .theorem import (
    DEFAULT_CONVENTION,
    SUITES,
    calibrate,
    phi_closed_form,
    run_suite,
    separated_points,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def parse_points(text: str) -> list[complex]:
    """``re:im`` pairs separated by commas; a bare number is real."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise ConfigError(f"points: empty coordinate in {text!r}")
        try:
            if ":" in item:
                re_, im_ = item.split(":")
                out.append(complex(float(re_), float(im_)))
            else:
                out.append(complex(float(item), 0.0))
        except ValueError:
            raise ConfigError(f"points: cannot parse coordinate {item!r}") from None
    return out


def _coerce_points(key: str, val) -> list[complex]:
    if isinstance(val, str):
        return parse_points(val)
    if isinstance(val, list):
        out = []
        for v in val:
            if isinstance(v, (int, float)):
                out.append(complex(v))
            elif isinstance(v, list) and len(v) == 2:
                out.append(complex(v[0], v[1]))
            elif isinstance(v, dict) and set(v) == {"re", "im"}:
                out.append(complex(v["re"], v["im"]))
            else:
                raise ConfigError(f"{key}: cannot parse coordinate {v!r}")
        return out
    raise ConfigError(f"{key}: expected a list of coordinates or a 're:im,...' string")


def _key_value(key: str, items: list[str]) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"{key}: expected NAME=VALUE, got {item!r}")
        name, val = item.split("=", 1)
        try:
            out[name] = float(val)
        except ValueError:
            raise ConfigError(f"{key}.{name}: not a number: {val!r}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cmeig", description="Baker-Akhiezer functions and joint eigenfunctions at integer coupling.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, help=f"{cmd}")
        sp.error = p.error  # usage errors go through the same path
        sp.add_argument("--config", help="JSON file of RunConfig fields")
        sp.add_argument("--a", type=float)
        sp.add_argument("--m", type=int)
        sp.add_argument("--n", dest="N", type=int)
        sp.add_argument("--x", help="coordinates as re:im,re:im,...")
        sp.add_argument("--y", help="coordinates as re:im,re:im,...")
        sp.add_argument("--suite", choices=SUITES if cmd == "verify" else None)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--probes", type=int)
        sp.add_argument("--tol", action="append", metavar="SUITE=VALUE")
        sp.add_argument("--quad", action="append", metavar="FIELD=VALUE",
                        help=f"quadrature field, one of {', '.join(QUADRATURE_KEYS)}")
        sp.add_argument("--output", help="output path (default stdout)")
        sp.add_argument("--format", choices=FORMATS)
        sp.add_argument("--workers", type=int)
        sp.add_argument("--target", choices=TABULATE_TARGETS)
        sp.add_argument("--grid", type=int)
    return p


def load_config_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config: top level must be an object")
    for key in data:
        if key not in FIELD_NAMES:
            raise ConfigError(f"{key}: unknown configuration key")
    return data


def parse_config(argv: list[str], config_file: str | None = None) -> RunConfig:
    """RunConfig from argv plus an optional JSON file; flags override the file."""
    try:
        ns = build_parser().parse_args(argv)
    except _UsageError as exc:
        raise ConfigError(str(exc)) from None
    if ns.command is None:
        raise ConfigError("command: a subcommand is required")
    values: dict = {}
    path = ns.config or config_file
    if path:
        values.update(load_config_file(path))
    values["command"] = ns.command
    for key in ("a", "m", "N", "suite", "seed", "probes", "output", "format", "workers", "target", "grid"):
        v = getattr(ns, key)
        if v is not None:
            values[key] = v
    for key in ("x", "y"):
        if getattr(ns, key) is not None:
            values[key] = getattr(ns, key)
        if key in values and values[key] is not None:
            values[key] = _coerce_points(key, values[key])
    tol = dict(values.get("tolerances") or {})
    tol.update(_key_value("tolerances", ns.tol))
    values["tolerances"] = tol
    quad = dict(values.get("quadrature") or {})
    quad.update(_key_value("quadrature", ns.quad))
    values["quadrature"] = quad
    if values.get("suite") is not None and values["suite"] not in SUITES:
        raise ConfigError(f"suite: unknown suite {values['suite']!r}")
    for key, typ in (("a", float), ("m", int), ("N", int), ("seed", int), ("probes", int), ("workers", int), ("grid", int)):
        if values.get(key) is not None:
            try:
                values[key] = typ(values[key])
            except (TypeError, ValueError):
                raise ConfigError(f"{key}: expected {typ.__name__}, got {values[key]!r}") from None
    return RunConfig(**values).validate()


# --- commands -------------------------------------------------------------------

def _points(cfg: RunConfig) -> tuple[np.ndarray, np.ndarray]:
    if cfg.x is not None:
        return np.asarray(cfg.x, dtype=complex), np.asarray(cfg.y, dtype=complex)
    rng = np.random.default_rng(cfg.seed)
    return separated_points(rng, cfg.N).astype(complex), separated_points(rng, cfg.N, lo=-0.5, hi=0.5).astype(complex)


def _quad_spec(params: ModelParams, cfg: RunConfig, x) -> QuadratureSpec:
    d = asdict(default_quadrature(params, np.real(x)))
    d.update(cfg.quadrature)
    return QuadratureSpec(float(d["truncation_L"]), int(d["panels"]), int(d["nodes_per_panel"]), float(d["target_tol"]))


def _eval(cfg: RunConfig) -> int:
    params = ModelParams(cfg.a, cfg.m)
    x, y = _points(cfg)
    rec = {"command": cfg.command, "a": params.a, "m": params.m, "N": int(x.size),
           "x": list(x), "y": list(y)}
    if cfg.command == "eval-psi":
        rec["value"] = psi_eval(params, x, y)
    elif cfg.command == "eval-phi-closed":
        rec["value"] = phi_closed_form(params, x, y)
        rec["convention"] = DEFAULT_CONVENTION.as_dict()
    else:
        val, err = phi_quadrature(params, x, y, _quad_spec(params, cfg, x), return_error=True)
        rec["value"], rec["error_estimate"] = val, err
    emit_record(rec, cfg.format, cfg.output)
    return EXIT_OK


def _calibrate(cfg: RunConfig) -> int:
    cal = calibrate(ModelParams(cfg.a, cfg.m))
    rec = cal.as_dict()
    rec["matches_default"] = cal.selected == DEFAULT_CONVENTION
    emit_record(rec, cfg.format, cfg.output)
    return EXIT_OK if cal.selected is not None else EXIT_FAIL


def _tabulate(cfg: RunConfig) -> int:
    params = ModelParams(cfg.a, cfg.m)
    N = cfg.N if cfg.N is not None else (len(cfg.x) if cfg.x is not None else 2)
    if cfg.x is not None:
        x = np.asarray(cfg.x, dtype=complex)
    else:
        x = separated_points(np.random.default_rng(cfg.seed), N).astype(complex)
    axis = np.linspace(-1.0, 1.0, cfg.grid)
    header = [f"x{j + 1}" for j in range(N)] + [f"y{j + 1}" for j in range(N)] + ["re", "im", "error"]
    rows = []
    ser = cached_coeffs(params, x, "psi") if cfg.target == "psi" else None
    spec = _quad_spec(params, cfg, x) if cfg.target == "phi-quad" else None
    for ys in itertools.product(axis, repeat=N):
        y = np.asarray(ys, dtype=complex)
        err = ""
        try:
            if ser is not None:
                val = ser.evaluate(y)
            elif cfg.target == "phi-closed":
                val = phi_closed_form(params, x, y)
            else:
                val = phi_quadrature(params, x, y, spec)
        except CmeigError as exc:
            val, err = complex("nan"), type(exc).__name__
        rows.append([float(v.real) for v in x] + [float(v) for v in ys] + [float(val.real), float(val.imag), err])
    write_rows(header, rows, cfg.output)
    return EXIT_OK


def _verify(cfg: RunConfig) -> int:
    report = run_suite(cfg)
    emit_report(report, cfg.format, cfg.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def run(cfg: RunConfig) -> int:
    if cfg.command == "verify":
        return _verify(cfg)
    if cfg.command == "calibrate":
        return _calibrate(cfg)
    if cfg.command == "tabulate":
        return _tabulate(cfg)
    return _eval(cfg)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"cmeig: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(cfg)
    except ConfigError as exc:
        print(f"cmeig: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CmeigError, OSError) as exc:
        print(f"cmeig: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
