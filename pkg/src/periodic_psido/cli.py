"""Command-line interface: ``periodic-psido <command> [options]``.

Options can also come from an INI file given with ``--config``; keys in
``[defaults]`` apply to every command and keys in a section named after
the command apply to that command.  Flags on the command line win.

Exit status: 0 success, 1 failed self-test, 2 invalid configuration,
3 numerical refusal (report attached), 4 I/O error.  Errors are written to
stderr as one JSON record.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import sys
import time
import warnings

import numpy as np

from . import __version__
from .analysis import (
    WEIGHT_READING,
    continuity_bound,
    counterexample_demo,
    invertibility_check,
    multiplier_necessity_witness,
    neumann_inverse_apply,
    operator_norm_estimate,
)
from .exceptions import NotInvertibleError, NumericalRefusal
from .gabor import GaborSystem, ScanRow, dual_window, gabor_spec, scan
from .io import SCHEMA, FormatError, fmt, read_cell_csv, read_signal, read_symbol_json, symbol_to_dict, write_signal, write_symbol_json
from .lattice import PeriodMatrix
from .operator import OperatorSpec, aliasing_margin, apply_series
from .selftest import run_selftest
from .signal import GridSignal
from .symbol import COEFFICIENT_CONVENTION, PRUNE_TOL, fourier_coefficients
from .weights import moderation_check, parse_weight

__all__ = ["main", "build_parser", "ConfigError"]

CONVENTIONS = {"coefficient_sign": COEFFICIENT_CONVENTION, "tail_weight": WEIGHT_READING}

EXIT_OK, EXIT_SELFTEST, EXIT_CONFIG, EXIT_REFUSAL, EXIT_IO = 0, 1, 2, 3, 4

# option -> (type, default); None defaults mean "required unless stated"
OPTIONS = {
    "coeffs": {"cell": (str, None), "L": (str, None), "K": (int, 8), "prune": (float, PRUNE_TOL), "out": (str, None)},
    "apply": {"symbol": (str, None), "signal": (str, None), "tau": (float, 0.0), "K": (int, None), "out": (str, None)},
    "bound": {
        "symbol": (str, None),
        "weight": (str, "constant"),
        "C": (float, None),
        "measure": (bool, False),
        "tau": (float, 0.0),
        "extent": (float, 16.0),
        "npoints": (int, 256),
        "iters": (int, 2000),
        "out": (str, None),
    },
    "invert": {
        "symbol": (str, None),
        "signal": (str, None),
        "tau": (float, 0.0),
        "terms": (int, None),
        "weight": (str, "constant"),
        "C": (float, 1.0),
        "tol": (float, 1e-6),
        "out": (str, None),
        "report": (str, None),
    },
    "gabor": {
        "alpha": (float, 0.5),
        "beta": (float, 0.5),
        "window": (str, "gaussian"),
        "H": (int, None),
        "scan": (str, None),
        "extent": (float, 16.0),
        "npoints": (int, 512),
        "out": (str, None),
        "dual_out": (str, None),
    },
    "multiplier": {
        "symbol": (str, None),
        "weight": (str, "constant"),
        "counterexample": (bool, False),
        "extent": (float, 16.0),
        "npoints": (int, 4096),
        "witness_out": (str, None),
        "out": (str, None),
    },
    "selftest": {"out": (str, None)},
}

REQUIRED = {
    "coeffs": ("cell", "L", "out"),
    "apply": ("symbol", "signal", "out"),
    "bound": ("symbol",),
    "invert": ("symbol", "signal"),
}

HELP = {
    "coeffs": "Fourier coefficients of period-cell samples",
    "apply": "apply Op_tau(p) to a signal",
    "bound": "continuity bound (optionally with a measured norm)",
    "invert": "invertibility criterion and Neumann inverse",
    "gabor": "Gabor frame-operator symbol, dual window, zone scan",
    "multiplier": "multiplier necessity witness or the x-dependent counterexample",
    "selftest": "run the invariant suite",
}


class ConfigError(ValueError):
    """Invalid or missing configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="periodic-psido", description="Periodic pseudodifferential operators on a computational torus.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", help="INI file with [defaults] and per-command sections")
    parser.add_argument("--threads", type=int, default=None, help="worker cap for parallel scans")
    parser.add_argument("--timing", action="store_true", help="add wall-clock runtimes to reports")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, opts in OPTIONS.items():
        sp = sub.add_parser(name, help=HELP[name])
        for key, (typ, default) in opts.items():
            flag = "--" + key.replace("_", "-")
            if typ is bool:
                sp.add_argument(flag, dest=key, action="store_const", const=True, default=None)
            else:
                sp.add_argument(flag, dest=key, type=typ, default=None, help=f"default: {default}")
    return parser


def _coerce(typ, text, key):
    try:
        if typ is bool:
            return text.strip().lower() in ("1", "true", "yes", "on")
        return typ(text)
    except ValueError:
        raise ConfigError(f"config value for {key!r} is not a valid {typ.__name__}: {text!r}") from None


def resolve(args) -> dict:
    """Merge defaults, config file and flags (in increasing priority)."""
    if args.command is None:
        raise ConfigError("no command given")
    opts = OPTIONS[args.command]
    cfg = {k: d for k, (_, d) in opts.items()}
    threads = 1
    if args.config:
        parser = configparser.ConfigParser()
        parser.optionxform = str
        try:
            with open(args.config) as fh:
                parser.read_file(fh)
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse config: {exc}") from None
        for section in ("defaults", args.command):
            if not parser.has_section(section):
                continue
            for key, text in parser.items(section):
                key = key.replace("-", "_")
                if key == "threads":
                    threads = _coerce(int, text, key)
                elif key in opts:
                    cfg[key] = _coerce(opts[key][0], text, key)
                elif section == args.command:
                    raise ConfigError(f"unknown key {key!r} in section [{section}]")
    for key in opts:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if args.threads is not None:
        threads = args.threads
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    cfg["threads"] = threads
    cfg["timing"] = args.timing
    for key in REQUIRED.get(args.command, ()):
        if cfg.get(key) is None:
            raise ConfigError(f"{args.command}: missing required option --{key.replace('_', '-')}")
    return cfg


def _parse_matrix(text: str) -> PeriodMatrix:
    try:
        rows = [[float(x) for x in row.split(",")] for row in text.split(";")]
    except ValueError:
        raise ConfigError(f"cannot parse period matrix {text!r} (use 'a,b;c,d')") from None
    return PeriodMatrix(rows)


def _parse_range(text: str):
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise ConfigError(f"bad scan range {text!r} (use start:stop:count)") from None
    if n < 1 or not (0 < a and 0 < b):
        raise ConfigError(f"scan range {text!r} must be positive with count >= 1")
    return np.linspace(a, b, n)


def _report(cfg, command, body: dict, t0=None) -> dict:
    rep = {"schema": SCHEMA, "command": command}
    rep.update(body)
    rep["conventions"] = CONVENTIONS
    if cfg.get("timing") and t0 is not None:
        rep["runtime_s"] = time.perf_counter() - t0
    return rep


def _emit(obj: dict, path=None, stream=None):
    text = json.dumps(obj, indent=1, allow_nan=False, default=_json_default)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        (stream or sys.stdout).write(text + "\n")


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if hasattr(o, "as_dict"):
        return o.as_dict()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _clean(x):
    """Replace non-finite floats so reports stay valid JSON."""
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def cmd_coeffs(cfg):
    t0 = time.perf_counter()
    L = _parse_matrix(cfg["L"])
    samples = read_cell_csv(cfg["cell"], L)
    p = fourier_coefficients(samples, cfg["K"], prune=cfg["prune"])
    write_symbol_json(cfg["out"], p)
    _emit(_report(cfg, "coeffs", {"M": samples.M, "K": cfg["K"], "terms": len(p), "out": cfg["out"]}, t0))


def cmd_apply(cfg):
    t0 = time.perf_counter()
    p = read_symbol_json(cfg["symbol"])
    f = read_signal(cfg["signal"])
    spec = OperatorSpec(p, cfg["tau"], cfg["K"])
    g = apply_series(spec, f)
    write_signal(cfg["out"], g)
    body = {
        "tau": spec.tau,
        "K": spec.truncation,
        "terms": sum(1 for _ in spec.terms()),
        "aliasing_margin": aliasing_margin(spec, f),
        "out": cfg["out"],
    }
    sys.stdout.write(json.dumps(_report(cfg, "apply", body, t0), default=_json_default) + "\n")


def _weight_and_constant(cfg, dim):
    m = parse_weight(cfg["weight"], dim)
    C = cfg.get("C")
    mod = moderation_check(m)
    if C is None:
        if not mod.passed:
            raise NumericalRefusal(
                f"weight {m.name} fails the moderation check (ratio {mod.max_ratio:.4g} > {mod.constant:.4g})",
                {"moderation": mod.__dict__},
            )
        C = m.constant
    return m, float(C), mod


def cmd_bound(cfg):
    t0 = time.perf_counter()
    p = read_symbol_json(cfg["symbol"])
    m, C, mod = _weight_and_constant(cfg, p.n)
    measured = None
    if cfg["measure"]:
        if p.n != 2:
            raise ConfigError("--measure is available for d = 1 symbols")
        template = GridSignal.zeros(cfg["extent"], cfg["npoints"])
        weight = None if m.name == "constant" else m
        measured = operator_norm_estimate(OperatorSpec(p, cfg["tau"]), template, cfg["iters"], weight=weight)
    rep = continuity_bound(p, m.reference if m.name != "constant" else m, C, measured)
    body = {
        "weight": m.name,
        "moderation": {"max_ratio": mod.max_ratio, "constant": mod.constant, "passed": mod.passed},
        **rep.as_dict(),
    }
    _emit(_clean(_report(cfg, "bound", body, t0)), cfg["out"])


def cmd_invert(cfg):
    t0 = time.perf_counter()
    p = read_symbol_json(cfg["symbol"])
    f = read_signal(cfg["signal"])
    m = parse_weight(cfg["weight"], p.n)
    v = m.reference if m.name != "constant" else m
    spec = OperatorSpec(p, cfg["tau"])
    report = invertibility_check(p, v, cfg["C"])
    if not report.invertible:
        raise NotInvertibleError("invertibility criterion fails (inconclusive)", _clean(report.as_dict()))
    terms = cfg["terms"]
    if terms is None:
        rho = report.rho
        terms = 1 if rho == 0 else max(1, math.ceil(math.log(cfg["tol"]) / math.log(rho)) + 2)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = neumann_inverse_apply(spec, f, terms, v=v, C=cfg["C"], tol=cfg["tol"])
    if cfg["out"]:
        write_signal(cfg["out"], res.signal)
    body = {
        **report.as_dict(),
        "tau": spec.tau,
        "terms": terms,
        "residual": res.residual,
        "residual_history": res.history,
        "rho_observed": res.rho_observed,
        "warnings": [str(w.message) for w in caught],
        "out": cfg["out"],
    }
    _emit(_clean(_report(cfg, "invert", body, t0)), cfg["report"])


def _write_scan(rows: list[ScanRow], path):
    fh = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ScanRow.HEADER)
        for r in rows:
            a, b, c0, tail, cert, low, zone = r.as_tuple()
            w.writerow([fmt(a), fmt(b), fmt(c0), fmt(tail), int(cert), fmt(low), zone])
    finally:
        if path:
            fh.close()


def cmd_gabor(cfg):
    t0 = time.perf_counter()
    if cfg["window"] != "gaussian":
        raise ConfigError(f"unsupported window {cfg['window']!r} (only 'gaussian')")
    if cfg["scan"]:
        parts = cfg["scan"].split(",")
        if len(parts) != 2:
            raise ConfigError("--scan needs two ranges: a0:a1:na,b0:b1:nb")
        rows = scan(_parse_range(parts[0]), _parse_range(parts[1]), threads=cfg["threads"])
        _write_scan(rows, cfg["out"])
        return
    H = cfg["H"]
    if H is None:
        # largest truncation the torus accommodates, capped at 8
        nyquist = cfg["npoints"] / (2 * cfg["extent"])
        H = min(8, int(cfg["extent"] / 2 / cfg["alpha"]), int(nyquist / cfg["beta"]))
    sys_ = GaborSystem.gaussian(cfg["alpha"], cfg["beta"], H, cfg["extent"], cfg["npoints"])
    spec = gabor_spec(sys_)
    rep = invertibility_check(spec.symbol, parse_weight("constant", 2), 1.0)
    body = {"alpha": sys_.alpha, "beta": sys_.beta, "H": sys_.H, "symbol_terms": len(spec.symbol), **rep.as_dict()}
    if cfg["dual_out"]:
        gamma = dual_window(sys_)
        residual = (apply_series(spec, gamma) - sys_.g).norm() / sys_.g.norm()
        write_signal(cfg["dual_out"], gamma)
        body["dual_residual"] = residual
        body["dual_out"] = cfg["dual_out"]
    _emit(_clean(_report(cfg, "gabor", body, t0)), cfg["out"])


def cmd_multiplier(cfg):
    t0 = time.perf_counter()
    if cfg["counterexample"]:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            rep = counterexample_demo()
        body = {"counterexample": rep.as_dict(), "warnings": [str(w.message) for w in caught]}
        _emit(_clean(_report(cfg, "multiplier", body, t0)), cfg["out"])
        return
    if cfg["symbol"] is None:
        raise ConfigError("multiplier: give --symbol or --counterexample")
    sigma = read_symbol_json(cfg["symbol"])
    m = parse_weight(cfg["weight"], sigma.n)
    v = m.reference if m.name != "constant" else m
    if not hasattr(v, "submultiplicative_constant"):
        raise ConfigError("the witness needs a polynomial weight")
    u, rep = multiplier_necessity_witness(sigma.L, v, sigma, cfg["extent"], cfg["npoints"])
    if cfg["witness_out"]:
        write_signal(cfg["witness_out"], u)
    body = {"P": sigma.L.to_list(), "weight": m.name, **rep.as_dict(), "witness_out": cfg["witness_out"]}
    _emit(_clean(_report(cfg, "multiplier", body, t0)), cfg["out"])


def cmd_selftest(cfg):
    summary = run_selftest(timing=cfg["timing"])
    _emit(_clean(_report(cfg, "selftest", summary)), cfg["out"])
    return EXIT_OK if summary["passed"] else EXIT_SELFTEST


COMMANDS = {
    "coeffs": cmd_coeffs,
    "apply": cmd_apply,
    "bound": cmd_bound,
    "invert": cmd_invert,
    "gabor": cmd_gabor,
    "multiplier": cmd_multiplier,
    "selftest": cmd_selftest,
}


def _fail(kind: str, code: int, message: str, report=None) -> int:
    rec = {"schema": SCHEMA, "error": kind, "exit_code": code, "message": message}
    if report is not None:
        rec["report"] = _clean(report)
    sys.stderr.write(json.dumps(rec, default=_json_default) + "\n")
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve(args)
        status = COMMANDS[args.command](cfg)
        return EXIT_OK if status is None else status
    except ConfigError as exc:
        return _fail("config", EXIT_CONFIG, str(exc))
    except NumericalRefusal as exc:
        return _fail("numerical_refusal", EXIT_REFUSAL, str(exc), exc.report)
    except (OSError, FormatError) as exc:
        return _fail("io", EXIT_IO, str(exc))
    except (ValueError, TypeError) as exc:
        return _fail("config", EXIT_CONFIG, str(exc))


if __name__ == "__main__":
    sys.exit(main())
