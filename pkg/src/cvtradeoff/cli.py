"""Command-line front end.  Every command writes CSV (header first, 9 significant digits).

Exit codes: 0 success, 1 usage error, 2 ``check`` found an unexpected gap.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import os
import sys
from typing import Iterable

import numpy as np

from cvtradeoff import tradeoff
from cvtradeoff.channel import MeasurementSpec
from cvtradeoff.fidelities import clamp_unit, estimation_fidelity, transmission_fidelity
from cvtradeoff.gaussian_core import DomainError, SignalEnsemble, make_probe
from cvtradeoff.montecarlo import McConfig, simulate_F, simulate_G
from cvtradeoff.oracle import QuadratureConfig, ReportGrid, argmax_kappa, discrepancy_report, oracle_F, oracle_G

UNIFORM_DELTA = 1e4  # stands in for an infinite (uniform) alphabet
CONFIG_A_SIGMA = 1e-3

FIGURES = {
    "3": [("A", y) for y in (0.5, 3, 7, 10000)],
    "4": [("B", y) for y in (0.1, 1, 3, 7, 10000)],
    "4c": [("C", d) for d in (0.1, 0.2, 2, 5, UNIFORM_DELTA)],
    "5": [("compare", d) for d in (0.2, 1, 2, 5, 100)],
}

SCALARS = ("tau", "sigma", "theta", "delta", "kappa", "y", "z", "d")
DEFAULTS = {
    "tau": math.sqrt(0.5),
    "sigma": math.sqrt(0.5),
    "theta": 0.0,
    "delta": 1.0,
    "kappa": 1.0,
    "y": 1.0,
    "z": 1.0,
    "d": 2,
    "sweep": [],
    "oracle": False,
    "trials": 100_000,
    "seed": 0,
    "tol": 1e-6,
    "out": None,
    "points": tradeoff.DEFAULT_POINTS,
    "which": None,
    "figure": None,
    "bounds": False,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.9g}"


def write_csv(header: list[str], rows: Iterable, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def parse_sweep(text: str) -> tuple[str, np.ndarray]:
    try:
        var, lo, hi, n = text.split(":")
        values = np.linspace(float(lo), float(hi), int(n))
    except ValueError as exc:
        raise UsageError(f"bad --sweep {text!r}; expected var:lo:hi:n") from exc
    if var not in SCALARS or int(n) < 1:
        raise UsageError(f"bad --sweep {text!r}")
    return var, values


def _values(opts: dict, name: str) -> list[float]:
    for sweep in opts["sweep"]:
        var, values = parse_sweep(sweep)
        if var == name:
            return [float(v) for v in values]
    return [float(opts[name])]


# -- commands ------------------------------------------------------------------

def cmd_fidelity(opts: dict):
    header = ["theta", "sigma", "tau", "delta", "kappa", "F", "G"]
    if opts["oracle"]:
        header += ["F_oracle", "G_oracle"]
    q = QuadratureConfig(check_convergence=False)
    grid = itertools.product(*(_values(opts, k) for k in ("theta", "sigma", "tau", "delta", "kappa")))
    rows = []
    for th, sg, tau, dl, k in grid:
        p, ens, m = make_probe(th, sg), SignalEnsemble(tau, dl), MeasurementSpec(k)
        row = [th, sg, tau, dl, k, clamp_unit(transmission_fidelity(p, tau)), clamp_unit(estimation_fidelity(p, ens, m))]
        if opts["oracle"]:
            row += [clamp_unit(oracle_F(p, tau, q)), clamp_unit(oracle_G(p, ens, m, q))]
        rows.append(row)
    return header, rows


def _curve_rows(which: str, param: float, points: int):
    if which == "compare":
        for G, fb, fc in tradeoff.compare_B_C(param, points=points):
            yield "CMP_B", param, G, G, fb
        for G, fb, fc in tradeoff.compare_B_C(param, points=points):
            yield "CMP_C", param, G, G, fc
        return
    curve = tradeoff.generate_curve(which, param, points)
    for sweep_value, G, F in curve.samples:
        yield curve.config, param, sweep_value, clamp_unit(G), clamp_unit(F)


def cmd_curve(opts: dict):
    if opts["figure"] is not None:
        if opts["figure"] not in FIGURES:
            raise UsageError(f"unknown figure {opts['figure']!r}; choose from {sorted(FIGURES)}")
        jobs = list(FIGURES[opts["figure"]])
    elif opts["which"] is not None:
        which = opts["which"]
        key = {"A": "y", "B": "y", "C": "delta", "compare": "delta", "QUDIT": "d", "CV_BOUND": "y"}.get(which)
        if key is None:
            raise UsageError(f"unknown curve {which!r}")
        jobs = [(which, v) for v in _values(opts, key)]
    else:
        raise UsageError("curve needs --which or --figure")
    if opts["bounds"]:
        jobs += [("CV_BOUND", 0.0), ("QUDIT", int(opts["d"]))]
    rows = [r for which, param in jobs for r in _curve_rows(which, param, int(opts["points"]))]
    return ["config", "param", "sweep_value", "G", "F"], rows


SURFACE_TAUS = (0.4, 1 / math.sqrt(2), 2.0)


def default_surface_sigmas(n: int = 21) -> list[float]:
    """``n`` widths in [0.1, 2] that include the minimum-energy width 1/sqrt(2)."""
    return sorted(set(np.linspace(0.1, 2.0, n - 1).tolist()) | {1 / math.sqrt(2)})


def cmd_surface(opts: dict):
    sweeps = dict(parse_sweep(s) for s in opts["sweep"])
    sigmas = sweeps.get("sigma", default_surface_sigmas())
    thetas = sweeps.get("theta", np.linspace(0.0, math.pi / 2, 21))
    taus = sweeps.get("tau", SURFACE_TAUS)
    kappa = float(opts["kappa"]) if opts.get("_kappa_set") else 1.0
    delta = float(opts["delta"]) if opts.get("_delta_set") else 1 / math.sqrt(2)
    m = MeasurementSpec(kappa)
    rows = []
    for tau in taus:
        ens = SignalEnsemble(float(tau), delta)
        for sg in sigmas:
            for th in thetas:
                p = make_probe(float(th), float(sg))
                rows.append([tau, sg, th, transmission_fidelity(p, tau), estimation_fidelity(p, ens, m)])
    return ["tau", "sigma", "theta", "F", "G"], rows


def cmd_optimize(opts: dict):
    which = opts["which"] or "B"
    if which not in ("A", "B", "C"):
        raise UsageError("optimize needs --which A, B or C")
    rows = []
    for tau, dl, sg in itertools.product(*(_values(opts, k) for k in ("tau", "delta", "sigma"))):
        ens = SignalEnsemble(tau, dl)
        if which == "A":
            sg, th = CONFIG_A_SIGMA, float(opts["theta"])
        elif which == "B":
            th = 0.0
        else:
            sg, th = math.sqrt(0.5), 0.0
        closed = tradeoff.kappa_opt(which, ens, sg)
        numeric = argmax_kappa(make_probe(th, sg), ens)
        rows.append([which, tau, dl, sg, th, closed, numeric, abs(closed - numeric)])
    return ["config", "tau", "delta", "sigma", "theta", "kappa_closed", "kappa_numeric", "gap"], rows


def cmd_mc(opts: dict):
    cfg = McConfig(int(opts["trials"]), int(opts["seed"]))
    rows = []
    grid = itertools.product(*(_values(opts, k) for k in ("theta", "sigma", "tau", "delta", "kappa")))
    for th, sg, tau, dl, k in grid:
        p, ens, m = make_probe(th, sg), SignalEnsemble(tau, dl), MeasurementSpec(k)
        f = simulate_F(p, tau, m, cfg)
        g = simulate_G(ens, p, m, cfg)
        common = [th, sg, tau, dl, k, cfg.trials, cfg.seed]
        rows.append(["F", *common, f.mean, f.stderr, transmission_fidelity(p, tau)])
        rows.append(["G", *common, g.mean, g.stderr, estimation_fidelity(p, ens, m)])
    header = ["quantity", "theta", "sigma", "tau", "delta", "kappa", "trials", "seed", "mean", "stderr", "closed_form"]
    return header, rows


def cmd_check(opts: dict):
    report = discrepancy_report(ReportGrid(tol=float(opts["tol"])))
    rows = [[r.quantity, r.params, r.analytic, r.oracle, r.gap, r.status] for r in report]
    failed = any(r.status == "FAIL" for r in report)
    return ["quantity", "params", "analytic", "oracle", "gap", "status"], rows, failed


COMMANDS = {
    "fidelity": cmd_fidelity,
    "curve": cmd_curve,
    "surface": cmd_surface,
    "optimize": cmd_optimize,
    "mc": cmd_mc,
    "check": cmd_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cvtradeoff", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON file with option values; flags take precedence")
    for name in SCALARS:
        parser.add_argument(f"--{name}", type=int if name == "d" else float, default=None)
    parser.add_argument("--sweep", action="append", default=None, metavar="VAR:LO:HI:N")
    parser.add_argument("--oracle", action="store_true", default=None, help="add quadrature-oracle columns")
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--points", type=int, default=None, help="samples per curve")
    parser.add_argument("--which", default=None, help="curve/optimize configuration: A, B, C, CV_BOUND, QUDIT, compare")
    parser.add_argument("--figure", default=None, help="figure dataset preset: 3, 4, 4c, 5")
    parser.add_argument("--bounds", action="store_true", default=None, help="append CV and qudit bound curves")
    return parser


def resolve_options(args: argparse.Namespace) -> dict:
    file_opts = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                file_opts = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config!r}: {exc}") from exc
        unknown = set(file_opts) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
    opts = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        opts[key] = flag if flag is not None else file_opts.get(key, default)
        opts[f"_{key}_set"] = flag is not None or key in file_opts
    if isinstance(opts["sweep"], str):
        opts["sweep"] = [opts["sweep"]]
    return opts


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        opts = resolve_options(args)
        result = COMMANDS[args.command](opts)
    except (UsageError, DomainError) as exc:
        print(f"cvtradeoff: error: {exc}", file=sys.stderr)
        return 1
    failed = False
    if args.command == "check":
        header, rows, failed = result
    else:
        header, rows = result
    if opts["out"]:
        with open(opts["out"], "w", encoding="utf-8", newline="") as fh:
            write_csv(header, rows, fh)
    else:
        try:
            write_csv(header, rows, sys.stdout)
            sys.stdout.flush()
        except BrokenPipeError:
            # reader went away (e.g. piped into head); silence the interpreter's flush
            sys.stdout = open(os.devnull, "w")
    return 2 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
