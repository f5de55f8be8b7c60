"""Command-line front end: ``wernerholevo <command> [options]``.

Exit codes: 0 all checks pass, 1 a mathematical tolerance was breached,
2 input error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .channel import check_dim, holevo_capacity, min_output_entropy_single, product_output_matrix
from .entropy import entropy_batch, entropy_decomposition
from .errors import InputError, NumericalError
from .linalg import eig_hermitian, shannon_entropy
from .minimize import minimize_over_simplex
from .simplex import as_schmidt, barycentric_grid_d3
from .spectrum import full_spectrum, theta_d3
from .verify import CHECKS, SUITES, run_suite

SEED_ENV = "WERNERHOLEVO_SEED"
SCHEMA = 1

EXIT_OK, EXIT_BREACH, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3

# defaults for --tol; verify checks are addressed by their registry names
TOLERANCES = {
    "spectrum/discrepancy": 1e-9,
    "minimize/gap": 1e-6,
    "capacity/additivity": 1e-9,
    **{c.name: c.tolerance for c in CHECKS},
}


@dataclass
class CliConfig:
    log_base: object = 2
    tolerances: dict = field(default_factory=dict)
    output_format: str = "text"
    seed: int = 0
    parallelism: int = 1
    timing: bool = False

    def tol(self, name):
        return self.tolerances.get(name, TOLERANCES[name])


@dataclass
class Result:
    """What a command produced: a JSON payload, a CSV table and text lines."""
    command: str
    payload: dict
    header: list
    rows: list
    text: list
    breach: bool = False
    force_csv: bool = False


class CliInputError(InputError):
    pass


# -- parsing helpers ----------------------------------------------------------

def parse_lambda(raw, d=None):
    """Comma-separated entries; each may be a decimal or a fraction like 1/3."""
    try:
        vals = [float(Fraction(x.strip())) for x in raw.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise CliInputError(f"cannot parse lambda {raw!r}: {exc}") from None
    if d is not None and len(vals) != d:
        raise CliInputError(f"lambda has {len(vals)} entries but --d is {d}")
    return as_schmidt(vals)


def parse_tolerances(items):
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise CliInputError(f"--tol expects name=value, got {item!r}")
        if name not in TOLERANCES:
            raise CliInputError(f"unknown tolerance {name!r}")
        try:
            v = float(value)
        except ValueError:
            raise CliInputError(f"tolerance {name} is not a number: {value!r}") from None
        if not (v > 0 and math.isfinite(v)):
            raise CliInputError(f"tolerance {name} must be a positive real")
        out[name] = v
    return out


def _base(raw):
    return math.e if raw == "e" else 2


def _fmt(x):
    return "%.12g" % x


# -- commands -----------------------------------------------------------------

def cmd_spectrum(args, cfg):
    lam = parse_lambda(args.lam, args.d)
    d = check_dim(lam.size)
    payload = {"d": d, "lambda": lam.tolist(), "method": args.method}
    closed = dense = None
    if args.method in ("closed", "both"):
        closed = full_spectrum(lam).values
        payload["closed"] = closed.tolist()
    if args.method in ("dense", "both"):
        dense = eig_hermitian(product_output_matrix(lam))
        payload["dense"] = dense.tolist()
    breach = False
    text = [f"d = {d}", "lambda = " + ", ".join(_fmt(x) for x in lam)]
    if closed is not None:
        text.append("closed: " + " ".join(_fmt(x) for x in closed))
    if dense is not None:
        text.append("dense:  " + " ".join(_fmt(x) for x in dense))
    if closed is not None and dense is not None:
        disc = float(np.max(np.abs(closed - dense)))
        tol = cfg.tol("spectrum/discrepancy")
        breach = not disc <= tol
        payload.update(discrepancy=disc, tolerance=tol)
        text.append(f"max discrepancy = {disc:.3e} (tolerance {tol:.0e})")
    cols = [c for c in ("closed", "dense") if c in payload]
    rows = [[i] + [payload[c][i] for c in cols] for i in range(d * d)]
    return Result("spectrum", payload, ["index"] + cols, rows, text, breach)


def cmd_entropy(args, cfg):
    lam = parse_lambda(args.lam, args.d)
    d = check_dim(lam.size)
    dec = entropy_decomposition(lam, cfg.log_base)
    payload = {"d": d, "lambda": lam.tolist(), "S": dec.S, "S1": dec.S1, "S2": dec.S2,
               "H": shannon_entropy(lam, cfg.log_base)}
    if d == 3:
        t, theta = theta_d3(lam)
        payload.update(t=t, theta=theta)
    keys = [k for k in ("S", "S1", "S2", "H", "t", "theta") if k in payload]
    text = [f"{k} = {_fmt(payload[k])}" for k in keys]
    return Result("entropy", payload, keys, [[payload[k] for k in keys]], text)


def cmd_minimize(args, cfg):
    rep = minimize_over_simplex(args.d, budget=args.budget, seed=cfg.seed,
                                refine=args.refine, base=cfg.log_base)
    expected = rep.extra["expected_vertex_value"]
    tol = cfg.tol("minimize/gap")
    gap = rep.min_value - expected
    breach = rep.counterexample is not None or not abs(gap) <= tol
    payload = rep.to_dict()
    payload["base"] = "e" if cfg.log_base == math.e else 2
    payload["tolerance"] = tol
    payload["gap_to_expected"] = gap
    text = [
        f"d = {rep.d}  samples = {rep.samples_evaluated}  seed = {rep.seed}  refine = {rep.refined}",
        f"min S = {rep.min_value:.6f}  (vertex value {rep.vertex_value:.6f}, expected {expected:.6f})",
        "argmin = " + ", ".join(_fmt(x) for x in rep.argmin),
        f"distance of argmin to nearest vertex = {rep.max_vertex_distance_of_argmin:.3e}",
    ]
    if rep.best_non_vertex_value is not None:
        text.append(f"best non-vertex value = {rep.best_non_vertex_value:.9f}")
    text.append("counterexample: " + ("none" if rep.counterexample is None
                                       else ", ".join(_fmt(x) for x in rep.counterexample)))
    keys = ["d", "min_value", "vertex_value", "samples_evaluated", "max_vertex_distance_of_argmin", "seed"]
    header = keys + [f"argmin{i + 1}" for i in range(rep.d)]
    return Result("minimize", payload, header, [[payload[k] for k in keys] + rep.argmin], text, breach)


def cmd_verify(args, cfg):
    t0 = time.perf_counter()
    tols = {k: v for k, v in cfg.tolerances.items() if "/" in k and k.split("/")[0] in SUITES}
    reports = run_suite(args.suite, trials=args.trials, d_max=args.d_max, seed=cfg.seed,
                        parallel=cfg.parallelism, tolerances=tols)
    wall = time.perf_counter() - t0
    breach = any(r.gating and not r.passed for r in reports)
    suites = {}
    for r in reports:
        s = suites.setdefault(r.suite, {"cases": 0, "failures": 0, "max_violation": 0.0})
        s["cases"] += r.cases
        if r.gating:
            s["failures"] += r.failures
            s["max_violation"] = max(s["max_violation"], r.max_violation)
    payload = {
        "suite": args.suite, "trials": args.trials, "d_max": args.d_max, "seed": cfg.seed,
        "passed": not breach, "suites": suites,
        "checks": [r.to_dict(cfg.timing) for r in reports],
    }
    if cfg.timing:
        payload["wall_time"] = wall
    text = []
    for r in reports:
        verdict = ("PASS" if r.passed else "FAIL") if r.gating else ("SUPPORT" if r.passed else "AGAINST")
        line = f"{verdict:7s} {r.check:40s} cases={r.cases:<7d} failures={r.failures:<5d} max_violation={r.max_violation:.3e} tol={r.tolerance:.0e}"
        if cfg.timing:
            line += f" time={r.wall_time:.2f}s"
        text.append(line)
    text.append(f"{'all gating checks passed' if not breach else 'tolerance breached'} "
                f"({len(reports)} checks, seed {cfg.seed})")
    header = ["suite", "check", "cases", "failures", "max_violation", "tolerance", "gating"]
    rows = [[r.suite, r.check, r.cases, r.failures, r.max_violation, r.tolerance, int(r.gating)] for r in reports]
    return Result("verify", payload, header, rows, text, breach)


def figure_rows(which, step, base=2):
    """(header, rows) of the figure data; figure 1 is S over the d = 3 simplex, figure 2 is S2 along l1 = l2."""
    if not (step > 0 and math.isfinite(step)):
        raise CliInputError("step must be positive")
    if which == 1:
        try:
            pts = barycentric_grid_d3(step)
        except ValueError as exc:
            raise CliInputError(str(exc)) from None
        s = entropy_batch(pts, base)[0]
        return ["lambda1", "lambda2", "S"], np.column_stack([pts[:, 0], pts[:, 1], s])
    n = int(round(0.5 / step))
    if n < 1 or abs(n * step - 0.5) > 1e-9:
        raise CliInputError(f"step {step} does not divide 1/2")
    lam = np.arange(n + 1) / (2 * n)
    s2 = entropy_batch(np.column_stack([lam, lam, 1.0 - 2.0 * lam]), base)[2]
    return ["lambda", "S2"], np.column_stack([lam, s2])


def cmd_figure(args, cfg):
    header, table = figure_rows(args.which, args.step, cfg.log_base)
    payload = {"figure": args.which, "step": args.step, "columns": header, "rows": table.tolist()}
    return Result("figure", payload, header, table.tolist(), [], force_csv=True)


def cmd_capacity(args, cfg):
    d = check_dim(args.d)
    b = cfg.log_base
    h1 = min_output_entropy_single(d, b)
    h2 = entropy_decomposition(np.eye(d)[0], b, check=False).S
    c1 = holevo_capacity(d, h1, b)
    c2 = holevo_capacity(d * d, h2, b) / 2.0
    defect = abs(c2 - c1)
    tol = cfg.tol("capacity/additivity")
    payload = {"d": d, "h_single": h1, "h_two_copy": h2, "capacity_single": c1,
               "capacity_two_copy_per_copy": c2, "additivity_defect": defect, "tolerance": tol}
    text = [
        f"d = {d}",
        f"h(Phi) = {_fmt(h1)}   h(Phi x Phi) = {_fmt(h2)}",
        f"C(Phi) = log d - h(Phi) = {_fmt(c1)}",
        f"C(Phi x Phi) / 2 = {_fmt(c2)}",
        f"additivity defect = {defect:.3e}",
    ]
    keys = ["d", "capacity_single", "capacity_two_copy_per_copy", "additivity_defect"]
    return Result("capacity", payload, keys, [[payload[k] for k in keys]], text, not defect <= tol)


# -- rendering ----------------------------------------------------------------

def render(res, fmt):
    if res.force_csv or fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(res.header)
        for row in res.rows:
            w.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()
    if fmt == "json":
        doc = {"schema": SCHEMA, "command": res.command, "version": __version__,
               "breach": res.breach, **res.payload}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return "\n".join(res.text) + "\n"


# -- argument parser ----------------------------------------------------------

def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return None  # reported as an input error unless --seed overrides it


def _common(parser, suppress):
    def dflt(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--log-base", choices=["2", "e"], default=dflt("2"))
    parser.add_argument("--format", choices=["text", "json", "csv"], default=dflt("text"))
    parser.add_argument("--seed", type=int, default=dflt(None),
                        help=f"64-bit seed (default: ${SEED_ENV} or 0)")
    parser.add_argument("--parallel", type=int, default=dflt(1), metavar="N",
                        help="worker processes for verify")
    parser.add_argument("--out", default=dflt(None), help="write output here instead of stdout")
    parser.add_argument("--tol", action="append", default=dflt([]), metavar="NAME=VALUE",
                        help="override a named tolerance")
    parser.add_argument("--timing", action="store_true", default=dflt(False),
                        help="include wall times in reports (breaks byte-identical output)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wernerholevo",
        description="Exact spectra, entropies and additivity certificates for the Werner-Holevo channel.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, suppress=True)

    p = sub.add_parser("spectrum", parents=[common], help="spectrum of the product-channel output")
    p.add_argument("--d", type=int)
    p.add_argument("--lambda", dest="lam", required=True, help="Schmidt coefficients, e.g. 1/3,1/3,1/3")
    p.add_argument("--method", choices=["closed", "dense", "both"], default="closed")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("entropy", parents=[common], help="S, S1, S2 at a Schmidt vector")
    p.add_argument("--d", type=int)
    p.add_argument("--lambda", dest="lam", required=True)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("minimize", parents=[common], help="search the simplex for the minimum of S")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--refine", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("verify", parents=[common], help="run randomized property suites")
    p.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    p.add_argument("--d-max", type=int, default=4)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figure", parents=[common], help="CSV data behind the d = 3 figures")
    p.add_argument("--which", type=int, choices=[1, 2], required=True)
    p.add_argument("--step", type=float, default=None, help="grid step (default 0.01 for 1, 0.001 for 2)")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("capacity", parents=[common], help="Holevo capacity, single and two-copy")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_capacity)
    return parser


def _config(args):
    seed = args.seed if args.seed is not None else _default_seed()
    if seed is None:
        raise CliInputError(f"${SEED_ENV} is not an integer")
    if not -(2 ** 63) <= seed < 2 ** 64:
        raise CliInputError("seed must fit in 64 bits")
    if args.parallel < 1:
        raise CliInputError("--parallel must be at least 1")
    return CliConfig(
        log_base=_base(args.log_base),
        tolerances=parse_tolerances(args.tol),
        output_format=args.format,
        seed=seed,
        parallelism=args.parallel,
        timing=args.timing,
    )


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "figure" and args.step is None:
            args.step = 0.01 if args.which == 1 else 0.001
        if args.command in ("minimize", "verify") and getattr(args, "trials", 1) < 1:
            raise CliInputError("--trials must be positive")
        if args.command == "verify" and args.d_max < 3:
            raise CliInputError("--d-max must be at least 3")
        res = args.func(args, cfg)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_BREACH
    text = render(res, cfg.output_format)
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_BREACH if res.breach else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
