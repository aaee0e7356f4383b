"""Command-line entry point ``esdlab``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or validation error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import experiments as ex
from .dynamics import DEFAULT_DT, analytic_coefficients, integrate_packed
from .entanglement import concurrence_x_packed
from .errors import EsdlabError
from .esd import closed_form_roots_wzero, esd_report
from .families import parse_state_spec
from .state import BathParams, load_xstate, xstate_to_dict

EVOLVE_COLUMNS = ("t", "X", "a", "b", "c", "d", "z_re", "z_im", "w_re", "w_im", "C")


def finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"non-finite value rejected: {text!r}")
    return v


def load_state(spec: str):
    path = Path(spec)
    if spec.endswith(".json") or path.is_file():
        return load_xstate(path)
    return parse_state_spec(spec)


def _bath(args) -> BathParams:
    return BathParams(args.gamma, args.nbar)


def cmd_evolve(args) -> int:
    s0 = load_state(args.state)
    bath = _bath(args)
    if args.t_max < 0:
        raise EsdlabError("--t-max must be >= 0")
    ts = np.linspace(0.0, args.t_max, args.samples)
    xs = np.exp(-bath.rate * ts)
    if args.numeric:
        packed = integrate_packed(s0.as_vector(), bath.nbar, bath.gamma * ts, bath.gamma * args.dt)
    else:
        packed = analytic_coefficients(s0, bath.nbar).evaluate_many(xs)
    cs = concurrence_x_packed(packed)
    rows = []
    for t, x, v, c in zip(ts, xs, packed, cs):
        rows.append((t, x, v[0].real, v[1].real, v[2].real, v[3].real,
                     v[4].real, v[4].imag, v[5].real, v[5].imag, c))
    ex.write_table(rows, EVOLVE_COLUMNS, args.out, args.format)
    return 0


def cmd_death(args) -> int:
    s0 = load_state(args.state)
    bath = _bath(args)
    report = esd_report(s0, bath).to_dict()
    report["state"] = xstate_to_dict(s0)
    report["nbar"], report["gamma"] = bath.nbar, bath.gamma
    if args.closed_form:
        if abs(s0.w) != 0.0:
            report["closed_form_roots"] = None
            report["closed_form_note"] = "closed form applies only when w0 = 0"
        else:
            try:
                report["closed_form_roots"] = closed_form_roots_wzero(s0.a, s0.d, abs(s0.z), bath.nbar)
            except EsdlabError as err:
                report["closed_form_roots"] = None
                report["closed_form_note"] = str(err)
    Path(args.out).write_text(json.dumps(report, indent=2, allow_nan=False) + "\n")
    return 0


def cmd_sweep(args) -> int:
    spec = ex.SweepSpec(
        family=args.family,
        alphas=list(ex.parse_grid(args.alpha)),
        nbars=list(ex.parse_grid(args.nbar)),
        x_grid=list(ex.parse_grid(args.x_grid)),
        gamma=args.gamma,
        out=args.out,
        fmt=args.format,
    )
    rows = ex.run_sweep(spec, jobs=args.jobs)
    ex.write_table(rows, ex.SWEEP_COLUMNS, args.out, args.format)
    return 0


def cmd_fig2(args) -> int:
    grid = ex.parse_grid(args.x_grid)
    rows = ex.fig2_data(args.nbar, args.a0, args.d0, args.z, grid)
    ex.write_table(rows, ("X", "F"), args.out, args.format)
    return 0


def cmd_fig3(args) -> int:
    rows = ex.fig3_data(ex.parse_grid(args.alpha), ex.parse_grid(args.x_grid),
                        ex.parse_grid(args.nbar), jobs=args.jobs)
    ex.write_table(rows, ex.SWEEP_COLUMNS, args.out, args.format)
    return 0


def cmd_verify(args) -> int:
    from .verify import run_verify

    report = run_verify(seed=args.seed, perturb=args.perturb_coefficient)
    print(report.summary())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="esdlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def bath_opts(p):
        p.add_argument("--nbar", type=finite_float, required=True, help="mean thermal occupation")
        p.add_argument("--gamma", type=finite_float, default=1.0, help="decay rate (default 1)")

    def fmt_opt(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("evolve", help="state trajectory and concurrence")
    p.add_argument("--state", required=True, help="JSON file or family[:params], e.g. ye:0.2")
    bath_opts(p)
    p.add_argument("--t-max", type=finite_float, required=True)
    p.add_argument("--dt", type=finite_float, default=DEFAULT_DT, help="RK4 step for --numeric")
    p.add_argument("--samples", type=int, default=101, help="output time points")
    p.add_argument("--numeric", action="store_true", help="integrate instead of the closed form")
    p.add_argument("--out", required=True)
    fmt_opt(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("death", help="sudden-death report as JSON")
    p.add_argument("--state", required=True)
    bath_opts(p)
    p.add_argument("--closed-form", action="store_true", help="also report the w=0 closed-form roots")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_death)

    p = sub.add_parser("sweep", help="concurrence over (nbar, alpha, X) grids")
    p.add_argument("--family", default="ye", choices=("ye",))
    p.add_argument("--alpha", required=True, help="start:stop:step or comma list")
    p.add_argument("--nbar", required=True, help="comma list")
    p.add_argument("--x-grid", required=True, help="start:stop:step inside (0, 1]")
    p.add_argument("--gamma", type=finite_float, default=1.0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    fmt_opt(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fig2", help="F(X) = |z|^2 X^2 - a(X) d(X)")
    p.add_argument("--nbar", type=finite_float, default=ex.FIG2_PARAMS["nbar"])
    p.add_argument("--a0", type=finite_float, default=ex.FIG2_PARAMS["a0"])
    p.add_argument("--d0", type=finite_float, default=ex.FIG2_PARAMS["d0"])
    p.add_argument("--z", type=finite_float, default=ex.FIG2_PARAMS["zmag"])
    p.add_argument("--x-grid", default="0:1:0.01")
    p.add_argument("--out", required=True)
    fmt_opt(p)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("fig3", help="concurrence of the rho_YE family vs X and alpha")
    p.add_argument("--alpha", default="0:1:0.05")
    p.add_argument("--nbar", default=",".join(f"{n:g}" for n in ex.FIG3_NBARS))
    p.add_argument("--x-grid", default="0.01:1:0.01")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    fmt_opt(p)
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("verify", help="run the cross-check suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perturb-coefficient", type=finite_float, default=0.0,
                   help="mutation test: offset one propagator coefficient")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EsdlabError, ValueError, OSError) as err:
        print(f"esdlab: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
