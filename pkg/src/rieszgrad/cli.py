"""Command-line interface.

Subcommands::

    rieszgrad bound   --n N --alpha A --u U --v V
    rieszgrad eval    FILE --alpha A [--method analytic|quadrature|montecarlo]
    rieszgrad table   --kind {M,Phi,psi,f,h} --n N [--alpha A] [--min X0] --max X1 --step DX
    rieszgrad verify  --suite NAME [--seed S] [--output PATH]
    rieszgrad moments --piece A:B[:W] [--piece ...] [--lebesgue]

Every subcommand accepts ``--format human|json|csv``.  Human output rounds
to 6 significant digits, json and csv carry 15.  Column order:

* bound:   n, alpha, u, v, t0, sigma0, value, gradient_bound, cauchy, witness_tau, witness_sigma
* eval:    n, alpha, u, v, H, N, slack, cauchy
* table:   argument, value
* verify:  suite, cases, max_residual, failures
* moments: name, value  (moments s_-2..s_2, then each inequality's slack)

Density files are described in :mod:`rieszgrad.densityfile`.

Exit codes: 0 success, 2 usage or range error, 3 bad input data,
4 verification failure.  ``RIESZGRAD_THREADS`` sets the default thread count.
"""
import argparse
import csv
import json
import math
import sys

import numpy as np

from . import _backend, bounds, moments, reduced
from .densityfile import load_density
from .errors import DensityFileError, DomainError, RangeError, RieszError, UnknownSuite
from .potentials import density_functionals
from .verify import run_suite

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY = 0, 2, 3, 4


def _fmt(x, digits):
    if x is None:
        return "n/a"
    if isinstance(x, (bool, str)):
        return str(x).lower() if isinstance(x, bool) else x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.{digits}g}"


def _json_value(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return float(f"{x:.15g}") if math.isfinite(x) else str(x)


def emit(rows, columns, fmt, out, title=None, single=False):
    """Write records (dicts) in the requested format with a fixed column order.

    ``single`` marks a one-record result: json emits an object instead of a
    list and human mode prints one ``name value`` pair per line.
    """
    if fmt == "json":
        payload = [{c: _json_value(r.get(c)) for c in columns} for r in rows]
        if single:
            payload = payload[0]
        out.write(json.dumps(payload, indent=2) + "\n")
    elif fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_fmt(r.get(c), 15) for c in columns])
    else:
        if title:
            out.write(title + "\n")
        if single:
            width = max(len(c) for c in columns)
            for c in columns:
                out.write(f"{c:<{width}}  {_fmt(rows[0].get(c), 6)}\n")
        else:
            out.write("  ".join(f"{c:>14}" for c in columns) + "\n")
            for r in rows:
                out.write("  ".join(f"{_fmt(r.get(c), 6):>14}" for c in columns) + "\n")


BOUND_COLUMNS = [
    "n", "alpha", "u", "v", "t0", "sigma0", "value", "gradient_bound", "cauchy",
    "witness_tau", "witness_sigma",
]
EVAL_COLUMNS = ["n", "alpha", "u", "v", "H", "N", "slack", "cauchy"]


def cmd_bound(args, out):
    res = bounds.N_alpha(args.n, args.alpha, args.u, args.v)
    grad = None if args.alpha == args.n else (args.n - args.alpha) * math.sqrt(res.value)
    row = {
        "n": args.n, "alpha": args.alpha, "u": args.u, "v": args.v, "t0": res.t0,
        "sigma0": res.sigma0, "value": res.value, "gradient_bound": grad,
        "cauchy": res.cauchy,
        "witness_tau": res.witness.tau if res.witness else None,
        "witness_sigma": res.witness.sigma if res.witness else None,
    }
    emit([row], BOUND_COLUMNS, args.format, out, single=True)
    return EXIT_OK


def cmd_eval(args, out):
    rho = load_density(args.file)
    fv = density_functionals(rho, args.alpha, args.method, samples=args.samples, seed=args.seed)
    N = bounds.N_alpha(rho.n, args.alpha, fv.u, fv.v).value
    slack = N - fv.H**2
    row = {"n": rho.n, "alpha": args.alpha, "u": fv.u, "v": fv.v, "H": fv.H, "N": N,
           "slack": slack, "cauchy": fv.u * fv.v}
    emit([row], EVAL_COLUMNS, args.format, out, single=True)
    if slack < -args.tol * max(fv.u * fv.v, 1e-300):
        print("error: H^2 exceeds the sharp bound; this indicates a bug", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


_TABLE_KINDS = {"M": "M_n", "Phi": "Phi_n", "psi": "psi"}


def _table_fn(kind, n, alpha):
    if kind == "M":
        return lambda x: bounds.M_n(n, x)
    if kind == "Phi":
        return lambda x: bounds.Phi_n(n, x)
    if kind == "psi":
        return lambda x: bounds.psi_shape(n, alpha, x)
    if kind == "f":
        return lambda x: reduced.f_alpha(n, alpha, x)
    return lambda x: reduced.h_alpha(n, alpha, x)


def cmd_table(args, out):
    lo = args.min if args.min is not None else (1.0 if args.kind in ("f", "h") else 0.0)
    if args.adaptive:
        if args.kind not in _TABLE_KINDS:
            raise DomainError("adaptive tables exist only for M, Phi and psi")
        if lo > args.max:
            xs = []
        else:
            tab = bounds.build_shape_table(_TABLE_KINDS[args.kind], args.n, lo, args.max,
                                           alpha=args.alpha, tol=args.tol)
            xs = tab.samples
        rows = [{"argument": x, "value": y} for x, y in xs]
    else:
        if not args.step > 0.0:
            raise DomainError("--step must be positive")
        count = 0 if lo > args.max else int(math.floor((args.max - lo) / args.step + 1e-9)) + 1
        fn = _table_fn(args.kind, args.n, args.alpha)
        rows = []
        for i in range(count):
            x = lo + i * args.step
            rows.append({"argument": x, "value": fn(x)})
    emit(rows, ["argument", "value"], args.format, out)
    return EXIT_OK


def cmd_verify(args, out):
    rep = run_suite(args.suite, args.seed)
    text = rep.to_json() + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.format == "json":
        out.write(text)
    else:
        reports = rep.children or [rep]
        rows = [{"suite": r.suite, "cases": r.cases, "max_residual": r.max_residual,
                 "failures": len(r.failures)} for r in reports]
        emit(rows, ["suite", "cases", "max_residual", "failures"], args.format, out,
             title=rep.summary())
    if not rep.ok:
        for f in rep.failures:
            print(f"FAIL {f.get('suite', rep.suite)}/{f['check']}: residual {f['residual']:.3g} "
                  f"> {f['tol']:.3g} at {json.dumps(f['inputs'], sort_keys=True)}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_moments(args, out):
    pieces = [(p[0], p[1], p[2] if len(p) > 2 else 1.0) for p in args.piece]
    s = moments.step_moments(pieces, range(-2, 3))
    vals = s.to_lebesgue() if args.lebesgue else s.s
    rows = [{"name": f"s_{k}", "value": vals[k]} for k in sorted(vals)]
    report = moments.check_critical_inequalities(s)
    rows += [{"name": k, "value": v} for k, v in report.slacks.items()]
    emit(rows, ["name", "value"], args.format, out,
         title=f"# {moments.NORMALIZATION_NOTE}")
    return EXIT_OK if report.ok else EXIT_VERIFY


def _piece(text):
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad piece {text!r}; expected A:B or A:B:W") from None
    if len(vals) not in (2, 3):
        raise argparse.ArgumentTypeError(f"bad piece {text!r}; expected A:B or A:B:W")
    return vals


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rieszgrad", description="Sharp gradient bounds for Riesz potentials."
    )
    parser.add_argument("--threads", type=int, default=None,
                        help=f"numba thread count (default: ${_backend.THREADS_ENV})")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("human", "json", "csv"), default="human")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[fmt], help="evaluate N_alpha(u, v) and the gradient bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--u", type=float, required=True)
    p.add_argument("--v", type=float, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("eval", parents=[fmt], help="functionals of a density file and the bound slack")
    p.add_argument("file")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--method", choices=("analytic", "quadrature", "montecarlo"), default="analytic")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9, help="relative slack tolerance")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table", parents=[fmt], help="tabulate a shape or reduced function")
    p.add_argument("--kind", choices=("M", "Phi", "psi", "f", "h"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--min", type=float, default=None)
    p.add_argument("--max", type=float, required=True)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--adaptive", action="store_true", help="certified adaptive sampling instead of a fixed step")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", parents=[fmt], help="run a verification suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="also write the JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("moments", parents=[fmt], help="moments and critical inequalities of a step density")
    p.add_argument("--piece", type=_piece, action="append", required=True, metavar="A:B[:W]")
    p.add_argument("--lebesgue", action="store_true", help="print moments in plain dx instead of dx/2")
    p.set_defaults(func=cmd_moments)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    _backend.set_threads(args.threads)
    needs_range = args.command == "bound" or (args.command == "table" and args.kind == "psi")
    if needs_range and not 0.0 < args.alpha <= 2.0:
        print("error: alpha must lie in (0,2]", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, out)
    except UnknownSuite as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except DensityFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (RangeError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RieszError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def run():  # console-script entry point
    sys.exit(main())


if __name__ == "__main__":
    run()
