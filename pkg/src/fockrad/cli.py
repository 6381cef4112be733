"""Command-line interface: ``fockrad gamma | verify | approx``.

Exit codes: 0 success, 1 a checked claim failed, 2 invalid input
(symbol or target document, bad argument), 3 quadrature accuracy
failure, 4 infeasible approximation configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .approx import WINDOWS, PipelineConfig, approximate_sequence
from .eigenvalues import gamma, gamma_closed_spec
from .errors import AccuracyError, DomainError, InfeasibleError, SpecError
from .oscillation import NAMED_RULES, TargetSequence, gamma_target, named_target
from .symbols import dump_symbol, load_symbol
from .verify import SUITES, dump_report, run_verification

EXIT_OK, EXIT_CLAIM, EXIT_SPEC, EXIT_ACCURACY, EXIT_INFEASIBLE = 0, 1, 2, 3, 4


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_gamma(args) -> int:
    spec = load_symbol(args.symbol)
    if args.max_n < 0:
        raise DomainError("--max-n must be >= 0")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if args.closed_form:
        w.writerow(["n", "re", "im"])
        for n in range(args.max_n + 1):
            v = gamma_closed_spec(spec, n)
            w.writerow([n, repr(v.real), repr(v.imag)])
    else:
        w.writerow(["n", "re", "im", "err"])
        for n in range(args.max_n + 1):
            v, e = gamma(spec, n, tol=args.tol)
            w.writerow([n, repr(v.real), repr(v.imag), repr(float(e))])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verification(args.suite, args.max_n)
    _emit(dump_report(report), args.report)
    if not report["all_pass"]:
        first = report["first_counterexample"]
        print(f"claim failed: [{first['suite']}] {first['claim']} at {first['at']}", file=sys.stderr)
        return EXIT_CLAIM
    return EXIT_OK


def read_target_csv(path) -> TargetSequence:
    """A target from a CSV with header n,re,im and rows n = 0, 1, 2, ..."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise SpecError("target", "no rows")
    missing = {"n", "re", "im"} - set(rows[0])
    if missing:
        raise SpecError(f"target.{sorted(missing)[0]}", "missing column")
    vals = []
    for i, row in enumerate(rows):
        try:
            n = int(row["n"])
        except ValueError:
            raise SpecError(f"target.row[{i}].n", "expected an integer") from None
        if n != i:
            raise SpecError(f"target.row[{i}].n", f"expected n = {i}")
        try:
            vals.append(complex(float(row["re"]), float(row["im"])))
        except (TypeError, ValueError):
            raise SpecError(f"target.row[{i}]", "re and im must be numbers") from None
    arr = np.array(vals)
    if not np.all(np.isfinite(arr)):
        raise SpecError("target", "values must be finite")
    return TargetSequence(arr, None, Path(path).name)


def resolve_target(name: str, N: int) -> TargetSequence:
    if name.startswith("gamma-of:"):
        return gamma_target(load_symbol(name.split(":", 1)[1]), N)
    if name in NAMED_RULES:
        return named_target(name, N)
    if Path(name).is_file():
        return read_target_csv(name)
    raise SpecError("target", f"{name!r} is neither a file nor one of "
                              f"{sorted(NAMED_RULES) + ['gamma-of:<spec-file>']}")


def cmd_approx(args) -> int:
    config = replace(PipelineConfig(), bandwidth=args.bandwidth, n_check=args.check_to,
                     window=args.window, step=args.step)
    target = resolve_target(args.target, args.check_to)
    symbol, report = approximate_sequence(target, args.eps, config)
    if args.out_symbol:
        Path(args.out_symbol).write_text(dump_symbol(symbol) + "\n")
    _emit(json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n", args.report)
    return EXIT_OK if report.feasible else EXIT_CLAIM


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fockrad", description="Eigenvalues of radial Toeplitz "
                                "operators on the Fock space, checks and approximation.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gamma", help="eigenvalue sequence of a symbol as CSV")
    g.add_argument("--symbol", required=True, help="JSON symbol document")
    g.add_argument("--max-n", type=int, required=True)
    g.add_argument("--closed-form", action="store_true",
                   help="use closed forms (no err column)")
    g.add_argument("--tol", type=float, default=1e-6, help="relative accuracy demanded")
    g.add_argument("--out", help="CSV path (default stdout)")
    g.set_defaults(func=cmd_gamma)

    v = sub.add_parser("verify", help="run the numerical claim suites")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    v.add_argument("--max-n", type=int, default=None, help="override each suite's range")
    v.add_argument("--report", help="JSON report path (default stdout)")
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("approx", help="synthesize a symbol whose eigenvalues fit a target")
    a.add_argument("--target", required=True,
                   help="CSV (n,re,im), a named target or gamma-of:<spec-file>")
    a.add_argument("--bandwidth", type=float, default=8.0)
    a.add_argument("--check-to", type=int, default=5000)
    a.add_argument("--eps", type=float, default=None)
    a.add_argument("--window", choices=WINDOWS, default="trapezoid")
    a.add_argument("--step", type=float, default=0.05)
    a.add_argument("--out-symbol", help="path for the synthesized symbol (JSON)")
    a.add_argument("--report", help="path for the report (default stdout)")
    a.set_defaults(func=cmd_approx)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, DomainError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_SPEC
    except AccuracyError as e:
        print(f"accuracy failure: {e}", file=sys.stderr)
        return EXIT_ACCURACY
    except InfeasibleError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
