"""Command-line front end.

Exit codes: 0 success, 1 a verification or experiment failed, 2 usage error.
Results go to stdout as CSV (default) or JSON; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from typing import Sequence

from .counting import (
    CountQuery,
    SieveConfigError,
    count_naive,
    count_sieve,
    count_squarefree_mobius,
    make_report,
)
from .density import SIX_OVER_PI2, ConstraintError, PrimeConstraint, density
from .experiments import (
    DEFAULT_X_LIST,
    EXTENDED_X_LIST,
    ReportError,
    emit_report,
    run_bertram,
    run_example2,
    run_gegenbauer,
    run_jameson,
)
from .primes import SEGMENT_SIZE, ResidueClass
from .products import TruncationCapError, partial_product, truncation_for_epsilon
from .verify import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    if not text:
        return []
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _residue_class(text: str) -> ResidueClass:
    parts = _int_list(text)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected m,r, got {text!r}")
    m, r = parts
    try:
        return ResidueClass(m, r)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _constraint(args) -> PrimeConstraint:
    if args.p_class is not None and args.p:
        raise UsageError("--p and --p-class are mutually exclusive")
    P = args.p_class if args.p_class is not None else args.p
    return PrimeConstraint(args.t, P)


def _write(rows: list[dict], fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
        return
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    sys.stdout.write(buf.getvalue())


def _num(v: float, fmt: str):
    return v if fmt == "json" else f"{v:.12g}"


def _frac(f: Fraction | None) -> str:
    return "" if f is None else f"{f.numerator}/{f.denominator}"


def _setstr(values) -> str:
    return ",".join(map(str, sorted(values)))


# --------------------------------------------------------------------------


def cmd_density(args) -> int:
    c = _constraint(args)
    fmt = args.format
    if not c.is_class:
        d = density(c)
        _write([{
            "T": _setstr(c.T),
            "P": _setstr(c.P),
            "factor": _frac(d.factor),
            "factor_decimal": _num(float(d.factor), fmt),
            "value": _num(d.value, fmt),
            "among_squarefree": _frac(d.among_squarefree),
        }], fmt)
        return EXIT_OK
    if not c.P.is_coprime:
        raise ConstraintError(f"density over the class {c.P} needs gcd(r, m) = 1")
    # Density is 0; report the partial-product envelope at each decade.
    trace = partial_product(c.P, args.limit)
    t_part = math.prod(Fraction(1, 1 + t) for t in c.T) if c.T else Fraction(1)
    rows, k, cutoff = [], 0, 10
    entries = trace.entries
    while True:
        M = min(cutoff, args.limit)
        while k < len(entries) and entries[k].prime <= M:
            k += 1
        log_partial = entries[k - 1].log_partial if k else 0.0
        rows.append({
            "T": _setstr(c.T),
            "P": f"{c.P.residue} mod {c.P.modulus}",
            "M": M,
            "factors": k,
            "partial_product": _num(math.exp(log_partial), fmt),
            "bound": _num(SIX_OVER_PI2 * float(t_part) * math.exp(log_partial), fmt),
            "density": 0,
        })
        if M >= args.limit:
            break
        cutoff *= 10
    _write(rows, fmt)
    return EXIT_OK


def cmd_count(args) -> int:
    if args.x < 0:
        raise UsageError(f"--x must be >= 0, got {args.x}")
    c = _constraint(args)
    q = CountQuery(args.x, c)
    if args.method == "naive":
        n = count_naive(q)
    elif args.method == "mobius":
        if c.T or c.P:
            raise UsageError("--method mobius counts all square-free numbers; drop --t/--p")
        n = count_squarefree_mobius(args.x)
    else:
        n = count_sieve(q, workers=args.threads, segment_size=args.segment_size)
    rep = make_report(q, n)
    fmt = args.format
    _write([{
        "x": args.x,
        "T": _setstr(c.T),
        "P": f"{c.P.residue} mod {c.P.modulus}" if c.is_class else _setstr(c.P),
        "method": args.method,
        "count": n,
        "ratio": _num(rep.ratio, fmt),
        "predicted": _num(rep.predicted, fmt),
        "deviation": _num(rep.deviation, fmt),
        "predicted_is_bound": rep.predicted_is_bound,
    }], fmt)
    return EXIT_OK


def cmd_product(args) -> int:
    if (args.cls is None) == (args.primes is None):
        raise UsageError("give exactly one of --class or --primes")
    selector = args.cls if args.cls is not None else args.primes
    fmt = args.format
    if args.epsilon is not None:
        if args.cls is None:
            raise UsageError("--epsilon needs --class")
        M, bound = truncation_for_epsilon(selector, args.epsilon, cap=args.cap)
        _write([{"epsilon": _num(args.epsilon, fmt), "M": M, "bound": _num(bound, fmt)}], fmt)
        return EXIT_OK
    if args.limit is None:
        raise UsageError("give --limit or --epsilon")
    trace = partial_product(selector, args.limit)
    rows = [{
        "k": k,
        "prime": e.prime,
        "partial": _frac(e.partial),
        "partial_decimal": _num(math.exp(e.log_partial), fmt),
        "log_partial": _num(e.log_partial, fmt),
    } for k, e in enumerate(trace.entries, 1)]
    if not rows:
        rows = [{"k": 0, "prime": "", "partial": "1/1", "partial_decimal": _num(1.0, fmt),
                 "log_partial": _num(0.0, fmt)}]
    _write(rows, fmt)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        checks = run_suite(args.suite)
    except KeyError:
        raise UsageError(f"unknown suite {args.suite!r}")
    _write([{"suite": c.suite, "check": c.name, "status": "pass" if c.ok else "fail",
             "detail": c.detail} for c in checks], args.format)
    failed = [c for c in checks if not c.ok]
    if failed:
        print(f"{len(failed)} of {len(checks)} checks failed", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_sweep(args) -> int:
    xs = args.x if args.x else list(DEFAULT_X_LIST)
    if args.extended:
        xs = sorted(set(xs) | set(EXTENDED_X_LIST))
    kw = {"workers": args.threads}
    name = args.experiment
    if name == "gegenbauer":
        results = [run_gegenbauer(xs, **kw)]
    elif name == "jameson":
        results = list(run_jameson(xs, **kw))
    elif name == "example2":
        results = [run_example2(xs, **kw)]
    elif name == "bertram":
        results = [run_bertram(args.m, args.r, xs, **kw)]
    else:
        raise UsageError(f"unknown experiment {name!r}")
    emit_report(results, args.format, args.output)
    return EXIT_OK if all(r.verdict for r in results) else EXIT_FAIL


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="counting worker processes (default: all processors)")
    common.add_argument("--segment-size", type=int, default=SEGMENT_SIZE)

    constraint = argparse.ArgumentParser(add_help=False)
    constraint.add_argument("--t", type=_int_list, default=[], help="mandatory primes, e.g. 2,3,5")
    constraint.add_argument("--p", type=_int_list, default=[], help="forbidden primes")
    constraint.add_argument("--p-class", type=_residue_class, default=None, metavar="M,R",
                            help="forbid every prime congruent to R mod M")

    parser = argparse.ArgumentParser(
        prog="sqfdensity",
        description="Natural density of square-free numbers with prime-divisor constraints.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", parents=[common, constraint], help="exact density")
    p.add_argument("--limit", type=int, default=10**6,
                   help="largest cutoff for the residue-class evidence trail")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("count", parents=[common, constraint], help="count A(T,P)[x]")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--method", choices=("naive", "sieve", "mobius"), default="sieve")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("product", parents=[common], help="partial products of p/(1+p)")
    p.add_argument("--class", dest="cls", type=_residue_class, default=None, metavar="M,R")
    p.add_argument("--primes", type=_int_list, default=None)
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--cap", type=int, default=10**9)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("verify", parents=[common], help="run identity suites")
    p.add_argument("--suite", default="identities",
                   help="identities, oracle, bijection, partition, telescoping, divisor-sum")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common], help="run an experiment sweep")
    p.add_argument("--experiment", required=True)
    p.add_argument("--x", type=_int_list, default=None, help="comma-separated x values")
    p.add_argument("--extended", action="store_true", help="add the 1e8 and 1e9 tier")
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except (UsageError, ConstraintError, SieveConfigError, ValueError, TypeError) as exc:
        print(f"sqfdensity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TruncationCapError, ReportError) as exc:
        print(f"sqfdensity: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
