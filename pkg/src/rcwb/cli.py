"""Command-line front end.

Exit codes: 0 success, 1 a check or verification failed, 2 usage error.
Machine output uses exact strings ("p/q", decimal big integers); ``--format
text`` adds decimal renderings prefixed with ``~``.
"""

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from ._exact import approx, fmt_q, parse_q
from .ah_system import DiagonalSystemSpec, iterate_and_check
from .certificates import (
    DEFAULT_TERMS,
    DEFAULT_WINDOW,
    RcCertificate,
    fixed_point_relation,
    niu_upper_bound,
    rc_interval,
    rc_lower_certificate,
    verify_certificate,
)
from .exceptions import RcwbError
from .matrix_model import lemma_suite
from .sequences import kappa_interval, rank_recursion_identities, seq_table


class UsageError(Exception):
    pass


def _rational(text):
    try:
        value = parse_q(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("rho must be nonnegative")
    return value


def _positive_float(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _dump(obj):
    return json.dumps(obj, indent=2) + "\n"


def _emit(args, text):
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_seq(args):
    table = seq_table(args.max)
    if args.format == "csv":
        _emit(args, table.to_csv())
    else:
        _emit(args, _dump(table.to_dict()))
    return 0


def _cmd_kappa(args):
    kap = kappa_interval(args.terms)
    if args.format == "text":
        _emit(args, (
            f"terms  {kap.terms}\n"
            f"lower  {fmt_q(kap.lower)}\n"
            f"upper  {fmt_q(kap.upper)}\n"
            f"lower  {approx(kap.lower)} (approximate)\n"
            f"upper  {approx(kap.upper)} (approximate)\n"
            f"width  {approx(kap.width, 20)} (approximate)\n"
        ))
    else:
        _emit(args, _dump(kap.to_dict()))
    return 0


def _cmd_ranks(args):
    reports = [rank_recursion_identities(args.max)]
    if args.max >= 1:
        reports.append(iterate_and_check(args.max))
    ok = all(r.passed for r in reports)
    if args.format == "text":
        lines = [line for r in reports for line in r.lines()]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _dump({"passed": ok, "reports": [r.to_dict() for r in reports]}))
    for r in reports:
        for c in r.failures:
            print(f"FAIL {r.title}: {c.name} {c.detail}", file=sys.stderr)
    return 0 if ok else 1


def _cmd_bounds(args):
    key = args.system.lower()
    out = {"terms": args.terms, "kappa": kappa_interval(args.terms).to_dict()}
    if key in ("paper-a", "paper-b"):
        spec = DiagonalSystemSpec(key)
        interval = rc_interval(key, args.terms)
        out["system"] = key
        out["niu_upper_bound"] = niu_upper_bound(spec, args.terms).to_dict()
        out["rc"] = interval.to_dict()
        if key == "paper-b":
            out["rc_fixed_point"] = fixed_point_relation(interval, 2).to_dict()
    else:
        spec = DiagonalSystemSpec.load(args.system)
        structure = spec.validate()
        if not structure.passed:
            for c in structure.failures:
                print(f"FAIL {c.name} {c.detail}", file=sys.stderr)
            return 1
        out["system"] = "custom"
        out["niu_upper_bound"] = niu_upper_bound(spec, args.terms).to_dict()
    if args.format == "text":
        lines = []
        for key_, value in out.items():
            if isinstance(value, dict) and "lower" in value:
                lo, hi = parse_q(value["lower"]), parse_q(value["upper"])
                lines.append(f"{key_:16s} [{fmt_q(lo)}, {fmt_q(hi)}]")
                lines.append(f"{'':16s} [{approx(lo)}, {approx(hi)}] (approximate)")
            else:
                lines.append(f"{key_:16s} {value}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _dump(out))
    return 0


def _cmd_cert_lower(args):
    cert = rc_lower_certificate(args.system, args.rho, terms=args.terms,
                                window=args.window)
    _emit(args, _dump(cert.to_dict()))
    return 0


def _cmd_cert_verify(args):
    try:
        cert = RcCertificate.from_json(Path(args.certificate).read_text())
    except (OSError, KeyError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read certificate: {exc}")
    report = verify_certificate(cert)
    if args.format == "text":
        _emit(args, "\n".join(report.lines()) + "\n")
    else:
        _emit(args, _dump(report.to_dict()))
    for c in report.failures:
        print(f"FAIL {c.name} {c.detail}", file=sys.stderr)
    return 0 if report.passed else 1


def _cmd_matrix_suite(args):
    report = lemma_suite(seed=args.seed, trials=args.trials, dim_max=args.dim,
                         tol=args.tol)
    _emit(args, _dump(report.to_dict()))
    for name, c in report.counts.items():
        if c["failures"]:
            print(f"FAIL {name}: {c['failures']}/{c['trials']}", file=sys.stderr)
    return 0 if report.passed else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rcwb",
        description="Exact radius-of-comparison certificates and Cuntz-calculus checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--out", help="write output here instead of stdout")
        return p

    p = add("seq", _cmd_seq, "sequence table d, l, r, s, t, u")
    p.add_argument("--max", type=int, default=12, help="last stage (default 12)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("kappa", _cmd_kappa, "certified interval around kappa")
    p.add_argument("--terms", type=int, default=DEFAULT_TERMS)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = add("ranks", _cmd_ranks, "rank identities and projection closed forms")
    p.add_argument("--max", type=int, default=10)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = add("bounds", _cmd_bounds, "rc intervals from certificates and mean dimension")
    p.add_argument("--system", default="paper-a",
                   help="paper-a, paper-b, or a path to a custom system JSON")
    p.add_argument("--terms", type=int, default=DEFAULT_TERMS)
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = add("cert-lower", _cmd_cert_lower, "emit a lower-bound certificate")
    p.add_argument("--system", choices=("paper-a", "paper-b"), required=True)
    p.add_argument("--rho", type=_rational, required=True, help='target as "p/q"')
    p.add_argument("--terms", type=int, default=DEFAULT_TERMS)
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW)

    p = add("cert-verify", _cmd_cert_verify, "replay a certificate")
    p.add_argument("certificate", help="certificate JSON file")
    p.add_argument("--format", choices=("json", "text"), default="json")

    p = add("matrix-suite", _cmd_matrix_suite, "randomized matrix lemma suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dim", type=int, default=16, help="largest matrix dimension")
    p.add_argument("--tol", type=_positive_float, default=1e-9)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("max", "terms", "trials", "window"):
        value = getattr(args, name, None)
        if value is not None and value < (1 if name in ("terms", "trials", "window") else 0):
            parser.error(f"--{name} out of range: {value}")
    if getattr(args, "dim", 2) < 2:
        parser.error("--dim must be at least 2")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rcwb: {exc}", file=sys.stderr)
        return 2
    except RcwbError as exc:
        print(f"rcwb: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"rcwb: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
