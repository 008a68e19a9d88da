"""Command line interface.

Exit codes: 0 every claim passes, 2 some claim fails or the construction did
not stabilize, 3 an instance violates a hypothesis, 4 an instance cannot be
parsed. Diagnostics go to stderr as one line each.
"""
import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from .cones import DEFAULT_TOL
from .engine import parse_selection, run_construction, verify
from .exceptions import ConeError, HypothesisError, InstanceError
from .instances import dump_instance, gen_instance, parse_instance
from .minimality import (
    MinimalityMode,
    eps_upper_sublevel,
    gauge_lower_sector,
    is_eps_minimal,
    lower_sublevel,
    min_eps,
)
from .principles import run_borwein_preiss, run_ekeland
from .report import VerificationReport, decimal_str, emit_report

EXIT_OK, EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_PARSE = 0, 2, 3, 4


def _diag(kind, message, invariant=None):
    tag = f" [{invariant}]" if invariant else ""
    return f"vecvp: {kind}{tag}: {' '.join(str(message).split())}"


def _finish(p, run_trace, report, fmt, extra=None):
    if report is None:
        text = emit_report(p, run_trace, VerificationReport(), fmt, extra)
        return text, _diag("incomplete", "horizon exhausted before S_i became a singleton"), EXIT_FAIL
    text = emit_report(p, run_trace, report, fmt, extra)
    if report.passed:
        return text, "", EXIT_OK
    failed = ",".join(c.id for c in report.failures())
    return text, _diag("claims-failed", failed), EXIT_FAIL


def _lam(args, doc):
    if args.lam is not None:
        return args.lam
    return float(doc.get("corollary", {}).get("lam", 1.0))


def _exponent(args, doc):
    if args.p is not None:
        return args.p
    return float(doc.get("corollary", {}).get("p", 1.0))


def _corollary_section(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return doc if isinstance(doc, dict) else {}
    except (OSError, ValueError):
        return {}


def process_one(command, path, opts):
    """Run one subcommand on one instance file; returns ``(stdout, stderr, code)``."""
    args = argparse.Namespace(**opts)
    try:
        validate = command in ("check", "run")
        p = parse_instance(path, validate=validate, assume_hypotheses=args.assume_hypotheses)
        if command == "check":
            n = "inf" if p.N is None else p.N
            return f"ok {p.name}: n={p.n} m={p.m} N={n}\n", "", EXIT_OK
        if command == "minimality":
            return _minimality_text(p, args), "", EXIT_OK
        if command == "run":
            t = run_construction(p, args.horizon, args.tol, args.selection, args.assume_hypotheses)
            rep = verify(p, t, args.tol) if t.complete else None
            return _finish(p, t, rep, args.format)
        doc = _corollary_section(path)
        if command == "ekeland":
            lam = _lam(args, doc)
            r = run_ekeland(p.space, p.f, p.cone, p.cbar, p.eps, lam, p.x0, args.tol,
                            args.horizon, args.selection, args.assume_hypotheses, p.name)
            extra = {"corollary": {"kind": "ekeland", "scale_lambda": lam}}
        else:
            lam, pe = _lam(args, doc), _exponent(args, doc)
            r = run_borwein_preiss(p.space, p.f, p.cone, p.cbar, p.eps, lam, pe, p.delta_seq,
                                   p.eps_seq, p.x0, args.tol, args.horizon, args.selection,
                                   args.assume_hypotheses, p.name)
            extra = {"corollary": {"kind": "borwein-preiss", "scale_lambda": lam, "p": pe}}
        return _finish(r.problem, r.trace, r.report, args.format, extra)
    except InstanceError as exc:
        return "", _diag("parse-error", f"{path}: {exc}"), EXIT_PARSE
    except HypothesisError as exc:
        return "", _diag("hypothesis-invalid", f"{path}: {exc}", exc.invariant), EXIT_HYPOTHESIS
    except ConeError as exc:
        return "", _diag("hypothesis-invalid", f"{path}: {exc}", "cone"), EXIT_HYPOTHESIS


def _minimality_text(p, args):
    x = p.x0 if args.point is None else args.point
    if not 0 <= x < p.n:
        raise HypothesisError(f"point {x} is not a point index", "point")
    eps = p.eps if args.eps is None else args.eps
    labels = p.space.labels

    def names(ids):
        return "{" + ", ".join(labels[i] for i in ids) + "}"

    lines = [
        f"point {labels[x]} (index {x}), eps = {decimal_str(eps)}",
        f"lower sublevel S<=: {names(lower_sublevel(p.f, p.f[x], p.cone, args.tol))}",
        f"eps upper sublevel S_eps>=: {names(eps_upper_sublevel(p.f, x, eps, p.cone, args.tol))}",
        "gauge sector (scale delta_0): "
        + names(gauge_lower_sector(p.f, x, p.rho, p.cbar, p.cone, p.delta_seq(0), args.tol)),
    ]
    for mode in MinimalityMode:
        kw = {"cbar": p.cbar} if mode is MinimalityMode.DIRECTIONAL else {}
        level = min_eps(p.f, x, p.cone, mode, tol=args.tol, **kw)
        holds = is_eps_minimal(p.f, x, eps, p.cone, mode, tol=args.tol, **kw)
        lines.append(f"{mode.value:12s} min_eps = {decimal_str(level)}  eps-minimal: {'yes' if holds else 'no'}")
    return "\n".join(lines) + "\n"


def _selection(value):
    try:
        parse_selection(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="vecvp",
        description="Vector Borwein-Preiss and Ekeland principles on finite metric spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", action="append", required=True, metavar="FILE",
                        help="instance file (repeatable)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--format", choices=("text", "machine"), default="text")
    common.add_argument("--assume-hypotheses", action="store_true",
                        help="skip the eps-minimality check on x0; estimate (i) becomes informational")
    common.add_argument("--jobs", type=int, default=1, help="process instances in parallel")

    runner = argparse.ArgumentParser(add_help=False)
    runner.add_argument("--horizon", type=int, default=None, help="iteration budget (default 10*n)")
    runner.add_argument("--selection", type=_selection, default="exact",
                        help="exact | approximate:<share>")

    sub.add_parser("check", parents=[common], help="parse and validate instances")
    mp = sub.add_parser("minimality", parents=[common], help="sublevel sets and min_eps in every mode")
    mp.add_argument("--point", type=int, default=None, help="point index (default x0)")
    mp.add_argument("--eps", type=float, default=None, help="eps level (default the instance's)")
    sub.add_parser("run", parents=[common, runner], help="run the construction and verify every claim")
    ek = sub.add_parser("ekeland", parents=[common, runner], help="Ekeland principle (rho=d, N=1)")
    ek.add_argument("--lam", type=float, default=None)
    bp = sub.add_parser("bp", parents=[common, runner], help="Borwein-Preiss principle (rho=|x-y|^p)")
    bp.add_argument("--lam", type=float, default=None)
    bp.add_argument("--p", type=float, default=None)

    gen = sub.add_parser("gen", help="write a seeded random instance")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--n", type=int, default=8)
    gen.add_argument("--m", type=int, default=2)
    gen.add_argument("--cone", choices=("orthant", "random-pointed"), default="orthant")
    gen.add_argument("--gauge", default="metric_power:1",
                     help="metric_power:<p> | norm_power:<p> | matrix")
    gen.add_argument("--N", default="inf", help="positive integer or inf")
    gen.add_argument("--eps-policy", choices=("slack", "tight"), default="slack")
    gen.add_argument("--output", default=None, help="write to this file instead of stdout")
    return parser


def _gen(args):
    N = args.N if args.N == "inf" else int(args.N)
    p = gen_instance(args.seed, args.n, args.m, args.cone, args.gauge, N, args.eps_policy)
    text = dump_instance(p)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.command == "gen":
        try:
            return _gen(args)
        except ValueError as exc:
            print(_diag("bad-arguments", exc), file=sys.stderr)
            return EXIT_PARSE
    opts = {k: v for k, v in vars(args).items() if k not in ("input", "command", "jobs")}
    opts.setdefault("horizon", None)
    opts.setdefault("selection", "exact")
    for key in ("lam", "p", "point", "eps"):
        opts.setdefault(key, None)
    paths = args.input
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(process_one, [args.command] * len(paths), paths,
                                    [opts] * len(paths)))
    else:
        results = [process_one(args.command, path, opts) for path in paths]
    code = EXIT_OK
    for out, err, rc in results:
        if out:
            sys.stdout.write(out)
        if err:
            print(err, file=sys.stderr)
        code = max(code, rc)
    return code


if __name__ == "__main__":
    sys.exit(main())
