"""Command-line front end: ``logmaj gsv|det|check|suite|gen``.

Exit codes: 0 success / property holds / suite clean, 1 property fails or
suite has violations, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from logmaj.generate import KINDS, GenProfile, gen_operator, gen_stepfn
from logmaj.majorize import lambda_curve, log_lambda_at
from logmaj.matalg import BlockOperator, mu_op
from logmaj.stepfn import (
    StepFunction,
    log_submajorizes,
    min_uniform_lambda,
    submajorizes,
    uniform_majorizes,
)
from logmaj.suites import SuiteConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(v: float) -> str:
    """Finite values as round-tripping floats, infinities as ``inf``/``-inf``."""
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(float(v))


def _read_json(path: str) -> dict:
    try:
        text = Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object")
    return data


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None


def _load(path: str) -> BlockOperator | StepFunction:
    data = _read_json(path)
    try:
        if "blocks" in data:
            return BlockOperator.from_dict(data)
        if "pieces" in data:
            return StepFunction.from_dict(data)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    raise UsageError(f"{path}: expected a block operator ('blocks') or step function ('pieces')")


def _as_stepfn(obj: BlockOperator | StepFunction) -> StepFunction:
    return obj if isinstance(obj, StepFunction) else mu_op(obj)


def _floats(text: str, name: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--{name}: expected comma-separated numbers, got {text!r}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_gsv(args) -> int:
    obj = _load(args.input)
    if not isinstance(obj, BlockOperator):
        raise UsageError(f"{args.input}: gsv needs a block operator")
    _write(args.out, json.dumps(mu_op(obj).to_dict()) + "\n")
    return EXIT_OK


def cmd_det(args) -> int:
    obj = _load(args.input)
    if args.t is None:
        if not isinstance(obj, BlockOperator):
            raise UsageError("--t is required for a step function input")
        t = obj.tau_one
    else:
        t = args.t
    if not t > 0:
        raise UsageError(f"--t must be > 0, got {t}")
    lv = log_lambda_at(_as_stepfn(obj), t)
    lam = 0.0 if lv == -math.inf else (math.exp(lv) if lv < 709.0 else math.inf)
    if math.isfinite(lam):
        lam = float(f"{lam:.12g}")
    print(f"lambda {_fmt(lam)}")
    print(f"log_lambda {_fmt(lv)}")
    if args.curve:
        _write(args.curve, lambda_curve(_as_stepfn(obj)).to_csv())
    return EXIT_OK


def cmd_check(args) -> int:
    f = _as_stepfn(_load(args.lhs))
    g = _as_stepfn(_load(args.rhs))
    if args.relation == "submajorize":
        v = submajorizes(f, g, args.tol)
    elif args.relation == "logsub":
        v = log_submajorizes(f, g, args.tol)
    else:
        if not args.lam >= 1:
            raise UsageError(f"--lambda must be >= 1, got {args.lam}")
        v = uniform_majorizes(f, g, args.lam, args.tol)
    print(f"{args.relation} {'holds' if v.holds else 'fails'}")
    print(f"slack {_fmt(v.slack)}")
    print(f"worst_at {v.worst_at}")
    print(f"lhs {_fmt(v.lhs)} rhs {_fmt(v.rhs)}")
    if args.relation == "uniform":
        lam = min_uniform_lambda(f, g, max(args.lam, 64.0), tol=args.tol)
        print(f"min_lambda {'none' if lam is None else f'{lam:.6g}'}")
    return EXIT_OK if v.holds else EXIT_FAIL


def cmd_suite(args) -> int:
    if args.cases < 0:
        raise UsageError("--cases must be >= 0")
    cfg = SuiteConfig(cases=args.cases, master_seed=args.seed, eps_ord=args.tol,
                      shrink=not args.no_shrink)
    try:
        report = run_suite(args.suite, cfg, workers=args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.report:
        _write(args.report, report.to_json())
    if args.csv:
        _write(args.csv, report.to_csv())
    for s in report.laws:
        print(f"{s.id:>4} cases={s.cases} failures={s.failures} "
              f"inconclusive={s.inconclusive} worst_slack={_fmt(s.worst_slack)}")
    n = len(report.violations)
    print(f"{report.suite}: {'clean' if n == 0 else f'{n} violation(s)'}")
    return EXIT_OK if n == 0 else EXIT_FAIL


def cmd_gen(args) -> int:
    lo, hi = _floats(args.range, "range") if args.range else (0.25, 4.0)
    if args.kind == "stepfn":
        prof = GenProfile("stepfn", value_range=(lo, hi), pieces=args.pieces, tail=args.tail)
    else:
        dims = tuple(int(d) for d in _floats(args.dims, "dims"))
        weights = _floats(args.weights, "weights") if args.weights else (1.0,) * len(dims)
        prof = GenProfile(args.kind, dims, weights, (lo, hi))
    try:
        prof.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    obj = gen_stepfn(args.seed, prof) if args.kind == "stepfn" else gen_operator(args.seed, prof)
    _write(args.out, json.dumps(obj.to_dict()) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="logmaj", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gsv", help="singular value function of a block operator")
    s.add_argument("--input", required=True)
    s.add_argument("--out", help="output path (default: stdout)")
    s.set_defaults(func=cmd_gsv)

    s = sub.add_parser("det", help="determinant function Lambda(t) and its log")
    s.add_argument("--input", required=True)
    s.add_argument("--t", type=float, help="default: tau(1), the Fuglede-Kadison determinant")
    s.add_argument("--curve", help="also write the log Lambda curve as CSV")
    s.set_defaults(func=cmd_det)

    s = sub.add_parser("check", help="decide an order between two inputs")
    s.add_argument("relation", choices=("submajorize", "logsub", "uniform"))
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--lambda", dest="lam", type=float, default=2.0)
    s.add_argument("--tol", type=float, default=SuiteConfig.eps_ord)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("suite", help="run the law catalog")
    ss = s.add_subparsers(dest="action", required=True)
    r = ss.add_parser("run")
    r.add_argument("--suite", default="all", help="all, S1..S7 or a law id such as L7")
    r.add_argument("--cases", type=int, default=SuiteConfig.cases)
    r.add_argument("--seed", type=int, default=SuiteConfig.master_seed)
    r.add_argument("--tol", type=float, default=SuiteConfig.eps_ord)
    r.add_argument("--report", help="write the JSON report here")
    r.add_argument("--csv", help="write per-case tightest comparisons as CSV")
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--no-shrink", action="store_true")
    r.set_defaults(func=cmd_suite)

    s = sub.add_parser("gen", help="generate a random input")
    s.add_argument("--kind", required=True, choices=KINDS)
    s.add_argument("--dims", default="3")
    s.add_argument("--weights")
    s.add_argument("--range", help="lo,hi value range")
    s.add_argument("--pieces", type=int, default=4)
    s.add_argument("--tail", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="output path (default: stdout)")
    s.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"logmaj {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
