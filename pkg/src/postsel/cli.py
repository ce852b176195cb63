"""Command-line entry point: ``postsel <command> ...``.

Exit status: 0 success, 2 negative verdict (infeasible / failed check), 1 error.
"""

from __future__ import annotations

import argparse
import os
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import acceptance
from .boolean import BooleanFunction, builtin, certificate_complexity, mask_to_bits, parse_function
from .counting import CountingParams, strong_count, verifier_conditional_one, weak_count
from .degree import (
    FeasibilityInstance,
    lp_feasible,
    maj_lower_bound,
    rdeg_plus_search,
    symmetric_lower_bound_report,
)
from .errors import PostselError
from .poly import eval_rational, format_rational, parse_polynomial, parse_rational
from .program import conditional_success, exact_distribution, format_program, parse_program, postselected_runs
from .transforms import (
    and_program,
    maj_program,
    one_sided_program,
    or_program,
    program_to_rational,
    rational_to_program,
    zero_error_program,
)

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _default_seed() -> int:
    raw = os.environ.get("POSTSEL_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise PostselError(f"POSTSEL_SEED must be an integer, got {raw!r}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise PostselError(f"cannot read {path}: {exc.strerror}") from None


def _function(args) -> BooleanFunction:
    if getattr(args, "function", None):
        return parse_function(_read(args.function))
    if not args.fn or args.n is None:
        raise PostselError("give --fn NAME --n N or --function FILE")
    return builtin(args.fn, args.n)


def _program(args):
    if args.program:
        return parse_program(_read(args.program))
    if not args.algorithm or args.n is None:
        raise PostselError("give --program FILE or --algorithm NAME --n N")
    name = args.algorithm
    if name == "or":
        return or_program(args.n)
    if name == "and":
        return and_program(args.n)
    if name == "maj":
        return maj_program(args.n)
    f = builtin(args.fn or "or", args.n)
    if name == "zero-error":
        return zero_error_program(f)
    if name == "one-sided":
        return one_sided_program(f, args.b)
    raise PostselError(f"unknown algorithm {name!r}")


def _add_function_args(p):
    p.add_argument("--fn", help="built-in function: or, and, maj, parity, notmid, const0, const1")
    p.add_argument("--n", type=int, help="number of input bits")
    p.add_argument("--function", metavar="FILE", help="function file")


def _add_program_args(p):
    p.add_argument("--program", metavar="FILE", help="program file")
    p.add_argument("--algorithm", choices=["or", "and", "maj", "zero-error", "one-sided"])
    p.add_argument("--fn", help="function for zero-error / one-sided algorithms")
    p.add_argument("--n", type=int)
    p.add_argument("--b", type=int, default=1, help="certified value for one-sided")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_eval(args, out) -> int:
    if args.rational:
        R = parse_rational(_read(args.rational))
        print(f"value={eval_rational(R, args.x)}", file=out)
        return EXIT_OK
    if args.poly:
        P = parse_polynomial(_read(args.poly))
        print(f"value={P(args.x)}", file=out)
        return EXIT_OK
    prog = _program(args)
    d = exact_distribution(prog, args.x)
    print(f"p0={d.p0} p1={d.p1} pbot={d.pbot}", file=out)
    if d.accept:
        print(f"conditional1={d.conditional(1)}", file=out)
    return EXIT_OK


def cmd_simulate(args, out) -> int:
    prog = _program(args)
    seed = _default_seed() if args.seed is None else args.seed
    if args.fn and args.n is not None and args.x is None:
        f = builtin(args.fn, args.n)
        rep = conditional_success(prog, f)
        print(f"worst={rep.worst}", file=out)
        for x in sorted(rep.per_input):
            print(f"x={mask_to_bits(x, prog.n)} success={rep.per_input[x]}", file=out)
        return EXIT_OK if rep.computes(args.eps) else EXIT_NEGATIVE
    if args.x is None:
        raise PostselError("give --x BITS (or --fn/--n for an exact success table)")
    outcomes, attempts = postselected_runs(prog, args.x, args.runs, seed, args.max_attempts)
    counts = Counter(int(o) for o in outcomes)
    exact = exact_distribution(prog, args.x)
    print(f"runs={args.runs} seed={seed} walks={int(attempts.sum())}", file=out)
    print(f"freq1={counts[1] / args.runs:.6f} exact1={exact.conditional(1)}", file=out)
    print(f"freq0={counts[0] / args.runs:.6f} exact0={exact.conditional(0)}", file=out)
    return EXIT_OK


def cmd_convert(args, out) -> int:
    if args.direction == "alg2rat":
        R = program_to_rational(_program(args))
        out.write(format_rational(R))
        return EXIT_OK
    if not args.rational:
        raise PostselError("rat2alg needs --rational FILE")
    R = parse_rational(_read(args.rational))
    r = args.r
    if r is None:
        r = args.eps * (1 - args.eps)
    out.write(format_program(rational_to_program(R, args.k, r)))
    return EXIT_OK


def cmd_certify(args, out) -> int:
    f = _function(args)
    rep = certificate_complexity(f)
    print(f"C0={rep.c0} C1={rep.c1} C={rep.c}", file=out)
    if args.witnesses:
        for x in sorted(rep.witnesses):
            cert = rep.witnesses[x]
            fixed = ",".join(f"{i + 1}={b}" for i, b in cert.assignment) or "-"
            print(f"x={mask_to_bits(x, f.n)} label={cert.label} size={cert.size} assignment={fixed}", file=out)
    return EXIT_OK


def _print_verdict(d, v, args, out):
    print(f"d={d} {'feasible' if v.feasible else 'infeasible'} ({v.method})", file=out)
    if args.trace:
        print(f"  trace: {v.trace}", file=out)


def cmd_search(args, out) -> int:
    f = _function(args)
    sym = False if args.full else None
    if args.d is not None:
        v = lp_feasible(FeasibilityInstance(f, args.d, args.eps), symmetric=sym, method=args.method)
        _print_verdict(args.d, v, args, out)
        if v.feasible and args.witness:
            out.write(format_rational(v.witness))
        return EXIT_OK if v.feasible else EXIT_NEGATIVE
    res = rdeg_plus_search(f, args.eps, args.d_max, symmetric=sym, method=args.method)
    for d, v in res.verdicts.items():
        _print_verdict(d, v, args, out)
    print(f"rdeg+ = {res}", file=out)
    if res.witness is not None and args.witness:
        out.write(format_rational(res.witness))
    return EXIT_OK if res.degree is not None else EXIT_NEGATIVE


def cmd_bounds(args, out) -> int:
    f = _function(args)
    if args.fn == "maj" and f.n % 2 == 0:
        print(f"theorem12: d >= {maj_lower_bound(f.n, args.eps)}", file=out)
    if f.is_symmetric and f.is_total and not f.is_constant():
        rep = symmetric_lower_bound_report(f, args.eps)
        print(f"symmetric: d >= {rep.bound} (gamma={rep.gamma} t={rep.t})", file=out)
        if rep.clean is not None and rep.clean != rep.quadratic:
            print(f"  quadratic form gives d >= {rep.quadratic}", file=out)
        print(f"  note: {rep.note}", file=out)
    elif not f.is_symmetric:
        raise PostselError("closed-form bounds need a symmetric function")
    return EXIT_OK


def _count_input(text: str) -> str:
    if set(text) <= {"0", "1"} and text:
        return text
    return "".join(ch for ch in _read(text) if ch in "01")


def cmd_count(args, out) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    if args.exact_verifier is not None:
        if args.n is None and not args.input:
            raise PostselError("give --n or --input with --exact-verifier")
        n = args.n if args.n is not None else len(_count_input(args.input))
        A = args.exact_verifier
        if not 1 <= A <= n:
            raise PostselError(f"A must lie in 1..{n}")
        for w in range(n + 1):
            print(f"|x|={w} conditional1={verifier_conditional_one(A, n, args.k, w)}", file=out)
        return EXIT_OK
    if not args.input:
        raise PostselError("count needs --input")
    x = _count_input(args.input)
    n = len(x)
    for trial in range(args.trials):
        s = seed + trial
        if args.strong:
            res = strong_count(x, CountingParams(n, args.k, args.eps, args.strong), s)
        else:
            res = weak_count(x, args.eps, s, args.k)
        if args.trials > 1:
            print(f"trial {trial} seed={s}", file=out)
        print(res.transcript(), file=out)
    return EXIT_OK


def cmd_reproduce(args, out) -> int:
    ids = list(acceptance.CRITERIA) if args.criterion == "all" else [int(args.criterion)]
    ok = True
    for cid in ids:
        res = acceptance.run(cid)
        print(res.line(), file=out)
        out.flush()
        ok &= res.passed
    return EXIT_OK if ok else EXIT_NEGATIVE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="postsel", description="Post-selected query algorithms and positive rational approximation.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="exact outcome distribution of a program, or value of a polynomial / rational function")
    _add_program_args(p)
    p.add_argument("--rational", metavar="FILE")
    p.add_argument("--poly", metavar="FILE")
    p.add_argument("--x", required=True, help="input bits, index 1 leftmost")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("simulate", help="sample post-selected runs, or tabulate exact success against a function")
    _add_program_args(p)
    p.add_argument("--x")
    p.add_argument("--runs", type=int, default=10000)
    p.add_argument("--seed", type=int)
    p.add_argument("--eps", type=_fraction, default=Fraction(1, 3))
    p.add_argument("--max-attempts", type=int, default=10**6)
    p.set_defaults(run=cmd_simulate)

    p = sub.add_parser("convert", help="alg2rat: program to rational function; rat2alg: the reverse")
    p.add_argument("direction", choices=["alg2rat", "rat2alg"])
    _add_program_args(p)
    p.add_argument("--rational", metavar="FILE")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--r", type=_fraction)
    p.add_argument("--eps", type=_fraction, default=Fraction(1, 3))
    p.set_defaults(run=cmd_convert)

    p = sub.add_parser("certify", help="certificate complexity")
    _add_function_args(p)
    p.add_argument("--witnesses", action="store_true")
    p.set_defaults(run=cmd_certify)

    p = sub.add_parser("search", help="minimal degree of a positive rational approximation (exact LP)")
    _add_function_args(p)
    p.add_argument("--eps", type=_fraction, default=Fraction(1, 3))
    p.add_argument("--d", type=int, help="decide a single degree")
    p.add_argument("--d-max", type=int)
    p.add_argument("--full", action="store_true", help="use the full LP even for symmetric functions")
    p.add_argument("--method", choices=["auto", "exact"], default="auto")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--witness", action="store_true", help="print the witness P/Q")
    p.set_defaults(run=cmd_search)

    p = sub.add_parser("bounds", help="closed-form lower bounds for symmetric functions")
    _add_function_args(p)
    p.add_argument("--eps", type=_fraction, default=Fraction(1, 3))
    p.set_defaults(run=cmd_bounds)

    p = sub.add_parser("count", help="approximate counting of |x|")
    p.add_argument("--input", help="bit string or file containing one")
    p.add_argument("--eps", type=_fraction, default=Fraction(1, 3))
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--strong", type=int, metavar="P")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--n", type=int)
    p.add_argument("--exact-verifier", type=int, metavar="A")
    p.set_defaults(run=cmd_count)

    p = sub.add_parser("reproduce", help="run an acceptance check (1..11 or all)")
    p.add_argument("criterion")
    p.set_defaults(run=cmd_reproduce)
    return ap


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.run(args, out)
    except (PostselError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
