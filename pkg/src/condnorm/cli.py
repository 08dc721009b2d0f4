"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 fuel exhausted,
3 counterexample found.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import kernels
from .expr import ExprSyntaxError, ExprUniverse, check_symbol, parse, to_text, universe_count
from .measures import MEASURES, m, tested_if_count
from .normalize import norm, norm1, norm2, trace_to_json
from .semantics import falsifying_assignment, format_assignment
from .verify import HARD_CAP, SUITES, ConfigError, VerifySuiteConfig, report_json, run_suites

EXIT_OK, EXIT_USAGE, EXIT_FUEL, EXIT_COUNTEREXAMPLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_flags(defaults: bool) -> argparse.ArgumentParser:
    # Shared by the top-level parser and every subcommand, so the flags work
    # on either side of the command name.
    p = argparse.ArgumentParser(add_help=False)
    default = None if defaults else argparse.SUPPRESS
    p.add_argument("--quiet", action="store_true", default=False if defaults else argparse.SUPPRESS,
                   help="suppress informational output")
    p.add_argument("--json", metavar="FILE", default=default,
                   help="also write a machine-readable report to FILE")
    return p


def _alphabet(text: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    try:
        for n in names:
            check_symbol(n)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    if not names:
        raise argparse.ArgumentTypeError("alphabet must be nonempty")
    return names


def _read_expr(args) -> str:
    if args.file is not None and args.expr is not None:
        raise UsageError("give an expression or --file, not both")
    source = args.file if args.file is not None else args.expr
    if source is None:
        raise UsageError("an expression is required (inline, --file PATH, or '-' for stdin)")
    if source == "-":
        return sys.stdin.read()
    if args.file is not None:
        try:
            with open(args.file) as fh:
                return fh.read()
        except OSError as exc:
            raise UsageError(str(exc)) from exc
    return source


def _add_expr_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("expr", nargs="?", help="expression text, or '-' to read stdin")
    p.add_argument("--file", help="read the expression from FILE ('-' for stdin)")


def _write_json(path: Optional[str], payload) -> None:
    if path:
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def _say(args, *parts) -> None:
    if not args.quiet:
        print(*parts)


# -- commands -------------------------------------------------------------------


def cmd_norm(args) -> int:
    e = parse(_read_expr(args))
    if args.algo == "norm1":
        if args.trace:
            raise UsageError("--trace is only available for norm and norm2")
        result = norm1(e)
        print(to_text(result))
        if args.stats:
            print(f"m={m(e)}")
            print(f"resultM={m(result)}")
            print(f"testedIfs={tested_if_count(e)}")
        _write_json(args.json, {"input": to_text(e), "algo": "norm1", "status": "completed",
                                "result": to_text(result)})
        return EXIT_OK

    run = norm if args.algo == "norm" else norm2
    out = run(e, fuel=args.fuel, trace=bool(args.trace))
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(trace_to_json(out.trace, indent=1))
            fh.write("\n")
    if out.completed:
        print(to_text(out.result))
    else:
        print(f"fuel exhausted after {out.call_count} calls", file=sys.stderr)
    if args.stats:
        print(f"callCount={out.call_count}")
        print(f"maxDepth={out.max_depth}")
        print(f"m={m(e)}")
        if out.completed:
            print(f"resultM={m(out.result)}")
        print(f"testedIfs={tested_if_count(e)}")
    _write_json(args.json, {
        "input": to_text(e),
        "algo": args.algo,
        "status": out.status.value,
        "result": to_text(out.result) if out.completed else None,
        "callCount": out.call_count,
        "maxDepth": out.max_depth,
    })
    return EXIT_OK if out.completed else EXIT_FUEL


def cmd_measure(args) -> int:
    e = parse(_read_expr(args))
    which = list(MEASURES) if args.which == "all" else [args.which]
    values = {w: str(MEASURES[w](e)) for w in which}
    if len(which) == 1:
        print(values[which[0]])
    else:
        for w, v in values.items():
            print(f"{w}={v}")
    _write_json(args.json, {"input": to_text(e), **values})
    return EXIT_OK


def cmd_verify(args) -> int:
    suites: list[str] = []
    for item in args.suite or ["all"]:
        for s in item.split(","):
            s = s.strip()
            if s == "all":
                suites.extend(SUITES)
            elif s:
                suites.append(s)
    suites = list(dict.fromkeys(suites))
    try:
        cfg = VerifySuiteConfig(
            max_ifs=args.max_ifs,
            alphabet=args.alphabet,
            suites=tuple(suites),
            fuel_override=args.fuel,
            parallelism=args.parallelism,
            hard_cap=args.hard_cap,
            fold_max_ifs=args.fold_max_ifs,
            random_samples=args.random,
            random_depth=args.random_depth,
            seed=args.seed,
        )
    except ConfigError as exc:
        raise UsageError(str(exc)) from exc
    _say(args, f"universe: max-ifs={cfg.max_ifs} alphabet={','.join(cfg.alphabet)} "
               f"members={cfg.universe().count()} backend={kernels.BACKEND}")
    results = run_suites(cfg)
    for r in results:
        line = (f"{'PASS' if r.passed else 'FAIL'} {r.suite:<16} "
                f"expressions={r.expressions_checked} edges={r.edges_checked}")
        if r.failures:
            line += f" failures={r.failures}"
        print(line)
        if not args.quiet:
            for c in r.counterexamples[:5]:
                print("    counterexample:", json.dumps(c))
    _write_json(args.json, report_json(cfg, results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_COUNTEREXAMPLE


def cmd_enum(args) -> int:
    try:
        u = ExprUniverse(args.max_ifs, args.alphabet)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.count:
        total = sum(universe_count(k, len(u.alphabet)) for k in range(u.max_ifs + 1))
        print(total)
    else:
        write = sys.stdout.write
        for e in u:
            write(to_text(e) + "\n")
    return EXIT_OK


def cmd_taut(args) -> int:
    e = parse(_read_expr(args))
    rho = falsifying_assignment(e)
    if rho is None:
        print("tautology")
    else:
        print(f"falsifiable {format_assignment(rho)}")
    _write_json(args.json, {
        "input": to_text(e),
        "tautology": rho is None,
        "falsifyingAssignment": None if rho is None else {k: int(v) for k, v in rho.items()},
    })
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(defaults=False)
    parser = _Parser(prog="condnorm", description=__doc__.splitlines()[0],
                     parents=[_global_flags(defaults=True)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("norm", parents=[common], help="normalize an expression")
    _add_expr_args(p)
    p.add_argument("--algo", choices=("norm", "norm1", "norm2"), default="norm")
    p.add_argument("--fuel", type=int, help="invocation budget (default: m(e) for norm, 10**6 for norm2)")
    p.add_argument("--trace", metavar="FILE", help="write the JSON call trace to FILE")
    p.add_argument("--stats", action="store_true", help="print call counts and measures")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("measure", parents=[common], help="evaluate a measure function")
    _add_expr_args(p)
    p.add_argument("--which", choices=(*MEASURES, "all"), default="m")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("verify", parents=[common], help="run property suites over a universe")
    p.add_argument("--max-ifs", type=int, default=3)
    p.add_argument("--alphabet", type=_alphabet, default=("a", "b"))
    p.add_argument("--suite", action="append",
                   help=f"suite name, comma list or 'all' (repeatable); one of {', '.join(SUITES)}")
    p.add_argument("--fuel", type=int, help="fuel override for every normalizer run")
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--hard-cap", type=int, default=HARD_CAP, help="largest allowed --max-ifs")
    p.add_argument("--fold-max-ifs", type=int, default=2,
                   help="if-node bound for the fold-lemma operands")
    p.add_argument("--random", type=int, default=0, metavar="N",
                   help="also run N random expressions through the equivalence suite")
    p.add_argument("--random-depth", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enum", parents=[common], help="list a universe of expressions")
    p.add_argument("--max-ifs", type=int, required=True)
    p.add_argument("--alphabet", type=_alphabet, required=True)
    p.add_argument("--count", action="store_true", help="print only the number of members")
    p.set_defaults(func=cmd_enum)

    p = sub.add_parser("taut", parents=[common], help="decide whether an expression is a tautology")
    _add_expr_args(p)
    p.set_defaults(func=cmd_taut)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # argparse usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except ExprSyntaxError as exc:
        print(f"condnorm: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"condnorm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
