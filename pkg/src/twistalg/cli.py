"""Command-line entry point: ``twistalg run`` and ``twistalg fmt``."""

from __future__ import annotations

import argparse
import sys

from .errors import DslError


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twistalg", description="Run check scripts on idealizations and twisted subrings.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="execute a script and print a report")
    r.add_argument("script", help="script file, or - for stdin")
    r.add_argument("--json", action="store_true", help="machine-readable report")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--precision", type=int, help="override the script's precision")
    r.add_argument("--strict", action="store_true", help="exit 2 when a verdict is indeterminate")
    r.add_argument("--max-exponent", type=int, help="largest c-power checked by iterated checks")
    r.add_argument("--y-degree", type=int, help="y-degree bound of the finite models")
    r.add_argument("--timings", action=argparse.BooleanOptionalAction, default=None,
                   help="include per-command times (default: on for text, off for JSON)")

    f = sub.add_parser("fmt", help="parse a script and print it in canonical form")
    f.add_argument("script")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    from .dsl import RunOptions, parse, pretty, run
    try:
        ast = parse(_read(args.script))
    except DslError as exc:
        print(f"{args.script}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"twistalg: {exc}", file=sys.stderr)
        return 1
    if args.command == "fmt":
        sys.stdout.write(pretty(ast))
        return 0
    for flag in ("precision", "max_exponent", "y_degree"):
        v = getattr(args, flag)
        if v is not None and v < 1:
            print(f"twistalg: --{flag.replace('_', '-')} must be positive", file=sys.stderr)
            return 1
    opts = RunOptions(seed=args.seed, precision=args.precision, strict=args.strict,
                      max_exponent=args.max_exponent, y_degree=args.y_degree)
    report = run(ast, opts, args.script)
    if args.json:
        sys.stdout.write(report.to_json(timings=bool(args.timings)))
    else:
        sys.stdout.write(report.to_text(timings=args.timings is not False))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
