"""Command line front end.

Every subcommand reads a fixture file, runs one query or a verification
pass, and prints canonical text (or JSON with --json).  Exit codes: 0 when
everything passes, 1 when some check verdict fails, 2 for usage, parse and
domain errors, 3 when an internal invariant breaks.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (DomainError, EnvelopeError, FixtureError,
                     InternalInvariantError)
from .fixtures import load_fixture
from .checks import (CHECK_IDS, DEFAULT_SWEEPS, eval_command, parse_order,
                     run_checks)

QUERY_HELP = {
    "gb": ("reduced basis of an ideal", ["ideal"]),
    "components": ("minimal primes of a scheme", ["scheme"]),
    "fund": ("fundamental cycle of a scheme", ["scheme"]),
    "length": ("local length at a minimal prime", ["scheme", "prime"]),
    "div": ("divisor of a declared function", ["scheme", "mero"]),
    "glue": ("glue a declared local datum", ["datum"]),
    "pullback": ("pull a cycle back along a map", ["map", "cycle"]),
}


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="cycalc",
        description="exact cycle arithmetic on affine schemes")
    sub = top.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="print JSON instead of text")
    common.add_argument("--stable", action="store_true",
                        help="omit timing data for byte-stable output")
    common.add_argument("--trace", action="store_true",
                        help="print intermediate values where supported")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized sweeps")
    common.add_argument("--budget", type=int, default=DEFAULT_SWEEPS,
                        help="randomized sweep count per target")

    for name, (blurb, metavars) in QUERY_HELP.items():
        p = sub.add_parser(name, parents=[common], help=blurb)
        p.add_argument("fixture", help="fixture file")
        for mv in metavars:
            p.add_argument(mv, help=f"{mv} name in the fixture")
        if name == "gb":
            p.add_argument("--order", default=None,
                           help="grevlex | lex")

    v = sub.add_parser("verify", parents=[common],
                       help="run the identity checks and expectations")
    v.add_argument("fixtures", nargs="+", help="fixture files")
    v.add_argument("--check", default="all",
                   help="comma-separated check ids (default: all)")
    v.add_argument("--report-dir", default=None,
                   help="write report.csv and charts into this directory")
    return top


def run_query(args) -> int:
    fx = load_fixture(args.fixture)
    argv = [args.command] + [getattr(args, mv)
                             for mv in QUERY_HELP[args.command][1]]
    order = None
    if getattr(args, "order", None):
        order = parse_order(args.order)
    out = eval_command(fx, argv, order=order, trace=args.trace)
    if args.json:
        print(json.dumps({"command": argv, "result": out},
                         indent=2, sort_keys=True))
    else:
        print(out)
    return 0


def run_verify(args) -> int:
    if args.check == "all":
        selector = "all"
    else:
        selector = [c.strip() for c in args.check.split(",") if c.strip()]
        unknown = set(selector) - set(CHECK_IDS) - {"expect"}
        if unknown:
            raise DomainError(f"unknown check ids: {sorted(unknown)}")
    reports = []
    for path in args.fixtures:
        fx = load_fixture(path)
        reports.append(run_checks(fx, selector=selector, seed=args.seed,
                                  sweeps=args.budget))
    if args.report_dir:
        from .report import write_report
        write_report(reports, args.report_dir, stable=args.stable)
    total = sum(len(r.records) for r in reports)
    passed = sum(r.counts()[0] for r in reports)
    if args.json:
        out = {"fixtures": [r.to_json_dict(stable=args.stable)
                            for r in reports],
               "summary": {"total": total, "pass": passed,
                           "fail": total - passed}}
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        blocks = [r.render_text(stable=args.stable) for r in reports]
        sys.stdout.write("\n".join(blocks))
        if len(reports) > 1:
            sys.stdout.write(f"\noverall: {total} checks, {passed} pass, "
                             f"{total - passed} fail\n")
    return 0 if passed == total else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return run_verify(args)
        return run_query(args)
    except FixtureError as exc:
        print(f"cycalc: fixture error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, EnvelopeError) as exc:
        print(f"cycalc: error: {exc}", file=sys.stderr)
        return 2
    except InternalInvariantError as exc:
        print(f"cycalc: internal invariant violated: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"cycalc: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
