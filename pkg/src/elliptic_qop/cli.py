"""Command line interface: verification suites, scalar evaluation, report
format conversion.

    elliptic-qop verify --suite tq --suite theta [--config cfg] [--seed N]
    elliptic-qop eval theta1 0.3+0.2i
    elliptic-qop report --in report.json --out report.md

Exit code 0 iff every executed check passed.
"""

from __future__ import annotations

import argparse
import sys

from .errors import EllipticQopError
from .harness import (SUITE_IDS, eval_expr, load_config, parse_complex,
                      report_from_json, run_suite, write_report)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elliptic-qop",
        description="Verification suites for Q-operators of XYZ-type spin "
                    "chains in infinite-dimensional representations.")
    sub = parser.add_subparsers(dest="command", required=True)

    ver = sub.add_parser("verify", help="run verification suites")
    ver.add_argument("--suite", action="append", choices=SUITE_IDS,
                     help="suite id (repeatable; default: all)")
    ver.add_argument("--config", help="path to a key=value config file")
    ver.add_argument("--seed", type=int, help="override the report seed")
    ver.add_argument("--json", dest="json_out", help="write the JSON report here")
    ver.add_argument("--markdown", dest="md_out", help="write the markdown report here")

    ev = sub.add_parser("eval", help="evaluate one scalar function")
    ev.add_argument("function", help="function id, e.g. theta1, elliptic_gamma")
    ev.add_argument("args", nargs="*", help="complex arguments like 0.3+0.2i")
    ev.add_argument("--config", help="path to a key=value config file")
    ev.add_argument("--oracle", action="store_true",
                    help="doubled-precision oracle path where available")

    rep = sub.add_parser("report", help="convert a JSON report to markdown")
    rep.add_argument("--in", dest="inp", required=True)
    rep.add_argument("--out", dest="out", required=True)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.command == "verify":
            overrides = {}
            if ns.seed is not None:
                overrides["seed"] = str(ns.seed)
            if ns.suite:
                overrides["suites"] = ",".join(ns.suite)
            config = load_config(ns.config, overrides)
            report = run_suite(config)
            for rec in report.records:
                status = "SKIP" if rec.skipped else ("pass" if rec.passed else "FAIL")
                print(f"[{status}] {rec.suite}: {rec.anchor} "
                      f"residual={rec.residual:.3e} tol={rec.tolerance:.0e}")
            print(f"{len(report.records)} checks in {report.wall_time:.1f} s")
            if ns.json_out:
                write_report(report, ns.json_out, "json")
            if ns.md_out:
                write_report(report, ns.md_out, "markdown")
            return 0 if report.all_passed else 1
        if ns.command == "eval":
            config = load_config(ns.config)
            value = eval_expr(ns.function, [parse_complex(a) for a in ns.args],
                              config, oracle=ns.oracle)
            print(f"{value.real:+.15e} {value.imag:+.15e}i")
            return 0
        if ns.command == "report":
            report = report_from_json(ns.inp)
            write_report(report, ns.out, "markdown")
            return 0
    except EllipticQopError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
