"""Command-line entry point.

Runs the named verification checks, prints one verdict line per report,
writes the delimited output when asked, and optionally renders figures next
to it.  Exit status is 0 exactly when every report passes.
"""
from __future__ import annotations

import argparse
import sys

from .errors import LefbenchError
from .reports import emit
from .suite import CHECKS, DEFAULT_CUTOFF, DEFAULT_SEED, run_suite


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lefbench",
        description="Numerical verification workbench for fixed-point "
                    "densities and their global pairing identities on flat "
                    "tori.")
    p.add_argument("--suite", action="store_true",
                   help="run every registered check")
    p.add_argument("--check", action="append", metavar="NAME",
                   help="run one named check (repeatable); known names: %s"
                        % ", ".join(sorted(CHECKS)))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, metavar="U64",
                   help="seed for all randomized inputs (default %d)" % DEFAULT_SEED)
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF, metavar="R",
                   help="mode cutoff for truncated spectral sums (default %d)"
                        % DEFAULT_CUTOFF)
    p.add_argument("--config", metavar="PATH",
                   help="JSON run configuration ({\"checks\", \"seed\", \"cutoff\"})")
    p.add_argument("--out", metavar="PATH",
                   help="write the report table to this file")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="report serialization (default json)")
    p.add_argument("--figures", metavar="DIR",
                   help="render PNG figures into this directory")
    p.add_argument("--strip-timing", action="store_true",
                   help="zero the seconds field for byte-stable output")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    checks = None
    if args.check:
        checks = []
        for name in args.check:
            if name not in CHECKS:
                print("unknown check %r (known: %s)"
                      % (name, ", ".join(sorted(CHECKS))), file=sys.stderr)
                return 2
            checks.append(name)
    elif not args.suite and args.config is None:
        checks = list(CHECKS)  # default behaves like --suite
    try:
        reports = run_suite(checks=checks, seed=args.seed, cutoff=args.cutoff,
                            config_path=args.config)
    except LefbenchError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    for rep in reports:
        print("%-4s %-32s abs=%.3e rel=%.3e tol=%.1e"
              % ("PASS" if rep.passed else "FAIL", rep.test,
                 rep.abs_err, rep.rel_err, rep.tol))
    payload = emit(reports, args.format, strip_timing=args.strip_timing)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
        print("wrote %s (%s, %d rows)" % (args.out, args.format, len(reports)))
    if args.figures:
        from . import figures
        paths = figures.render_all(reports, args.figures)
        for path in paths:
            print("wrote %s" % path)
    failed = [r for r in reports if not r.passed]
    print("%d/%d checks passed" % (len(reports) - len(failed), len(reports)))
    return 0 if not failed else 1


if __name__ == "__main__":
    raise SystemExit(main())
