"""Command-line front end: run scenarios, emit reports.

Exit codes: 0 when every executed check passes, 1 on any check failure,
2 on unusable input (parse or validation errors).  Reports are written
in a canonical line-oriented `key value` form with no timestamps, so
identical inputs produce byte-identical files; wall-clock timings only
appear in the human summary on stdout.
"""

from __future__ import annotations

import argparse
import sys
import time

from .checks import DEFAULT_SEED, Settings, run_scenario_checks
from .errors import ParseError, RhamcheckError, ValidationError
from .scenarios import (
    BUILTIN_DESCRIPTIONS,
    Scenario,
    builtin_names,
    load_builtin,
)
from .simplex_forms import DEFAULT_QUAD_ORDER

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rhamcheck",
        description="verify comparison maps between algebraic forms and singular cochains",
    )
    parser.add_argument("--scenario", action="append", default=[], metavar="PATH",
                        help="run a scenario file (repeatable)")
    parser.add_argument("--builtin", action="append", default=[], metavar="NAME",
                        help="run a builtin scenario; 'all' runs the whole corpus")
    parser.add_argument("--check", metavar="NAME,...",
                        help="only run checks matching these names or kinds")
    parser.add_argument("--max-weight", type=int, metavar="N",
                        help="override the weight cutoff of cohomology truncations")
    parser.add_argument("--quad-order", type=int, default=DEFAULT_QUAD_ORDER, metavar="K",
                        help="Gauss-Legendre order for the numeric lane (default %(default)s)")
    parser.add_argument("--tolerance", type=float, metavar="X",
                        help="override every check tolerance")
    parser.add_argument("--report", metavar="PATH", help="write the canonical report here")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, metavar="N",
                        help="seed for randomized property checks (default %(default)s)")
    parser.add_argument("--list", action="store_true", help="list the builtin corpus and exit")
    return parser


def list_builtins(out=sys.stdout):
    """Print the builtin catalog with one-line descriptions."""
    names = builtin_names()
    for name in names:
        out.write("%-20s %s\n" % (name, BUILTIN_DESCRIPTIONS[name]))
    return names


def report_lines(runs, settings):
    """Canonical, timing-free serialization of a set of scenario runs."""
    lines = []
    lines.append("format_version 1")
    lines.append("seed %d" % settings.seed)
    lines.append("quad_order %d" % settings.quad_order)
    if settings.max_weight is not None:
        lines.append("max_weight %d" % settings.max_weight)
    if settings.tolerance is not None:
        lines.append("tolerance %r" % settings.tolerance)
    lines.append("scenarios %d" % len(runs))
    totals = {"pass": 0, "fail": 0, "skip": 0}
    for scenario, results, _elapsed in runs:
        lines.append("scenario %s" % scenario.name)
        lines.append("scenario.%s.checks %d" % (scenario.name, len(results)))
        for result in results:
            prefix = "check.%s.%s" % (scenario.name, result.name)
            lines.append("%s.kind %s" % (prefix, result.kind))
            lines.append("%s.status %s" % (prefix, result.status))
            if result.message:
                lines.append("%s.reason %s" % (prefix, result.message))
            for key, value in result.details:
                lines.append("%s.%s %s" % (prefix, key, value))
            totals[result.status] += 1
    for key in ("pass", "fail", "skip"):
        lines.append("summary.%s %d" % (key, totals[key]))
    return lines


def human_summary(runs, out=sys.stdout):
    total_pass = total_fail = total_skip = 0
    for scenario, results, elapsed in runs:
        out.write("%s (%.2fs)\n" % (scenario.name, elapsed))
        for result in results:
            line = "  [%-4s] %-22s %s" % (result.status, result.name, result.kind)
            if result.status == "fail":
                line += "  -- %s" % result.message
            elif result.status == "skip":
                line += "  -- %s" % result.message
            out.write(line + "\n")
            total_pass += result.status == "pass"
            total_fail += result.status == "fail"
            total_skip += result.status == "skip"
    out.write(
        "total: %d pass, %d fail, %d skip\n" % (total_pass, total_fail, total_skip)
    )
    return total_fail


def run_scenario(scenario, settings, check_filter=None):
    """Run one scenario; returns (results, elapsed seconds)."""
    start = time.monotonic()
    results = run_scenario_checks(scenario, settings, check_filter)
    return results, time.monotonic() - start


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.list:
        list_builtins()
        return EXIT_PASS
    selected = []
    for name in args.builtin:
        if name == "all":
            selected.extend(builtin_names())
        else:
            selected.append(name)
    if not selected and not args.scenario:
        parser.print_usage(sys.stderr)
        sys.stderr.write("rhamcheck: nothing to run; use --builtin, --scenario, or --list\n")
        return EXIT_USAGE
    settings = Settings(
        quad_order=args.quad_order,
        max_weight=args.max_weight,
        tolerance=args.tolerance,
        seed=args.seed,
    )
    check_filter = set(args.check.split(",")) if args.check else None
    runs = []
    try:
        scenarios = [load_builtin(name) for name in selected]
        for path in args.scenario:
            with open(path, "r", encoding="utf-8") as handle:
                scenarios.append(Scenario(handle.read(), source=path))
    except (ParseError, ValidationError) as exc:
        sys.stderr.write("rhamcheck: %s\n" % exc)
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write("rhamcheck: %s\n" % exc)
        return EXIT_USAGE
    for scenario in scenarios:
        try:
            results, elapsed = run_scenario(scenario, settings, check_filter)
        except RhamcheckError as exc:
            sys.stderr.write("rhamcheck: %s: %s\n" % (scenario.name, exc))
            return EXIT_USAGE
        runs.append((scenario, results, elapsed))
    failures = human_summary(runs)
    if args.report:
        text = "\n".join(report_lines(runs, settings)) + "\n"
        with open(args.report, "w", encoding="utf-8") as handle:
            handle.write(text)
    return EXIT_CHECK_FAILURE if failures else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
