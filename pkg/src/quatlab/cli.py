"""Command line entry point: ``quatlab list`` and ``quatlab run --suite NAME``.

Exit status is 0 when every case passes, 1 when some case fails and 2 for
usage or configuration errors (argparse uses 2 for its own errors as well).
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import fields

from .errors import ConfigInvalid, UnknownSuite
from .quadrature import WORKERS_ENV
from .runner import SuiteConfig, list_suites, load_config_file, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quatlab", description="Run numerical verification suites.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list registered suites")
    r = sub.add_parser("run", help="run one suite",
                       epilog=f"The default worker count comes from ${WORKERS_ENV} (1 if unset).")
    r.add_argument("--suite", help="suite name (see 'list')")
    r.add_argument("--config", help="TOML or JSON file with run settings; flags override it")
    r.add_argument("--lmax", type=float, dest="l_max", help="largest l (multiples of 1/2)")
    r.add_argument("--krange", type=int, dest="k_range", help="largest |k|")
    r.add_argument("--mu", type=_float_list, help="comma-separated mu values")
    r.add_argument("--R", type=_float_list, dest="R", help="comma-separated radii")
    r.add_argument("--tol", type=float, help="tolerance replacing every case tolerance")
    r.add_argument("--grid", type=int, help="extra quadrature order")
    r.add_argument("--samples", type=int, help="random points per case")
    r.add_argument("--seed", type=int, help="random seed (default 0)")
    r.add_argument("--workers", type=int, help="threads evaluating cases")
    r.add_argument("--out", help="write the JSON report here")
    r.add_argument("--csv", help="write a CSV table of the cases here")
    r.add_argument("--quiet", action="store_true", help="only print the summary line")
    return p


def config_from_args(args: argparse.Namespace) -> SuiteConfig:
    values: dict = {}
    if args.config:
        values.update(load_config_file(args.config))
    for f in fields(SuiteConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    if not values.get("suite"):
        raise ConfigInvalid("no suite given (use --suite or a config file)")
    return SuiteConfig(**values).validate()


def _print_report(report, quiet: bool) -> None:
    if not quiet:
        for c in report.cases:
            flag = "PASS" if c.passed else "FAIL"
            extra = f"  [{c.error}]" if c.error else ""
            print(f"{flag}  {c.case_id:<40s} observed={c.observed:.3e}  tol={c.tolerance:.1e}"
                  f"  ({c.wall_time:.2f}s){extra}")
    print(f"{report.suite}: {len(report.cases) - report.n_failed}/{len(report.cases)} cases passed"
          f" in {report.wall_time:.1f}s (seed={report.config.seed}, workers={report.config.workers})")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name, desc, anchor in list_suites():
            print(f"{name:<26s} {desc}\n{'':<26s} anchor: {anchor}")
        return EXIT_OK
    try:
        report = run_suite(config_from_args(args))
    except (UnknownSuite, ConfigInvalid) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _print_report(report, args.quiet)
    if args.out:
        report.write_json(args.out)
    if args.csv:
        report.write_csv(args.csv)
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
