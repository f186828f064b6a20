"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
The default worker count for sweeps comes from ``IGS_UNDERLAY_JOBS``.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import os
import sys
from typing import Iterator, List, Optional, TextIO

from . import __version__
from .config import (
    ConfigError,
    canonical_scenario,
    default_statistics,
    load_json,
    parse_overrides,
    scenario_from_dict,
    scenario_to_dict,
    statistics_from_dict,
    statistics_to_dict,
    sweep_spec_from_dict,
    write_json,
)
from .model import pu_rate
from .montecarlo import example_spec, run_sweep
from .oracle import GridSpec, compare, random_scenarios, write_reports
from .solver import Solution, solve_igs, solve_pgs

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
JOBS_ENV = "IGS_UNDERLAY_JOBS"

log = logging.getLogger("igs_underlay")


@contextlib.contextmanager
def _output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc
    with fh:
        yield fh


def _load_scenario(path: str, overrides: List[str]):
    data = load_json(path)
    for key, value in parse_overrides(overrides).items():
        # an override in the other scale replaces the file's entry
        twin = key[:-3] if key.endswith("_db") else key + "_db"
        data.pop(twin, None)
        data[key] = value
    return scenario_from_dict(data)


def format_solution(sol: Solution, scenario) -> str:
    d = sol.design
    outage = [str(i) for i in (1, 2) if pu_rate(scenario, i, 0.0, 0.0) < scenario.r0[i - 1]]
    lines = [
        f"scheme={sol.scheme} ps={d.ps:.6f} cx={d.cx:.6f} rs={sol.rates.r_s:.6f}",
        "pu_rates={:.6f},{:.6f} targets={:.6f},{:.6f} outage={}".format(
            *sol.rates.r_p, *scenario.r0, ",".join(outage) or "none"
        ),
    ]
    if sol.scheme == "IGS":
        lines.append("breakpoints=" + (",".join(f"{p:.6f}" for p in sol.breakpoints.points) or "none"))
    for c in sol.candidates:
        lines.append(f"candidate z={c.z} regime={c.regime} ps={c.ps:.6f} cx={c.cx:.6f} rs={c.rs:.6f}")
    lines.extend(f"note: {n}" for n in sol.notes)
    return "\n".join(lines)


def cmd_solve(args) -> int:
    scenario = _load_scenario(args.scenario, args.set)
    sol = solve_pgs(scenario) if args.scheme == "pgs" else solve_igs(scenario)
    print(format_solution(sol, scenario))
    return EXIT_OK


def cmd_verify(args) -> int:
    grid = GridSpec.parse(args.grid)
    if args.scenario is not None:
        cases = [(args.scenario, _load_scenario(args.scenario, args.set))]
    elif args.random:
        cases = [(str(k), s) for k, s in enumerate(random_scenarios(args.random, args.seed))]
    else:
        raise ConfigError("give a scenario file or --random N")
    reports = [compare(s, grid, scenario_id=sid) for sid, s in cases]
    with _output(args.output) as fh:
        write_reports(reports, fh)
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} scenarios passed", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def _default_jobs() -> int:
    try:
        return int(os.environ.get(JOBS_ENV, "1"))
    except ValueError:
        return 1


def cmd_sweep(args) -> int:
    base = statistics_from_dict(parse_overrides(args.set), default_statistics())
    if args.example is not None:
        spec = example_spec(args.example, base, trials=args.trials or 10_000, seed=args.seed)
    else:
        data = load_json(args.spec)
        if args.trials:
            data["trials"] = args.trials
        if args.seed_given:
            data["seed"] = args.seed
        spec = sweep_spec_from_dict(data, base)
    # open the output first so an unwritable path fails before the long run
    with _output(args.output) as fh:
        result = run_sweep(spec, n_jobs=args.jobs)
        result.to_csv(fh)
    print(
        "trials={trials} seed={seed} envelope_correlation={envelope_correlation:.4f}".format(**result.metadata),
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_defaults(args) -> int:
    data = scenario_to_dict(canonical_scenario()) if args.scenario else statistics_to_dict(default_statistics())
    text = write_json(data, None)
    with _output(args.output) as fh:
        fh.write(text)
    return EXIT_OK


class _SeedAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.seed_given = True


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="igs-underlay",
        description="Secondary signal design under a full-duplex primary pair.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="design the secondary signal for one scenario")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--scheme", choices=("igs", "pgs"), default="igs")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="compare the closed-form design with a grid search")
    p.add_argument("scenario", nargs="?", help="scenario JSON file")
    p.add_argument("--random", type=int, default=0, metavar="N", help="check N random scenarios")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--grid", default="201x201", metavar="NPxNC")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("-o", "--output", help="CSV report path (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="Monte Carlo rate sweep")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--example", type=int, choices=(1, 2, 3))
    src.add_argument("--spec", help="sweep JSON file")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=1, action=_SeedAction)
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a base statistic, e.g. ps_max=2")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_sweep, seed_given=False)

    p = sub.add_parser("defaults", help="print the default statistics")
    p.add_argument("--scenario", action="store_true", help="print the mean-valued scenario instead")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_defaults)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
