"""Command line surface: scenario generation, suite runs, team-task
simulation and report aggregation.

Exit codes: 0 success, 2 usage error (argparse), 3 missing input file,
4 schema violation, 5 no results to report, 1 any other error.
All outputs are written atomically (temp file + rename) and carry the
resolved configuration and seeds needed to reproduce them.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import benchmark, scenario_io, teamtask
from .planners import Budget

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISSING = 3
EXIT_SCHEMA = 4
EXIT_NO_RESULTS = 5


class CliError(RuntimeError):
    def __init__(self, message: str, code: int = EXIT_ERROR):
        super().__init__(message)
        self.code = code


def _out_dir(args) -> str:
    # GOALREC_OUT_DIR overrides the flag so batch jobs can redirect output.
    return os.environ.get("GOALREC_OUT_DIR") or args.out


def _write_json(path: str, payload: dict) -> None:
    scenario_io.atomic_write_text(path, json.dumps(payload, indent=1,
                                                   sort_keys=True) + "\n")


def cmd_gen(args) -> int:
    out = _out_dir(args)
    config = {
        "command": "gen", "goals": args.goals, "mode": args.mode,
        "count": args.count, "seed": args.seed, "obstacles": args.obstacles,
        "size": args.size, "base_goals": args.base_goals,
        "trace_planner": args.trace_planner, "k_min": args.k_min,
        "k_max": args.k_max, "noise_sigma": args.noise_sigma,
    }
    scenarios = benchmark.generate_scenarios(
        args.seed, args.goals, args.mode, args.count,
        n_obstacles=args.obstacles, size=args.size, base_goals=args.base_goals,
        trace_planner=args.trace_planner, k_range=(args.k_min, args.k_max),
        noise_sigma=args.noise_sigma)
    os.makedirs(out, exist_ok=True)
    files = []
    for s in scenarios:
        path = os.path.join(out, f"{s.scenario_id}.json")
        scenario_io.save_scenario(path, s)
        files.append(os.path.basename(path))
    _write_json(os.path.join(out, "manifest.json"),
                {"config": config, "scenarios": files})
    print(f"wrote {len(files)} scenario files to {out}")
    return EXIT_OK


def _collect_scenario_files(paths: list[str]) -> list[str]:
    files = []
    for p in paths:
        if os.path.isdir(p):
            files.extend(sorted(
                os.path.join(p, f) for f in os.listdir(p)
                if f.endswith(".json") and f != "manifest.json"))
        elif os.path.isfile(p):
            files.append(p)
        else:
            raise CliError(f"no such file or directory: {p}", EXIT_MISSING)
    if not files:
        raise CliError("no scenario files found", EXIT_MISSING)
    return files


def cmd_run(args) -> int:
    out = _out_dir(args)
    approaches = []
    for a in args.approach:
        approaches.extend(x for x in a.split(",") if x)
    if not approaches:
        approaches = ["baseline"]
    for a in approaches:
        if a not in benchmark.APPROACHES:
            raise CliError(
                f"unknown approach {a!r}; known: {sorted(benchmark.APPROACHES)}")
    files = _collect_scenario_files(args.scenarios)
    try:
        scenarios = [scenario_io.load_scenario(f) for f in files]
    except scenario_io.SchemaError as e:
        raise CliError(str(e), EXIT_SCHEMA) from e
    budget = Budget(max_iterations=args.max_iterations,
                    max_seconds=args.max_seconds)
    result = benchmark.run_suite(
        scenarios, approaches, planner_kind=args.planner,
        planner_seed=args.seed, budget=budget,
        angle_threshold_deg=args.angle_threshold, jobs=args.jobs)
    os.makedirs(out, exist_ok=True)
    csv_path = os.path.join(out, args.csv_name)
    scenario_io.atomic_write_text(
        csv_path, scenario_io.records_to_csv(result.rows,
                                             zero_timing=not args.timing))
    config = {
        "command": "run", "scenarios": files, "approaches": approaches,
        "planner": args.planner, "seed": args.seed,
        "max_iterations": args.max_iterations, "max_seconds": args.max_seconds,
        "angle_threshold": args.angle_threshold, "jobs": args.jobs,
        "timing": args.timing,
    }
    _write_json(os.path.join(out, "aggregate.json"),
                {"config": config, "aggregates": result.aggregates()})
    print(f"wrote {csv_path} ({len(result.rows)} rows)")
    return EXIT_OK


def cmd_teamtask(args) -> int:
    out = _out_dir(args)
    cfg = teamtask.default_field()
    results = teamtask.run_matrix(cfg)
    by_cell: dict[tuple[int, int], dict[str, float]] = {}
    for r in results:
        by_cell.setdefault((r.observer_start, r.observed_goal), {})[r.strategy] = \
            r.completion_time
    lines = ["observer_start,observed_goal,FK,OGR,ZK"]
    for (si, gi), times in sorted(by_cell.items()):
        lines.append(f"I{si + 1},G{gi + 1},"
                     f"{times['FK']:.2f},{times['OGR']:.2f},{times['ZK']:.2f}")
    os.makedirs(out, exist_ok=True)
    path = os.path.join(out, "teamtask.csv")
    scenario_io.atomic_write_text(path, "\n".join(lines) + "\n")
    _write_json(os.path.join(out, "teamtask_config.json"),
                {"command": "teamtask", "speed": cfg.speed, "tick": cfg.tick,
                 "goals": [g.tolist() for g in cfg.goals],
                 "observer_starts": [p.tolist() for p in cfg.observer_starts]})
    print(f"wrote {path}")
    return EXIT_OK


def cmd_report(args) -> int:
    results_dir = args.results
    if not os.path.isdir(results_dir):
        raise CliError(f"no such directory: {results_dir}", EXIT_MISSING)
    suites: dict[str, benchmark.SuiteResult] = {}
    for name in sorted(os.listdir(results_dir)):
        if not name.endswith(".csv") or name == "teamtask.csv":
            continue
        with open(os.path.join(results_dir, name)) as f:
            try:
                rows = scenario_io.csv_to_records(f.read())
            except scenario_io.SchemaError as e:
                raise CliError(f"{name}: {e}", EXIT_SCHEMA) from e
        for r in rows:
            label = r.scenario_id.split("-", 1)[0]
            suites.setdefault(label, benchmark.SuiteResult()).rows.append(r)
    if not all(s.rows for s in suites.values()) or not suites:
        raise CliError("no results found", EXIT_NO_RESULTS)
    payload: dict = {"aggregates": {label: s.aggregates()
                                    for label, s in suites.items()}}
    if "scattered" in suites and "clustered" in suites:
        payload["deterioration_pct"] = benchmark.deterioration_report(
            suites["scattered"], suites["clustered"])
    out_path = os.path.join(results_dir, "report.json")
    _write_json(out_path, payload)
    print(json.dumps(payload, indent=1, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="goalrec",
        description="Online goal recognition: scenario generation, "
                    "benchmark suites and team-task simulation.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate scenario files")
    g.add_argument("--goals", type=int, required=True)
    g.add_argument("--mode", choices=["scattered", "clustered"], required=True)
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--obstacles", type=int, default=4)
    g.add_argument("--size", type=float, default=100.0)
    g.add_argument("--base-goals", type=int, default=None)
    g.add_argument("--trace-planner", choices=["rrtstar", "visibility"],
                   default="rrtstar")
    g.add_argument("--k-min", type=int, default=20)
    g.add_argument("--k-max", type=int, default=76)
    g.add_argument("--noise-sigma", type=float, default=0.0)
    g.add_argument("--out", default="out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run approaches over scenario files")
    r.add_argument("--scenarios", nargs="+", required=True,
                   help="scenario JSON files or directories of them")
    r.add_argument("--approach", action="append", default=[],
                   help="approach name(s), repeatable or comma separated")
    r.add_argument("--planner", choices=["visibility", "rrtstar"],
                   default="visibility")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--max-iterations", type=int, default=2000)
    r.add_argument("--max-seconds", type=float, default=None)
    r.add_argument("--angle-threshold", type=float, default=120.0)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--timing", action=argparse.BooleanOptionalAction, default=True,
                   help="--no-timing zeroes the wall-time column for "
                        "byte-reproducible CSVs")
    r.add_argument("--csv-name", default="results.csv")
    r.add_argument("--out", default="out")
    r.set_defaults(func=cmd_run)

    t = sub.add_parser("teamtask", help="run the observer-strategy matrix")
    t.add_argument("--out", default="out")
    t.set_defaults(func=cmd_teamtask)

    rep = sub.add_parser("report", help="aggregate result CSVs in a directory")
    rep.add_argument("--results", required=True)
    rep.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except benchmark.GenerationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
