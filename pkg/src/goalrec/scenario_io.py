"""Scenario JSON schema and atomic file output.

Scenario files are plain JSON, human-diffable, all lengths in meters:

    {
      "schema_version": 1,
      "dimension": 2,
      "bounds": {"lo": [x, y], "hi": [x, y]},
      "obstacles": [{"type": "polygon", "vertices": [[x, y], ...]}
                    | {"type": "box", "lo": [...], "hi": [...]}],
      "initial": [x, y],
      "goals": [[x, y], ...],
      "true_goal": 0,
      "trace": [[[x, y], ...], ...],   // one fragment per observation
      "seed": 7,
      "label": "scattered",
      "scenario_id": "scattered-10g-7-0000"
    }

Result CSVs have the fixed column set documented in ``CSV_COLUMNS``.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .benchmark import Scenario, ScenarioRecord
from .geometry import Box, ConvexPolygon, Trajectory, World
from .recognizer import Problem

SCHEMA_VERSION = 1

CSV_COLUMNS = ("scenario_id", "approach", "planner", "calls", "plan_time_s",
               "convergence", "ranked_first_frac", "pruned_count", "seed")


class SchemaError(ValueError):
    """Scenario file does not match the documented schema."""


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file in the same directory plus rename."""
    d = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def world_to_dict(world: World) -> dict:
    obstacles = []
    for ob in world.obstacles:
        if isinstance(ob, ConvexPolygon):
            obstacles.append({"type": "polygon", "vertices": ob.vertices.tolist()})
        else:
            obstacles.append({"type": "box", "lo": ob.lo.tolist(), "hi": ob.hi.tolist()})
    return {"bounds": {"lo": world.bounds.lo.tolist(), "hi": world.bounds.hi.tolist()},
            "obstacles": obstacles}


def world_from_dict(d: dict) -> World:
    try:
        bounds = Box(np.array(d["bounds"]["lo"]), np.array(d["bounds"]["hi"]))
        obstacles = []
        for ob in d.get("obstacles", []):
            if ob["type"] == "polygon":
                obstacles.append(ConvexPolygon(np.array(ob["vertices"])))
            elif ob["type"] == "box":
                obstacles.append(Box(np.array(ob["lo"]), np.array(ob["hi"])))
            else:
                raise SchemaError(f"unknown obstacle type {ob['type']!r}")
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"bad world: {e}") from e
    return World(bounds, tuple(obstacles))


def scenario_to_dict(s: Scenario) -> dict:
    d = world_to_dict(s.problem.world)
    return {
        "schema_version": SCHEMA_VERSION,
        "dimension": s.problem.world.dim,
        "bounds": d["bounds"],
        "obstacles": d["obstacles"],
        "initial": s.problem.initial.tolist(),
        "goals": [g.tolist() for g in s.problem.goals],
        "true_goal": s.true_goal,
        "trace": [o.points.tolist() for o in s.trace],
        "seed": s.seed,
        "label": s.label,
        "scenario_id": s.scenario_id,
    }


def scenario_from_dict(d: dict) -> Scenario:
    try:
        if d.get("schema_version") != SCHEMA_VERSION:
            raise SchemaError(f"unsupported schema_version {d.get('schema_version')!r}")
        world = world_from_dict(d)
        problem = Problem(world, np.array(d["initial"], dtype=float),
                          tuple(np.array(g, dtype=float) for g in d["goals"]))
        trace = tuple(Trajectory(np.array(frag, dtype=float)) for frag in d["trace"])
        if len(trace) < 2:
            raise SchemaError("trace needs at least 2 observations")
        return Scenario(scenario_id=str(d["scenario_id"]), problem=problem,
                        true_goal=int(d["true_goal"]), trace=trace,
                        label=str(d.get("label", "")), seed=int(d.get("seed", 0)))
    except SchemaError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise SchemaError(f"bad scenario: {e}") from e


def save_scenario(path: str, s: Scenario) -> None:
    atomic_write_text(path, json.dumps(scenario_to_dict(s), indent=1) + "\n")


def load_scenario(path: str) -> Scenario:
    with open(path) as f:
        try:
            d = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON in {path}: {e}") from e
    return scenario_from_dict(d)


def records_to_csv(rows: list[ScenarioRecord], zero_timing: bool = False) -> str:
    """Render result rows with the fixed column set.

    zero_timing writes 0.0 for plan_time_s, the only nondeterministic
    column, so byte-identical reruns can be verified.
    """
    lines = [",".join(CSV_COLUMNS)]
    for r in rows:
        t = 0.0 if zero_timing else r.plan_time_s
        lines.append(",".join([
            r.scenario_id, r.approach, r.planner, str(r.calls),
            f"{t:.6f}", str(r.convergence), f"{r.ranked_first_frac:.6f}",
            str(r.pruned_count), str(r.seed),
        ]))
    return "\n".join(lines) + "\n"


def csv_to_records(text: str) -> list[ScenarioRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or tuple(lines[0].split(",")) != CSV_COLUMNS:
        raise SchemaError("unexpected CSV header")
    out = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(CSV_COLUMNS):
            raise SchemaError(f"bad CSV row: {ln!r}")
        out.append(ScenarioRecord(
            scenario_id=parts[0], approach=parts[1], planner=parts[2],
            calls=int(parts[3]), plan_time_s=float(parts[4]),
            convergence=int(parts[5]), ranked_first_frac=float(parts[6]),
            pruned_count=int(parts[7]), seed=int(parts[8])))
    return out
