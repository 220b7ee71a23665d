"""Scenario generation, metrics and suite execution.

Scenarios pair a randomly generated polygonal world with a goal layout
(well-separated "scattered" goals, or a harder "clustered" layout with
extra goals dropped next to existing ones) and an observation trace
sampled along a planned path to the true goal. The suite runner plays
every approach over every scenario and aggregates efficiency (planner
calls, planning wall time) and recognition quality (convergence,
ranked-first fraction), plus a scattered-vs-clustered deterioration
report.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .geometry import Box, ConvexPolygon, Trajectory, World, length, point_at
from .heuristics import prune_policy, recompute_policy
from .planners import Budget, RRTStarPlanner, VisibilityPlanner
from .recognizer import Problem, RankingResult, Recognizer, RANK_TIE_TOL

#: Minimum pairwise goal separation, as a fraction of the world diagonal.
SCATTER_SEPARATION = 0.15
#: Clustered extra goals land within this fraction of the diagonal of a base goal.
CLUSTER_RADIUS = 0.03

#: Named approach -> (recompute policy, prune policy).
APPROACHES = {
    "baseline": ("always", "never"),
    "norecompute": ("never", "never"),
    "recompute": ("nearest", "never"),
    "prune": ("always", "angle"),
    "both": ("nearest", "angle"),
}


@dataclass(frozen=True)
class ApproachSpec:
    name: str
    recompute: str
    prune: str
    angle_threshold_deg: float = 120.0

    @classmethod
    def named(cls, name: str, angle_threshold_deg: float = 120.0) -> "ApproachSpec":
        if name not in APPROACHES:
            raise ValueError(f"unknown approach {name!r}; known: {sorted(APPROACHES)}")
        rc, pr = APPROACHES[name]
        return cls(name, rc, pr, angle_threshold_deg)


@dataclass(frozen=True, eq=False)
class Scenario:
    scenario_id: str
    problem: Problem
    true_goal: int
    trace: tuple[Trajectory, ...]
    label: str
    seed: int


@dataclass(frozen=True)
class ScenarioRecord:
    scenario_id: str
    approach: str
    planner: str
    calls: int
    plan_time_s: float
    convergence: int
    ranked_first_frac: float
    pruned_count: int
    seed: int


@dataclass
class SuiteResult:
    rows: list[ScenarioRecord] = field(default_factory=list)

    def aggregates(self) -> dict[str, dict[str, float]]:
        """Per-approach means of the four reported metrics."""
        out: dict[str, dict[str, float]] = {}
        by_approach: dict[str, list[ScenarioRecord]] = {}
        for r in self.rows:
            by_approach.setdefault(r.approach, []).append(r)
        for name, rows in by_approach.items():
            out[name] = {
                "calls": float(np.mean([r.calls for r in rows])),
                "plan_time_s": float(np.mean([r.plan_time_s for r in rows])),
                "convergence": float(np.mean([r.convergence for r in rows])),
                "ranked_first_frac": float(np.mean([r.ranked_first_frac for r in rows])),
            }
        return out


class GenerationError(RuntimeError):
    """Could not place goals / generate a trace within bounded retries."""


# --- world and scenario generation ---------------------------------------


def _random_convex_polygon(rng, center, radius) -> ConvexPolygon:
    k = int(rng.integers(5, 9))
    angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=k))
    radii = radius * rng.uniform(0.6, 1.0, size=k)
    pts = np.column_stack([center[0] + radii * np.cos(angles),
                           center[1] + radii * np.sin(angles)])
    hull = _convex_hull(pts)
    return ConvexPolygon(hull)


def _convex_hull(pts: np.ndarray) -> np.ndarray:
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]

    def half(points):
        out = []
        for p in points:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def generate_world(seed: int, size: float = 100.0, n_obstacles: int = 4) -> World:
    """Random 2D world: square bounds with non-overlapping convex obstacles."""
    rng = np.random.default_rng(seed)
    bounds = Box(np.zeros(2), np.full(2, size))
    rmax = 0.10 * size
    obstacles: list[ConvexPolygon] = []
    centers: list[np.ndarray] = []
    tries = 0
    while len(obstacles) < n_obstacles and tries < 200 * max(n_obstacles, 1):
        tries += 1
        c = rng.uniform(1.5 * rmax, size - 1.5 * rmax, size=2)
        if any(np.linalg.norm(c - prev) < 2.2 * rmax for prev in centers):
            continue
        obstacles.append(_random_convex_polygon(rng, c, rng.uniform(0.5, 1.0) * rmax))
        centers.append(c)
    return World(bounds, tuple(obstacles))


def _sample_free(rng, world: World, keep_away: list[tuple[np.ndarray, float]],
                 tries: int = 2000) -> np.ndarray:
    lo, hi = world.bounds.lo, world.bounds.hi
    for _ in range(tries):
        p = lo + rng.random(world.dim) * (hi - lo)
        if not world.point_free(p):
            continue
        if all(np.linalg.norm(p - q) >= d for q, d in keep_away):
            return p
    raise GenerationError("could not place a point after bounded retries")


def sample_goal_layout(rng, world: World, n_goals: int, mode: str,
                       base_goals: int | None = None) -> list[np.ndarray]:
    """Sample goal positions: scattered (min pairwise separation) or
    clustered (scattered base plus nearby extras)."""
    diag = world.diagonal
    sep = SCATTER_SEPARATION * diag
    if mode == "scattered":
        n_base, n_extra = n_goals, 0
    elif mode == "clustered":
        n_base = base_goals if base_goals is not None else (n_goals + 1) // 2
        if n_base > n_goals:
            raise ValueError("base_goals exceeds n_goals")
        n_extra = n_goals - n_base
    else:
        raise ValueError(f"unknown mode {mode!r}")
    goals: list[np.ndarray] = []
    for _ in range(n_base):
        goals.append(_sample_free(rng, world, [(g, sep) for g in goals]))
    for i in range(n_extra):
        anchor = goals[int(rng.integers(0, n_base))]
        for _ in range(2000):
            offset = rng.normal(scale=CLUSTER_RADIUS * diag / 2.0, size=world.dim)
            if np.linalg.norm(offset) > CLUSTER_RADIUS * diag:
                continue
            p = anchor + offset
            if world.point_free(p) and all(np.linalg.norm(p - g) > 1e-6 for g in goals):
                goals.append(p)
                break
        else:
            raise GenerationError("could not place a clustered goal")
    return goals


def generate_trace(problem: Problem, true_goal: int, planner, k_points: int,
                   noise_sigma: float = 0.0, seed: int = 0,
                   budget: Budget | None = None) -> list[Trajectory]:
    """Observation trace: a planned path to the true goal resampled at
    ``k_points`` equally spaced arc-length stations.

    Interior stations get isotropic Gaussian noise clipped to free
    space; the first point is the initial pose and the last is the goal,
    both exact.
    """
    rng = np.random.default_rng(seed)
    from .planners import PlannerQuery  # local import to avoid cycle at module load

    result = planner.plan(PlannerQuery(problem.initial, problem.goals[true_goal],
                                       problem.world,
                                       budget if budget is not None else Budget()))
    if not result.ok:
        raise GenerationError(f"true goal unreachable: {result.reason}")
    path = result.trajectory
    total = length(path)
    if k_points < 2:
        raise ValueError("need at least 2 trace points")
    pts = []
    for j in range(k_points):
        s = total * j / (k_points - 1)
        p = point_at(path, s)
        if 0 < j < k_points - 1 and noise_sigma > 0.0:
            for _ in range(100):
                cand = p + rng.normal(scale=noise_sigma, size=problem.world.dim)
                if problem.world.point_free(cand):
                    p = cand
                    break
        pts.append(p)
    pts[0] = np.array(problem.initial, dtype=float)
    pts[-1] = np.array(problem.goals[true_goal], dtype=float)
    return [Trajectory(p[None, :]) for p in pts]


def generate_scenarios(world_seed: int, n_goals: int, mode: str, count: int, *,
                       n_obstacles: int = 4, size: float = 100.0,
                       base_goals: int | None = None,
                       trace_planner: str = "rrtstar",
                       trace_budget: Budget | None = None,
                       k_range: tuple[int, int] = (20, 76),
                       noise_sigma: float = 0.0) -> list[Scenario]:
    """Generate ``count`` scenarios, each with its own world, goal
    layout and trace toward a cyclically chosen true goal."""
    if n_goals < 2 and count > 0:
        raise ValueError("need at least 2 goals")
    scenarios: list[Scenario] = []
    attempt = 0
    while len(scenarios) < count:
        i = len(scenarios)
        seed = world_seed * 1_000_003 + attempt
        attempt += 1
        if attempt > 20 * max(count, 1) + 100:
            raise GenerationError("scenario generation exceeded retry budget")
        try:
            world = generate_world(seed, size=size, n_obstacles=n_obstacles)
            rng = np.random.default_rng(seed + 1)
            goals = sample_goal_layout(rng, world, n_goals, mode, base_goals)
            sep = SCATTER_SEPARATION * world.diagonal
            initial = _sample_free(rng, world, [(g, sep) for g in goals])
            problem = Problem(world, initial, tuple(goals))
            true_goal = i % n_goals
            if trace_planner == "rrtstar":
                planner = RRTStarPlanner(seed=seed + 2)
            elif trace_planner == "visibility":
                planner = VisibilityPlanner()
            else:
                raise ValueError(f"unknown trace planner {trace_planner!r}")
            k = int(rng.integers(k_range[0], k_range[1] + 1))
            trace = generate_trace(problem, true_goal, planner, k,
                                   noise_sigma=noise_sigma, seed=seed + 3,
                                   budget=trace_budget)
        except GenerationError:
            continue
        scenarios.append(Scenario(
            scenario_id=f"{mode}-{n_goals}g-{world_seed}-{i:04d}",
            problem=problem, true_goal=true_goal, trace=tuple(trace),
            label=mode, seed=seed))
    return scenarios


# --- metrics --------------------------------------------------------------


def correct_at(r: RankingResult, true_goal: int) -> bool:
    """True iff the true goal attains the maximal posterior (ties count
    as rank 1: goals sharing the top posterior share the top rank)."""
    return r.posteriors[true_goal] >= max(r.posteriors) - RANK_TIE_TOL


def convergence_metric(rankings: list[RankingResult], true_goal: int) -> int:
    """Observations-from-the-end at which the true goal becomes and
    stays top ranked; 0 if it is not top at the final observation."""
    n = len(rankings)
    if n == 0 or not correct_at(rankings[-1], true_goal):
        return 0
    t = n - 1
    while t > 0 and correct_at(rankings[t - 1], true_goal):
        t -= 1
    return n - t


def ranked_first_fraction(rankings: list[RankingResult], true_goal: int) -> float:
    """Fraction of observations at which the true goal holds rank 1."""
    if not rankings:
        return 0.0
    return sum(correct_at(r, true_goal) for r in rankings) / len(rankings)


# --- suite runner ---------------------------------------------------------


def make_planner(kind: str, seed: int = 0):
    if kind == "visibility":
        return VisibilityPlanner()
    if kind == "rrtstar":
        return RRTStarPlanner(seed=seed)
    raise ValueError(f"unknown planner {kind!r}")


def run_scenario(scenario: Scenario, spec: ApproachSpec, planner_kind: str,
                 planner_seed: int = 0, budget: Budget | None = None) -> ScenarioRecord:
    """Play one approach over one scenario's trace."""
    planner = make_planner(planner_kind, seed=planner_seed ^ (scenario.seed * 31 + 7))
    rec = Recognizer(
        scenario.problem, planner,
        recompute=recompute_policy(spec.recompute),
        prune=prune_policy(spec.prune, spec.angle_threshold_deg),
        budget=budget,
    )
    for o in scenario.trace:
        rec.observe(o)
    return ScenarioRecord(
        scenario_id=scenario.scenario_id,
        approach=spec.name,
        planner=planner_kind,
        calls=rec.stats.calls,
        plan_time_s=rec.stats.total_time,
        convergence=convergence_metric(rec.rankings, scenario.true_goal),
        ranked_first_frac=ranked_first_fraction(rec.rankings, scenario.true_goal),
        pruned_count=sum(h.pruned for h in rec.hypotheses),
        seed=scenario.seed,
    )


def _run_pair(args):
    return run_scenario(*args)


def run_suite(scenarios: list[Scenario], approaches: list[str] | list[ApproachSpec],
              planner_kind: str = "visibility", planner_seed: int = 0,
              budget: Budget | None = None, angle_threshold_deg: float = 120.0,
              jobs: int = 1) -> SuiteResult:
    """Run every approach on every scenario; approach names are
    validated before any scenario runs."""
    specs = [a if isinstance(a, ApproachSpec)
             else ApproachSpec.named(a, angle_threshold_deg) for a in approaches]
    pairs = [(sc, spec, planner_kind, planner_seed, budget)
             for sc in scenarios for spec in specs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_pair, pairs, chunksize=4))
    else:
        rows = [run_scenario(*p) for p in pairs]
    rows.sort(key=lambda r: (r.scenario_id, [s.name for s in specs].index(r.approach)))
    return SuiteResult(rows=rows)


#: Metrics where larger is worse (costs) vs. larger is better (quality).
COST_METRICS = ("plan_time_s", "calls")
QUALITY_METRICS = ("convergence", "ranked_first_frac")


def deterioration_report(scattered: SuiteResult, clustered: SuiteResult) -> dict:
    """Percent deterioration from the scattered to the clustered suite.

    For cost metrics, 100 * (clustered - scattered) / scattered (100%
    means twice the cost); for quality metrics, 100 * (scattered -
    clustered) / scattered. Lower is better for both.
    """
    sc = scattered.aggregates()
    cl = clustered.aggregates()
    report: dict[str, dict[str, float]] = {}
    for name in sc:
        if name not in cl:
            continue
        entry = {}
        for metric in COST_METRICS:
            base = sc[name][metric]
            entry[metric] = math.inf if base == 0 else 100.0 * (cl[name][metric] - base) / base
        for metric in QUALITY_METRICS:
            base = sc[name][metric]
            entry[metric] = math.inf if base == 0 else 100.0 * (base - cl[name][metric]) / base
        report[name] = entry
    return report
