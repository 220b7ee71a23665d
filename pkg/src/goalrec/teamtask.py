"""Two-agent coordination on a rectangular field.

An observed agent travels at constant speed to one of four goals.
An observer must reach the complementary goal position (goals form two
complement pairs) and is compared under three strategies: full
knowledge of the observed goal (head there at t=0), online goal
recognition (retarget to the complement of the current top-ranked
goal every tick), and zero knowledge (wait until the observed agent
arrives, then go). Point agents, no inter-agent collision: the claim
under test is about decision timing, not dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Box, Trajectory, World, length, point_at
from .heuristics import AlwaysRecompute, NeverPrune
from .planners import PlannerQuery, VisibilityPlanner
from .recognizer import Problem, Recognizer

STRATEGIES = ("FK", "OGR", "ZK")


@dataclass(frozen=True, eq=False)
class FieldConfig:
    world: World
    goals: tuple[np.ndarray, ...]
    complement: dict[int, int]
    observed_start: np.ndarray
    observer_starts: tuple[np.ndarray, ...]
    speed: float = 1.0
    tick: float = 0.25

    def __post_init__(self):
        if self.speed <= 0 or self.tick <= 0:
            raise ValueError("speed and tick must be positive")
        if sorted(self.complement) != list(range(len(self.goals))):
            raise ValueError("complement must cover all goals")
        for a, b in self.complement.items():
            if a == b or self.complement[b] != a:
                raise ValueError("complement must be an involution without fixed points")


def default_field() -> FieldConfig:
    """20 x 14 m obstacle-free field, two complement pairs of goals,
    three observer start positions."""
    world = World(Box(np.zeros(2), np.array([20.0, 14.0])))
    goals = (np.array([2.0, 3.0]), np.array([18.0, 3.0]),
             np.array([2.0, 11.0]), np.array([18.0, 11.0]))
    return FieldConfig(
        world=world,
        goals=goals,
        complement={0: 1, 1: 0, 2: 3, 3: 2},
        observed_start=np.array([10.0, 7.0]),
        observer_starts=(np.array([5.0, 2.0]), np.array([5.0, 12.0]),
                         np.array([15.0, 7.0])),
    )


@dataclass(frozen=True)
class EpisodeResult:
    strategy: str
    observed_goal: int
    observer_start: int
    completion_time: float
    retargets: int = 0


def _travel_time(cfg: FieldConfig, a: np.ndarray, b: np.ndarray,
                 planner: VisibilityPlanner) -> float:
    result = planner.plan(PlannerQuery(a, b, cfg.world))
    if not result.ok:
        raise RuntimeError("field position unreachable")
    return length(result.trajectory) / cfg.speed


def simulate_episode(cfg: FieldConfig, strategy: str, observed_goal: int,
                     observer_start: int, pinned: bool = False) -> EpisodeResult:
    """Run one episode; completion_time is when the observer reaches
    the complement of the observed agent's goal."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    planner = VisibilityPlanner()
    start = cfg.observer_starts[observer_start]
    true_target = cfg.complement[observed_goal]

    if strategy == "FK":
        t = _travel_time(cfg, start, cfg.goals[true_target], planner)
        return EpisodeResult(strategy, observed_goal, observer_start, t)

    observed_result = planner.plan(
        PlannerQuery(cfg.observed_start, cfg.goals[observed_goal], cfg.world))
    if not observed_result.ok:
        raise RuntimeError("observed goal unreachable")
    observed_path = observed_result.trajectory
    observed_time = length(observed_path) / cfg.speed

    if strategy == "ZK":
        t = observed_time + _travel_time(cfg, start, cfg.goals[true_target], planner)
        return EpisodeResult(strategy, observed_goal, observer_start, t)

    # OGR: recognize every tick, commit to the complement of the current
    # top goal, and correct course when the top goal changes.
    rec = Recognizer(Problem(cfg.world, cfg.observed_start, cfg.goals),
                     VisibilityPlanner(), AlwaysRecompute(), NeverPrune())
    pos = np.array(start, dtype=float)
    t = 0.0
    target: int | None = None
    retargets = 0
    route: Trajectory | None = None
    route_pos = 0.0
    horizon = observed_time + 4.0 * cfg.world.diagonal / cfg.speed
    while True:
        if t <= observed_time:
            obs = point_at(observed_path, min(t * cfg.speed, length(observed_path)))
            ranking = rec.observe(obs)
            top = ranking.top
        # After the trace ends the last ranking stands.
        want = true_target if pinned else cfg.complement[top]
        if want != target:
            if target is not None:
                retargets += 1
            target = want
            result = planner.plan(PlannerQuery(pos, cfg.goals[target], cfg.world))
            if not result.ok:
                raise RuntimeError("observer target unreachable")
            route = result.trajectory
            route_pos = 0.0
        remaining = length(route) - route_pos
        step = cfg.speed * cfg.tick
        if target == true_target and remaining <= step:
            return EpisodeResult(strategy, observed_goal, observer_start,
                                 t + remaining / cfg.speed, retargets)
        advance = min(step, remaining)
        route_pos += advance
        pos = point_at(route, route_pos)
        t += cfg.tick
        if t > horizon:
            raise RuntimeError("episode failed to terminate")


def run_matrix(cfg: FieldConfig | None = None) -> list[EpisodeResult]:
    """All observer starts x observed goals x strategies."""
    cfg = cfg if cfg is not None else default_field()
    out = []
    for si in range(len(cfg.observer_starts)):
        for gi in range(len(cfg.goals)):
            for strategy in STRATEGIES:
                out.append(simulate_episode(cfg, strategy, gi, si))
    return out
