"""Online goal recognition over streaming observations.

The recognizer keeps one hypothesis per goal: an ideal plan computed
once at startup, a prefix that accumulates the observations, and a
planned suffix from the latest observed point to the goal. Each new
observation either triggers fresh suffix planning for all live goals
or a cheap geometric suffix repair, according to the configured
recompute policy; the prune policy may permanently eliminate goals.
Goals are ranked by how close the cost of their observation-matching
plan stays to the cost of their ideal plan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Trajectory, World, closest_point, concat, length, remove_prefix
from .heuristics import AlwaysRecompute, NeverPrune
from .planners import Budget, PlannerQuery, instrument

#: Posterior comparisons treat scores within this of the max as tied.
RANK_TIE_TOL = 1e-9


class ObservationError(ValueError):
    """Observation rejected (e.g. outside world bounds); state unchanged."""


@dataclass(frozen=True, eq=False)
class Problem:
    """World, initial pose and candidate goal set (order is fixed and
    used for tie-breaking)."""

    world: World
    initial: np.ndarray
    goals: tuple[np.ndarray, ...]

    def __post_init__(self):
        initial = np.asarray(self.initial, dtype=float)
        goals = tuple(np.asarray(g, dtype=float) for g in self.goals)
        if len(goals) < 1:
            raise ValueError("need at least one goal")
        for name, p in [("initial", initial)] + [(f"goal {i}", g) for i, g in enumerate(goals)]:
            if p.shape[0] != self.world.dim:
                raise ValueError(f"{name} dimension does not match world")
            if not self.world.point_free(p):
                raise ValueError(f"{name} is not in free space")
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "goals", goals)


class GoalHypothesis:
    """Per-goal recognition record."""

    __slots__ = ("goal", "ideal", "ideal_cost", "prefix", "suffix", "full",
                 "score", "pruned", "unreachable", "failed_round")

    def __init__(self, goal, ideal: Trajectory | None):
        self.goal = goal
        self.ideal = ideal
        self.ideal_cost = length(ideal) if ideal is not None else math.inf
        self.prefix: Trajectory | None = None
        self.suffix: Trajectory | None = ideal
        self.full: Trajectory | None = ideal
        self.score: float = 0.0
        self.pruned = False
        self.unreachable = ideal is None
        self.failed_round = False

    @property
    def live(self) -> bool:
        return not self.pruned and not self.unreachable


@dataclass(frozen=True)
class RankingResult:
    """Posterior over goals after one observation.

    posteriors are indexed by goal-list position; pruned goals carry 0.
    top is the argmax with ties broken toward the earliest goal.
    """

    posteriors: tuple[float, ...]
    top: int
    pruned: frozenset[int] = field(default_factory=frozenset)
    observation_index: int = -1
    planner_calls: int = 0
    planning_time: float = 0.0


def ratio_score(ideal_cost: float, full_cost: float) -> float:
    """Plan-quality ratio: ideal cost over observation-matching cost.

    1.0 when both costs are zero (agent already at the goal, no
    deviation); 0.0 for the infinite-cost sentinel.
    """
    if math.isinf(full_cost) or math.isinf(ideal_cost):
        return 0.0
    if full_cost == 0.0:
        return 1.0 if ideal_cost == 0.0 else 0.0
    return ideal_cost / full_cost


def modify_suffix(suffix: Trajectory, obs_end) -> Trajectory:
    """Cheap suffix repair, approximating a planner call.

    Drops the part of the old suffix before the point geometrically
    closest to the observed position and bridges straight from the
    observed position to it; the result starts at the observation and
    still ends at the goal.
    """
    _, s = closest_point(obs_end, suffix)
    tail = remove_prefix(suffix, s)
    return concat(Trajectory(np.asarray(obs_end)[None, :]), tail)


class Recognizer:
    """Streaming recognizer: feed observations, read rankings.

    Single-writer: observe() calls must be sequential. Planner calls
    are counted via an instrumentation wrapper accessible as ``stats``.
    """

    def __init__(self, problem: Problem, planner, recompute=None, prune=None,
                 budget: Budget | None = None):
        self.problem = problem
        self.planner = instrument(planner)
        self.recompute = recompute if recompute is not None else AlwaysRecompute()
        self.prune = prune if prune is not None else NeverPrune()
        self.budget = budget if budget is not None else Budget()
        self.top: int | None = None
        self.rankings: list[RankingResult] = []
        self.observations: list[Trajectory] = []
        self.hypotheses: list[GoalHypothesis] = []
        for g in problem.goals:
            result = self.planner.plan(self._query(problem.initial, g))
            self.hypotheses.append(GoalHypothesis(g, result.trajectory))

    def _query(self, start, goal) -> PlannerQuery:
        return PlannerQuery(start=start, goal=goal, world=self.problem.world,
                            budget=self.budget)

    @property
    def stats(self):
        return self.planner.stats

    def _coerce_observation(self, o) -> Trajectory:
        if not isinstance(o, Trajectory):
            o = Trajectory(o)
        if o.dim != self.problem.world.dim:
            raise ObservationError("observation dimension does not match world")
        for p in o.points:
            if not self.problem.world.in_bounds(p):
                raise ObservationError("observation outside world bounds")
        return o

    def observe(self, o) -> RankingResult:
        """Consume one observation and return the updated ranking."""
        o = self._coerce_observation(o)
        prev_point = (self.observations[-1].end if self.observations
                      else self.problem.initial)
        for h in self.hypotheses:
            h.failed_round = False

        # On the first observation self.top is None; policies that consult
        # the top-ranked plan must return True then (see NearestPlanRecompute),
        # constant policies are unaffected so the exact call-count guarantees
        # of the always/never variants hold.
        do_recompute = self.recompute.decide(self.hypotheses, self.top, o)

        if do_recompute:
            for h in self.hypotheses:
                if not h.live:
                    continue
                if self.prune.decide(h, o, prev_point):
                    h.pruned = True
                    continue
                result = self.planner.plan(self._query(o.end, h.goal))
                if result.ok:
                    h.suffix = result.trajectory
                else:
                    h.failed_round = True
        else:
            for h in self.hypotheses:
                if h.live:
                    h.suffix = modify_suffix(h.suffix, o.end)

        for h in self.hypotheses:
            if h.pruned or h.unreachable:
                continue
            h.prefix = o if h.prefix is None else concat(h.prefix, o)
            h.full = concat(h.prefix, h.suffix)
            h.score = 0.0 if h.failed_round else ratio_score(h.ideal_cost,
                                                             length(h.full))

        self.observations.append(o)
        ranking = self.rank()
        self.top = ranking.top
        self.rankings.append(ranking)
        return ranking

    def rank(self) -> RankingResult:
        """Normalize current scores into a posterior and pick the top goal.

        Pruning is per-goal and may in the extreme eliminate every goal;
        ranking then degenerates to a uniform posterior over all goals.
        """
        scores = [0.0 if h.pruned else max(h.score, 0.0) for h in self.hypotheses]
        live = [i for i, h in enumerate(self.hypotheses) if not h.pruned]
        candidates = live if live else list(range(len(self.hypotheses)))
        total = sum(scores)
        if total > 0.0:
            posteriors = tuple(s / total for s in scores)
        else:
            u = 1.0 / len(candidates)
            posteriors = tuple(u if i in set(candidates) else 0.0
                               for i in range(len(self.hypotheses)))
        top = max(candidates, key=lambda i: (posteriors[i], -i))
        return RankingResult(
            posteriors=posteriors,
            top=top,
            pruned=frozenset(i for i, h in enumerate(self.hypotheses) if h.pruned),
            observation_index=len(self.observations) - 1,
            planner_calls=self.stats.calls,
            planning_time=self.stats.total_time,
        )
