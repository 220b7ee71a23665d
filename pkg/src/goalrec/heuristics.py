"""Pluggable decision policies for the online recognizer.

Two decisions are made per observation: whether to re-invoke the
planner for fresh plan suffixes (recompute policies) and whether to
permanently eliminate a goal (prune policies). Constant policies give
exact call-count guarantees; the distance and angle policies trade a
cheap geometric test for planner calls.

All policies are stateless pure functions of the previous-round plans
and the new observation; they are safe to evaluate concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import (
    DegenerateVectorError,
    Trajectory,
    angle_deg,
    closest_point,
    length,
    min_distance,
    point_at,
)


@dataclass(frozen=True)
class AlwaysRecompute:
    name = "always"

    def decide(self, hypotheses, top: int, o: Trajectory) -> bool:
        return True


@dataclass(frozen=True)
class NeverRecompute:
    name = "never"

    def decide(self, hypotheses, top: int, o: Trajectory) -> bool:
        return False


@dataclass(frozen=True)
class NearestPlanRecompute:
    """Skip recomputation while the observation stays nearest to the
    top-ranked goal's plan.

    Returns False iff no other goal's plan is strictly closer to the
    latest observed point than the top goal's plan (ties keep the
    current ranking). Before any ranking exists (top is None) there is
    no plan to compare against, so the decision is forced True.
    """

    name = "nearest"

    def decide(self, hypotheses, top: int | None, o: Trajectory) -> bool:
        if top is None:
            return True
        p = o.end
        d_top = math.inf
        d_other = math.inf
        for idx, h in enumerate(hypotheses):
            if h.pruned or h.full is None:
                continue
            d = min_distance(p, h.full)
            if idx == top:
                d_top = d
            elif d < d_other:
                d_other = d
        return d_other < d_top


@dataclass(frozen=True)
class NeverPrune:
    name = "never"

    def decide(self, h, o: Trajectory, prev_point) -> bool:
        return False


@dataclass(frozen=True)
class AngleThresholdPrune:
    """Prune a goal when the agent's heading turns away from its plan.

    u is the movement vector from the previously observed point to the
    new one; v points from the new observation to a reference point a
    short lookahead further along the goal's previous plan (the goal
    itself when the lookahead runs past the plan end). The goal is
    pruned iff the angle between u and v strictly exceeds the
    threshold. Degenerate vectors carry no directional evidence and
    never prune.
    """

    threshold_deg: float = 120.0
    lookahead_fraction: float = 0.05
    name = "angle"

    def __post_init__(self):
        if not 0.0 < self.threshold_deg <= 180.0:
            raise ValueError("threshold must be in (0, 180]")

    def decide(self, h, o: Trajectory, prev_point) -> bool:
        plan = h.full
        if plan is None:
            return False
        u = o.end - prev_point
        _, s = closest_point(o.end, plan)
        lookahead = self.lookahead_fraction * h.ideal_cost
        ref = point_at(plan, min(s + lookahead, length(plan)))
        v = ref - o.end
        try:
            return angle_deg(u, v) > self.threshold_deg
        except DegenerateVectorError:
            return False


def recompute_policy(name: str):
    """Build a recompute policy from its CLI/config name."""
    try:
        return {"always": AlwaysRecompute, "never": NeverRecompute,
                "nearest": NearestPlanRecompute}[name]()
    except KeyError:
        raise ValueError(f"unknown recompute policy {name!r}") from None


def prune_policy(name: str, threshold_deg: float = 120.0):
    """Build a prune policy from its CLI/config name."""
    if name == "never":
        return NeverPrune()
    if name == "angle":
        return AngleThresholdPrune(threshold_deg=threshold_deg)
    raise ValueError(f"unknown prune policy {name!r}")
