import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goalrec.geometry import Trajectory, length
from goalrec.heuristics import (
    AlwaysRecompute,
    AngleThresholdPrune,
    NearestPlanRecompute,
    NeverPrune,
    NeverRecompute,
    prune_policy,
    recompute_policy,
)


def traj(*pts):
    return Trajectory(np.array(pts, dtype=float))


def hyp(full, ideal_cost=None, pruned=False):
    """Minimal hypothesis stand-in: the policies only read these fields."""
    return SimpleNamespace(full=full,
                           ideal_cost=ideal_cost if ideal_cost is not None
                           else (length(full) if full is not None else math.inf),
                           pruned=pruned)


def obs(*pts):
    return Trajectory(np.array(pts, dtype=float))


class TestConstantPolicies:
    def test_always(self):
        assert AlwaysRecompute().decide([], 0, obs((0, 0))) is True

    def test_never(self):
        assert NeverRecompute().decide([], 0, obs((0, 0))) is False

    def test_never_prune(self):
        assert NeverPrune().decide(hyp(traj((0, 0))), obs((0, 0)), np.zeros(2)) is False


class TestNearestPlanRecompute:
    def test_forced_true_before_first_ranking(self):
        assert NearestPlanRecompute().decide([hyp(traj((0, 0)))], None,
                                             obs((0, 0))) is True

    def test_stays_false_on_top_plan(self):
        hs = [hyp(traj((0, 0), (10, 0))), hyp(traj((0, 0), (0, 10)))]
        # Observation on goal 0's plan: no other plan is strictly closer.
        assert NearestPlanRecompute().decide(hs, 0, obs((5, 0))) is False

    def test_true_when_other_plan_closer(self):
        hs = [hyp(traj((0, 0), (10, 0))), hyp(traj((0, 0), (0, 10)))]
        assert NearestPlanRecompute().decide(hs, 0, obs((0.5, 6))) is True

    def test_tie_keeps_ranking(self):
        hs = [hyp(traj((0, 0), (10, 0))), hyp(traj((0, 0), (0, 10)))]
        # Equidistant from both plans: not strictly closer, so no recompute.
        assert NearestPlanRecompute().decide(hs, 0, obs((3, 3))) is False

    def test_ignores_pruned(self):
        hs = [hyp(traj((0, 0), (10, 0))),
              hyp(traj((0, 0), (0, 10)), pruned=True)]
        assert NearestPlanRecompute().decide(hs, 0, obs((0.5, 6))) is False

    @given(st.floats(0.1, 50), st.floats(-5, 5), st.floats(-5, 5))
    @settings(max_examples=60)
    def test_scale_invariant(self, scale, px, py):
        hs = [hyp(traj((0, 0), (10, 0))), hyp(traj((0, 0), (0, 10)))]
        hs_scaled = [hyp(traj((0, 0), (10 * scale, 0))),
                     hyp(traj((0, 0), (0, 10 * scale)))]
        p = obs((px, py))
        p_scaled = obs((px * scale, py * scale))
        assert (NearestPlanRecompute().decide(hs, 0, p)
                == NearestPlanRecompute().decide(hs_scaled, 0, p_scaled))


class TestAngleThresholdPrune:
    def test_moving_along_plan_keeps_goal(self):
        h = hyp(traj((0, 0), (10, 0)))
        p = AngleThresholdPrune()
        assert p.decide(h, obs((1, 0)), np.array([0.0, 0.0])) is False

    def test_moving_directly_away_prunes(self):
        h = hyp(traj((0, 0), (10, 0)))
        p = AngleThresholdPrune()
        # Heading is -x, the plan continues in +x: the angle is 180 degrees.
        assert p.decide(h, obs((-1, 0)), np.array([0.0, 0.0])) is True

    def test_exactly_at_threshold_keeps_goal(self):
        # Plan goes straight up, motion goes straight right: with the
        # observation at the plan start the lookahead reference is
        # directly above, so the angle is exactly 90 degrees, which is
        # not strictly above the threshold.
        h = hyp(traj((0, 0), (0, 10)), ideal_cost=10.0)
        p = AngleThresholdPrune(threshold_deg=90.0)
        prev = np.array([-1.0, 0.0])
        assert p.decide(h, obs((0, 0)), prev) is False
        assert p.decide(h, obs((0.0001, 0)), prev) is True

    def test_degenerate_motion_never_prunes(self):
        h = hyp(traj((0, 0), (10, 0)))
        p = AngleThresholdPrune()
        assert p.decide(h, obs((0, 0)), np.array([0.0, 0.0])) is False

    def test_missing_plan_never_prunes(self):
        p = AngleThresholdPrune()
        assert p.decide(hyp(None), obs((1, 0)), np.zeros(2)) is False

    def test_threshold_validation(self):
        with pytest.raises(ValueError):
            AngleThresholdPrune(threshold_deg=0.0)
        with pytest.raises(ValueError):
            AngleThresholdPrune(threshold_deg=181.0)
        AngleThresholdPrune(threshold_deg=180.0)

    @given(st.floats(10, 170), st.floats(10, 170),
           st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 3))
    @settings(max_examples=150)
    def test_monotone_in_threshold(self, t1, t2, ex, ey, prev_step):
        """A goal pruned at the higher threshold is pruned at the lower."""
        lo, hi = sorted((t1, t2))
        h = hyp(traj((0, 0), (4, 1), (8, 0)))
        o = obs((ex, ey))
        prev = np.array([ex - prev_step, ey])
        if AngleThresholdPrune(threshold_deg=hi).decide(h, o, prev):
            assert AngleThresholdPrune(threshold_deg=lo).decide(h, o, prev)


class TestFactories:
    def test_recompute_names(self):
        assert isinstance(recompute_policy("always"), AlwaysRecompute)
        assert isinstance(recompute_policy("never"), NeverRecompute)
        assert isinstance(recompute_policy("nearest"), NearestPlanRecompute)

    def test_prune_names(self):
        assert isinstance(prune_policy("never"), NeverPrune)
        p = prune_policy("angle", threshold_deg=90.0)
        assert isinstance(p, AngleThresholdPrune)
        assert p.threshold_deg == 90.0

    def test_unknown_names(self):
        with pytest.raises(ValueError):
            recompute_policy("sometimes")
        with pytest.raises(ValueError):
            prune_policy("sometimes")
