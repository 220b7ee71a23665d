"""Online goal recognition in continuous spaces via motion planning."""

from .geometry import (
    Box,
    ConvexPolygon,
    Trajectory,
    World,
    angle_deg,
    closest_point,
    collision_free,
    concat,
    length,
    remove_prefix,
)
from .heuristics import prune_policy, recompute_policy
from .planners import (
    Budget,
    InstrumentedPlanner,
    PlannerQuery,
    PlanResult,
    RRTStarPlanner,
    VisibilityPlanner,
    instrument,
)
from .recognizer import Problem, Recognizer, RankingResult

__version__ = "0.1.0"

__all__ = [
    "Box", "ConvexPolygon", "Trajectory", "World", "angle_deg",
    "closest_point", "collision_free", "concat", "length", "remove_prefix",
    "prune_policy", "recompute_policy", "Budget", "InstrumentedPlanner",
    "PlannerQuery", "PlanResult", "RRTStarPlanner", "VisibilityPlanner",
    "instrument", "Problem", "Recognizer", "RankingResult", "__version__",
]
