"""Motion planners sharing one contract: plan(query) -> PlanResult.

Two implementations are provided. VisibilityPlanner is a deterministic
exact-optimal planner for 2D polygonal worlds (visibility graph over
obstacle vertices plus Dijkstra). RRTStarPlanner is a seeded sampling
planner with rewiring, usable in 2D and 3D. InstrumentedPlanner wraps
any planner and counts calls, failures and wall time.
"""

from __future__ import annotations

import heapq
import math
import threading
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .geometry import Trajectory, World, length


class InvalidQueryError(ValueError):
    """Query is malformed (e.g. start or goal inside an obstacle).

    Distinct from planning failure: a failure is a valid query the
    planner could not solve within budget.
    """


@dataclass(frozen=True)
class Budget:
    max_iterations: int = 2000
    max_seconds: float | None = None

    def __post_init__(self):
        if self.max_iterations <= 0:
            raise ValueError("max_iterations must be positive")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise ValueError("max_seconds must be positive")


@dataclass(frozen=True, eq=False)
class PlannerQuery:
    start: np.ndarray
    goal: np.ndarray
    world: World
    budget: Budget = field(default_factory=Budget)


@dataclass(frozen=True, eq=False)
class PlanResult:
    trajectory: Trajectory | None = None
    reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.trajectory is not None

    @property
    def cost(self) -> float:
        return length(self.trajectory) if self.trajectory is not None else math.inf


@dataclass
class PlannerStats:
    calls: int = 0
    total_time: float = 0.0
    failures: int = 0


def _validate_query(q: PlannerQuery) -> None:
    start = np.asarray(q.start, dtype=float)
    goal = np.asarray(q.goal, dtype=float)
    if start.shape != goal.shape or start.shape[0] != q.world.dim:
        raise InvalidQueryError("start/goal dimension does not match world")
    for name, p in (("start", start), ("goal", goal)):
        if not q.world.in_bounds(p):
            raise InvalidQueryError(f"{name} outside world bounds")
        if not q.world.point_free(p):
            raise InvalidQueryError(f"{name} inside an obstacle")


class VisibilityPlanner:
    """Exact shortest paths in 2D polygonal worlds; fully deterministic.

    The obstacle-vertex visibility graph is built once per world and
    cached, so repeated queries in the same world only pay for
    connecting start and goal.
    """

    def __init__(self):
        self._cache: dict[int, tuple[World, np.ndarray, np.ndarray]] = {}

    def _world_graph(self, world: World) -> tuple[np.ndarray, np.ndarray]:
        key = id(world)
        hit = self._cache.get(key)
        if hit is not None and hit[0] is world:
            return hit[1], hit[2]
        verts = []
        for ob in world.obstacles:
            vs = ob.vertices if hasattr(ob, "vertices") else ob.vertices
            for v in np.asarray(vs, dtype=float):
                if world.point_free(v):
                    verts.append(v)
        nodes = np.array(verts, dtype=float) if verts else np.empty((0, 2))
        m = nodes.shape[0]
        dist = np.full((m, m), np.inf)
        for i in range(m):
            for j in range(i + 1, m):
                if world.segment_free(nodes[i], nodes[j]):
                    d = float(np.linalg.norm(nodes[i] - nodes[j]))
                    dist[i, j] = dist[j, i] = d
        self._cache[key] = (world, nodes, dist)
        return nodes, dist

    def plan(self, q: PlannerQuery) -> PlanResult:
        _validate_query(q)
        if q.world.dim != 2:
            raise InvalidQueryError("visibility planner supports 2D worlds only")
        start = np.asarray(q.start, dtype=float)
        goal = np.asarray(q.goal, dtype=float)
        if np.array_equal(start, goal):
            return PlanResult(trajectory=Trajectory(start[None, :]))
        if q.world.segment_free(start, goal):
            return PlanResult(trajectory=Trajectory(np.vstack([start, goal])))
        vnodes, vdist = self._world_graph(q.world)
        m = vnodes.shape[0]
        # Node indexing: 0 = start, 1 = goal, 2.. = obstacle vertices.
        n = m + 2
        nodes = np.vstack([start[None, :], goal[None, :], vnodes]) if m else np.vstack([start, goal])
        adj = np.full((n, n), np.inf)
        adj[2:, 2:] = vdist
        for idx, p in ((0, start), (1, goal)):
            for j in range(m):
                if q.world.segment_free(p, vnodes[j]):
                    d = float(np.linalg.norm(p - vnodes[j]))
                    adj[idx, 2 + j] = adj[2 + j, idx] = d
        dist = np.full(n, np.inf)
        dist[0] = 0.0
        prev = np.full(n, -1, dtype=int)
        done = np.zeros(n, dtype=bool)
        heap = [(0.0, 0)]
        while heap:
            du, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            if u == 1:
                break
            row = adj[u]
            for v in range(n):
                if row[v] < np.inf and not done[v]:
                    nd = du + row[v]
                    if nd < dist[v]:
                        dist[v] = nd
                        prev[v] = u
                        heapq.heappush(heap, (nd, v))
        if not math.isfinite(dist[1]):
            return PlanResult(reason="unreachable")
        path = []
        u = 1
        while u != -1:
            path.append(nodes[u])
            u = prev[u]
        path.reverse()
        return PlanResult(trajectory=Trajectory(np.array(path)))


class RRTStarPlanner:
    """Seeded sampling planner with rewiring; deterministic given a seed.

    Per-call seeds default to a deterministic stream derived from the
    constructor seed, so a fresh planner instance replays identically.
    The returned cost is non-increasing in the iteration budget for a
    fixed seed.
    """

    def __init__(self, seed: int = 0, goal_bias: float = 0.05,
                 steer_fraction: float = 0.02, gamma: float | None = None,
                 goal_tolerance: float = 1e-6):
        self.seed = seed
        self.goal_bias = goal_bias
        self.steer_fraction = steer_fraction
        self.gamma = gamma
        self.goal_tolerance = goal_tolerance
        self._call_index = 0

    def plan(self, q: PlannerQuery, seed: int | None = None) -> PlanResult:
        _validate_query(q)
        if seed is None:
            seed_key = (self.seed, self._call_index)
            self._call_index += 1
        else:
            seed_key = (seed,)
        rng = np.random.default_rng(np.random.SeedSequence(list(seed_key)))
        world = q.world
        start = np.asarray(q.start, dtype=float)
        goal = np.asarray(q.goal, dtype=float)
        if np.array_equal(start, goal):
            return PlanResult(trajectory=Trajectory(start[None, :]))

        d = world.dim
        diag = world.diagonal
        step = self.steer_fraction * diag
        gamma = self.gamma if self.gamma is not None else 2.0 * diag
        lo, hi = world.bounds.lo, world.bounds.hi
        max_iter = q.budget.max_iterations
        deadline = (time.perf_counter() + q.budget.max_seconds
                    if q.budget.max_seconds is not None else None)

        cap = max_iter + 1
        nodes = np.empty((cap, d))
        parent = np.full(cap, -1, dtype=int)
        cost = np.full(cap, np.inf)
        children: list[list[int]] = [[] for _ in range(cap)]
        nodes[0] = start
        cost[0] = 0.0
        n = 1
        goal_links: dict[int, float] = {}

        if float(np.linalg.norm(start - goal)) <= step and world.segment_free(start, goal):
            goal_links[0] = float(np.linalg.norm(start - goal))

        for _ in range(max_iter):
            if deadline is not None and time.perf_counter() > deadline:
                break
            if rng.random() < self.goal_bias:
                target = goal
            else:
                target = lo + rng.random(d) * (hi - lo)
            ni = kernels.nearest_index(nodes[:n], target)
            delta = target - nodes[ni]
            dist_t = float(np.linalg.norm(delta))
            if dist_t < 1e-12:
                continue
            xnew = target if dist_t <= step else nodes[ni] + (step / dist_t) * delta
            if not world.point_free(xnew):
                continue
            radius = min(gamma * (math.log(n + 1) / (n + 1)) ** (1.0 / d), 5.0 * step)
            radius = max(radius, step)
            near = kernels.within_radius(nodes[:n], xnew, radius)
            # Choose the cheapest collision-free parent among neighbors.
            cand = [(cost[i] + float(np.linalg.norm(nodes[i] - xnew)), int(i)) for i in near]
            cand.append((cost[ni] + dist_t if dist_t <= step else
                         cost[ni] + step, int(ni)))
            cand.sort()
            best = -1
            best_cost = np.inf
            for c, i in cand:
                if c >= best_cost:
                    break
                if world.segment_free(nodes[i], xnew):
                    best, best_cost = i, c
                    break
            if best < 0:
                continue
            new = n
            nodes[new] = xnew
            parent[new] = best
            cost[new] = best_cost
            children[best].append(new)
            n += 1
            # Rewire neighbors through the new node when it is cheaper.
            for i in near:
                i = int(i)
                c = best_cost + float(np.linalg.norm(nodes[i] - xnew))
                if c < cost[i] - 1e-12 and world.segment_free(xnew, nodes[i]):
                    children[parent[i]].remove(i)
                    parent[i] = new
                    children[new].append(i)
                    drop = cost[i] - c
                    stack = [i]
                    while stack:
                        j = stack.pop()
                        cost[j] -= drop
                        stack.extend(children[j])
            dg = float(np.linalg.norm(xnew - goal))
            if dg <= max(step, self.goal_tolerance) and world.segment_free(xnew, goal):
                goal_links[new] = dg

        if not goal_links:
            return PlanResult(reason="budget exhausted without reaching goal")
        best_node = -1
        best_total = np.inf
        for i, dg in goal_links.items():
            total = cost[i] + dg
            if total < best_total:
                best_node, best_total = i, total
        path = []
        u = best_node
        while u != -1:
            path.append(nodes[u])
            u = parent[u]
        path.reverse()
        if float(np.linalg.norm(path[-1] - goal)) > 0.0:
            path.append(goal)
        return PlanResult(trajectory=Trajectory(np.array(path)))


class InstrumentedPlanner:
    """Transparent wrapper accumulating PlannerStats; thread-safe."""

    def __init__(self, planner):
        self.wrapped = planner
        self.stats = PlannerStats()
        self._lock = threading.Lock()

    def plan(self, q: PlannerQuery, **kwargs) -> PlanResult:
        t0 = time.perf_counter()
        try:
            result = self.wrapped.plan(q, **kwargs)
        except Exception:
            with self._lock:
                self.stats.calls += 1
                self.stats.failures += 1
                self.stats.total_time += time.perf_counter() - t0
            raise
        with self._lock:
            self.stats.calls += 1
            if not result.ok:
                self.stats.failures += 1
            self.stats.total_time += time.perf_counter() - t0
        return result


def instrument(planner) -> InstrumentedPlanner:
    """Wrap a planner so calls, failures and wall time are counted."""
    if isinstance(planner, InstrumentedPlanner):
        return planner
    return InstrumentedPlanner(planner)
