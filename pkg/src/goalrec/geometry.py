"""Points, trajectories, worlds and the geometric primitives on them.

All coordinates are in meters. Trajectories are polylines over points in
R^2 or R^3; worlds are axis-aligned bounding boxes with convex polygon
(2D) or axis-aligned box (3D) obstacles. Everything is immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels

#: Geometric equality tolerance, meters.
GEOM_TOL = 1e-9


class DimensionMismatchError(ValueError):
    """Operands live in spaces of different dimension."""


class DegenerateVectorError(ValueError):
    """An angle was requested for a zero-length direction vector."""


def as_point(p) -> np.ndarray:
    """Coerce to a read-only float vector of dimension 2 or 3."""
    arr = np.array(p, dtype=float)
    if arr.ndim != 1 or arr.shape[0] not in (2, 3):
        raise ValueError(f"point must be a 2- or 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    arr.setflags(write=False)
    return arr


class Trajectory:
    """Ordered polyline of >= 1 points sharing one dimension."""

    __slots__ = ("points",)

    def __init__(self, points):
        arr = np.array(points, dtype=float)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] not in (2, 3):
            raise ValueError(f"trajectory must be (k, 2) or (k, 3), got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("trajectory coordinates must be finite")
        arr.setflags(write=False)
        self.points = arr

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def __repr__(self) -> str:
        return f"Trajectory({self.points.shape[0]} pts, length={length(self):.6g})"


def length(t: Trajectory) -> float:
    """Total arc length: sum of Euclidean segment lengths (0 for one point)."""
    pts = t.points
    if pts.shape[0] < 2:
        return 0.0
    return float(np.sqrt(((pts[1:] - pts[:-1]) ** 2).sum(axis=1)).sum())


def concat(a: Trajectory, b: Trajectory) -> Trajectory:
    """Concatenation: traverse ``a`` then ``b``.

    A straight bridging segment is implied when end(a) != start(b), so
    length(result) == length(a) + length(b) + dist(end(a), start(b))
    holds exactly. An exactly coincident join point is deduplicated.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dim {a.dim} vs {b.dim}")
    bpts = b.points
    if np.array_equal(a.end, b.start):
        bpts = bpts[1:]
        if bpts.shape[0] == 0:
            return a
    return Trajectory(np.vstack([a.points, bpts]))


def _cumlengths(pts: np.ndarray) -> np.ndarray:
    seg = np.sqrt(((pts[1:] - pts[:-1]) ** 2).sum(axis=1))
    return np.concatenate([[0.0], np.cumsum(seg)])


def closest_point(p, t: Trajectory) -> tuple[np.ndarray, float]:
    """Point on ``t`` minimizing distance to ``p`` and its arc-length position.

    Ties are broken toward the smallest arc length.
    """
    p = np.asarray(p, dtype=float)
    if p.shape[0] != t.dim:
        raise DimensionMismatchError(f"dim {p.shape[0]} vs {t.dim}")
    proj, arc, _dist = kernels.polyline_closest_point(p, t.points)
    return proj, arc


def min_distance(p, t: Trajectory) -> float:
    """Euclidean distance from point ``p`` to the polyline ``t``."""
    p = np.asarray(p, dtype=float)
    if p.shape[0] != t.dim:
        raise DimensionMismatchError(f"dim {p.shape[0]} vs {t.dim}")
    return kernels.point_polyline_distance(p, t.points)


def point_at(t: Trajectory, s: float) -> np.ndarray:
    """Point at arc length ``s`` along ``t`` (clamped to [0, length])."""
    pts = t.points
    cum = _cumlengths(pts)
    total = cum[-1]
    s = min(max(s, 0.0), total)
    i = int(np.searchsorted(cum, s, side="right")) - 1
    i = min(i, pts.shape[0] - 2) if pts.shape[0] > 1 else 0
    if pts.shape[0] == 1:
        return pts[0].copy()
    seg = cum[i + 1] - cum[i]
    frac = 0.0 if seg == 0.0 else (s - cum[i]) / seg
    return pts[i] + frac * (pts[i + 1] - pts[i])


def remove_prefix(t: Trajectory, s: float) -> Trajectory:
    """Sub-trajectory from arc length ``s`` to the end.

    The first point of the result is interpolated on the containing
    segment, so length(result) == length(t) - s.
    """
    total = length(t)
    if s < -GEOM_TOL or s > total + GEOM_TOL:
        raise ValueError(f"arc length {s} outside [0, {total}]")
    s = min(max(s, 0.0), total)
    if s == 0.0:
        return t
    if s == total:
        return Trajectory(t.end[None, :])
    pts = t.points
    cum = _cumlengths(pts)
    i = int(np.searchsorted(cum, s, side="right")) - 1
    i = min(i, pts.shape[0] - 2)
    seg = cum[i + 1] - cum[i]
    frac = 0.0 if seg == 0.0 else (s - cum[i]) / seg
    first = pts[i] + frac * (pts[i + 1] - pts[i])
    rest = pts[i + 1:]
    if np.array_equal(first, rest[0]):
        return Trajectory(rest)
    return Trajectory(np.vstack([first[None, :], rest]))


def angle_deg(u, v) -> float:
    """Angle between two vectors in degrees, in [0, 180].

    Raises DegenerateVectorError when an operand is shorter than
    GEOM_TOL: such a vector is numerical residue, not a direction.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu < GEOM_TOL or nv < GEOM_TOL:
        raise DegenerateVectorError("zero-length direction vector")
    c = float(np.dot(u, v)) / (nu * nv)
    return math.degrees(math.acos(min(1.0, max(-1.0, c))))


# --- worlds and obstacles -------------------------------------------------


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-aligned box obstacle (also used for world bounds)."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lo, dtype=float)
        hi = np.array(self.hi, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1 or lo.shape[0] not in (2, 3):
            raise ValueError("box corners must be matching 2- or 3-vectors")
        if np.any(hi <= lo):
            raise ValueError("box must have positive extent in every axis")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.shape[0]

    @property
    def vertices(self) -> np.ndarray:
        if self.dim == 2:
            (x0, y0), (x1, y1) = self.lo, self.hi
            return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
        corners = []
        for ix in (self.lo[0], self.hi[0]):
            for iy in (self.lo[1], self.hi[1]):
                for iz in (self.lo[2], self.hi[2]):
                    corners.append([ix, iy, iz])
        return np.array(corners)

    def contains(self, p, strict: bool = False) -> bool:
        p = np.asarray(p, dtype=float)
        if strict:
            eps = kernels.BOUNDARY_EPS
            return bool(np.all(p - self.lo > eps) and np.all(self.hi - p > eps))
        return bool(np.all(p >= self.lo) and np.all(p <= self.hi))

    def segment_intersects(self, a, b) -> bool:
        return kernels.segment_intersects_box(a, b, self.lo, self.hi)


@dataclass(frozen=True, eq=False)
class ConvexPolygon:
    """Convex polygon obstacle in 2D; vertices stored counterclockwise."""

    vertices: np.ndarray
    _normals: np.ndarray = field(init=False, repr=False)
    _offsets: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        verts = np.array(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[0] < 3 or verts.shape[1] != 2:
            raise ValueError("polygon needs >= 3 vertices in 2D")
        area2 = 0.0
        n = verts.shape[0]
        for i in range(n):
            x0, y0 = verts[i]
            x1, y1 = verts[(i + 1) % n]
            area2 += x0 * y1 - x1 * y0
        if area2 < 0:
            verts = verts[::-1].copy()
        edges = np.roll(verts, -1, axis=0) - verts
        nxt = np.roll(edges, -1, axis=0)
        cross = edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]
        if np.any(cross < -GEOM_TOL):
            raise ValueError("polygon is not convex")
        # Inward unit normal of CCW edge (dx, dy) is (-dy, dx).
        lens = np.sqrt((edges**2).sum(axis=1))
        if np.any(lens == 0.0):
            raise ValueError("polygon has duplicate consecutive vertices")
        normals = np.column_stack([-edges[:, 1], edges[:, 0]]) / lens[:, None]
        offsets = np.einsum("ij,ij->i", normals, verts)
        verts.setflags(write=False)
        normals.setflags(write=False)
        offsets.setflags(write=False)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "_normals", normals)
        object.__setattr__(self, "_offsets", offsets)

    @property
    def dim(self) -> int:
        return 2

    def contains(self, p, strict: bool = False) -> bool:
        f = self._normals @ np.asarray(p, dtype=float) - self._offsets
        if strict:
            return bool(np.all(f > kernels.BOUNDARY_EPS))
        return bool(np.all(f >= -kernels.BOUNDARY_EPS))

    def segment_intersects(self, a, b) -> bool:
        return kernels.segment_intersects_polygon(a, b, self._normals, self._offsets)


Obstacle = ConvexPolygon | Box


@dataclass(frozen=True, eq=False)
class World:
    """Bounded region with an obstacle set and collision queries."""

    bounds: Box
    obstacles: tuple[Obstacle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        for ob in self.obstacles:
            if ob.dim != self.dim:
                raise DimensionMismatchError("obstacle dimension differs from bounds")
            if isinstance(ob, Box):
                inside = self.bounds.contains(ob.lo) and self.bounds.contains(ob.hi)
            else:
                inside = all(self.bounds.contains(v) for v in ob.vertices)
            if not inside:
                raise ValueError("obstacle extends outside world bounds")

    @property
    def dim(self) -> int:
        return self.bounds.dim

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.bounds.hi - self.bounds.lo))

    def in_bounds(self, p) -> bool:
        return self.bounds.contains(p)

    def point_free(self, p) -> bool:
        """True iff ``p`` is in bounds and not strictly inside an obstacle."""
        if not self.bounds.contains(p):
            return False
        return not any(ob.contains(p, strict=True) for ob in self.obstacles)

    def segment_free(self, a, b) -> bool:
        return collision_free(a, b, self)


def collision_free(a, b, world: World) -> bool:
    """True iff the open segment (a, b) meets no obstacle interior.

    Endpoints touching obstacle boundaries and edge/vertex grazing are
    allowed.
    """
    return not any(ob.segment_intersects(a, b) for ob in world.obstacles)
