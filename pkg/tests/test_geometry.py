import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goalrec.geometry import (
    Box,
    ConvexPolygon,
    DegenerateVectorError,
    DimensionMismatchError,
    Trajectory,
    World,
    angle_deg,
    closest_point,
    collision_free,
    concat,
    length,
    min_distance,
    point_at,
    remove_prefix,
)


def traj(*pts):
    return Trajectory(np.array(pts, dtype=float))


coords = st.floats(-100, 100, allow_nan=False, allow_infinity=False)


@st.composite
def trajectories(draw, min_points=1, max_points=8):
    n = draw(st.integers(min_points, max_points))
    pts = [[draw(coords), draw(coords)] for _ in range(n)]
    return Trajectory(np.array(pts))


class TestLength:
    def test_single_point(self):
        assert length(traj((0, 0))) == 0.0

    def test_345(self):
        assert length(traj((0, 0), (3, 4))) == 5.0

    def test_unit_segments(self):
        assert length(traj((0, 0), (1, 0), (1, 1), (0, 1))) == pytest.approx(3.0)


class TestConcat:
    def test_shared_endpoint(self):
        c = concat(traj((0, 0), (1, 0)), traj((1, 0), (2, 0)))
        assert np.array_equal(c.points, [[0, 0], [1, 0], [2, 0]])
        assert length(c) == pytest.approx(2.0)

    def test_degenerate(self):
        c = concat(traj((0, 0)), traj((0, 0)))
        assert np.array_equal(c.points, [[0, 0]])
        assert length(c) == 0.0

    def test_bridge_inserted(self):
        c = concat(traj((0, 0), (1, 0)), traj((2, 0), (3, 0)))
        assert length(c) == pytest.approx(3.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            concat(traj((0, 0)), Trajectory(np.zeros((1, 3))))

    @given(trajectories(), trajectories())
    def test_length_identity(self, a, b):
        bridge = float(np.linalg.norm(a.end - b.start))
        assert length(concat(a, b)) == pytest.approx(
            length(a) + length(b) + bridge, abs=1e-9)


class TestClosestPoint:
    def test_perpendicular_foot(self):
        q, s = closest_point(np.array([0.5, 1.0]), traj((0, 0), (1, 0)))
        assert np.allclose(q, [0.5, 0.0])
        assert s == pytest.approx(0.5)

    def test_point_on_trajectory(self):
        t = traj((0, 0), (2, 0))
        q, s = closest_point(np.array([1.0, 0.0]), t)
        assert np.allclose(q, [1.0, 0.0])
        assert s == pytest.approx(1.0)

    def test_corner(self):
        # Frozen from a brute-force scan over 100k evenly spaced polyline points.
        q, s = closest_point(np.array([2.0, 2.0]), traj((0, 0), (1, 0), (1, 1)))
        assert np.allclose(q, [1.0, 1.0])
        assert s == pytest.approx(2.0)

    def test_brute_force_dense_sampling(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            pts = rng.uniform(-5, 5, size=(5, 2))
            t = Trajectory(pts)
            p = rng.uniform(-5, 5, size=2)
            q, s = closest_point(p, t)
            total = length(t)
            dense = [point_at(t, total * i / 20000) for i in range(20001)]
            dmin = min(float(np.linalg.norm(p - d)) for d in dense)
            assert float(np.linalg.norm(p - q)) <= dmin + 1e-6

    def test_tie_breaks_to_smallest_arclength(self):
        # Symmetric U shape: both ends equidistant from the probe.
        t = traj((0, 0), (0, 1), (2, 1), (2, 0))
        q, s = closest_point(np.array([1.0, 0.0]), t)
        assert s <= length(t) / 2

    @given(trajectories(min_points=2), st.tuples(coords, coords))
    def test_never_beaten_by_vertices(self, t, p):
        p = np.array(p)
        d = min_distance(p, t)
        for v in t.points:
            assert d <= float(np.linalg.norm(p - v)) + 1e-9


class TestRemovePrefix:
    def test_zero(self):
        t = traj((0, 0), (2, 0))
        assert np.array_equal(remove_prefix(t, 0.0).points, t.points)

    def test_full(self):
        t = traj((0, 0), (2, 0))
        r = remove_prefix(t, length(t))
        assert np.array_equal(r.points, [[2, 0]])

    def test_interpolated(self):
        r = remove_prefix(traj((0, 0), (2, 0)), 0.5)
        assert np.allclose(r.points, [[0.5, 0], [2, 0]])

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            remove_prefix(traj((0, 0), (1, 0)), 2.0)
        with pytest.raises(ValueError):
            remove_prefix(traj((0, 0), (1, 0)), -0.5)

    @given(trajectories(min_points=2), st.floats(0, 1), st.floats(0, 1))
    @settings(max_examples=60)
    def test_composition(self, t, f1, f2):
        total = length(t)
        s1 = f1 * total
        s2 = f2 * (total - s1)
        once = remove_prefix(t, s1 + s2)
        twice = remove_prefix(remove_prefix(t, s1), s2)
        assert length(once) == pytest.approx(length(twice), abs=1e-9)
        assert np.allclose(once.end, twice.end)


class TestAngle:
    def test_parallel(self):
        assert angle_deg((1, 0), (1, 0)) == pytest.approx(0.0)

    def test_antiparallel(self):
        assert angle_deg((1, 0), (-1, 0)) == pytest.approx(180.0)

    def test_45(self):
        assert angle_deg((1, 0), (1, 1)) == pytest.approx(45.0)

    def test_degenerate(self):
        with pytest.raises(DegenerateVectorError):
            angle_deg((0, 0), (1, 0))

    @given(st.tuples(coords, coords), st.tuples(coords, coords),
           st.floats(0.01, 50), st.floats(0.01, 50))
    def test_symmetric_and_scale_invariant(self, u, v, a, b):
        u, v = np.array(u), np.array(v)
        if np.linalg.norm(u) < 1e-3 or np.linalg.norm(v) < 1e-3:
            return
        assert angle_deg(u, v) == pytest.approx(angle_deg(v, u), abs=1e-9)
        # arccos is ill-conditioned near 0 and 180 degrees, hence the
        # loose absolute tolerance.
        assert angle_deg(a * u, b * v) == pytest.approx(angle_deg(u, v), abs=5e-4)


class TestWorldCollision:
    def square_world(self):
        return World(Box(np.array([-5.0, -5.0]), np.array([5.0, 5.0])),
                     (ConvexPolygon(np.array([[-0.5, -0.5], [0.5, -0.5],
                                              [0.5, 0.5], [-0.5, 0.5]])),))

    def test_empty_world(self):
        w = World(Box(np.zeros(2), np.ones(2) * 10))
        assert collision_free(np.array([0.0, 0.0]), np.array([10.0, 10.0]), w)

    def test_through_center(self):
        w = self.square_world()
        assert not collision_free(np.array([-2.0, 0.0]), np.array([2.0, 0.0]), w)

    def test_grazing_vertex(self):
        w = self.square_world()
        # Line y = x - 1 passes exactly through the corner (0.5, -0.5).
        assert collision_free(np.array([-1.0, -2.0]), np.array([2.0, 1.0]), w)

    def test_along_edge(self):
        w = self.square_world()
        assert collision_free(np.array([-2.0, 0.5]), np.array([2.0, 0.5]), w)

    def test_endpoint_on_boundary(self):
        w = self.square_world()
        assert collision_free(np.array([0.5, 0.0]), np.array([2.0, 0.0]), w)

    def test_segment_inside(self):
        w = self.square_world()
        assert not collision_free(np.array([-0.2, 0.0]), np.array([0.2, 0.0]), w)

    def test_box_obstacle_3d(self):
        w = World(Box(np.zeros(3), np.ones(3) * 10),
                  (Box(np.array([4.0, 4.0, 4.0]), np.array([6.0, 6.0, 6.0])),))
        assert not collision_free(np.array([0.0, 5.0, 5.0]),
                                  np.array([10.0, 5.0, 5.0]), w)
        assert collision_free(np.array([0.0, 0.0, 0.0]),
                              np.array([10.0, 0.0, 0.0]), w)

    def test_obstacle_outside_bounds_rejected(self):
        with pytest.raises(ValueError):
            World(Box(np.zeros(2), np.ones(2)),
                  (Box(np.array([0.5, 0.5]), np.array([2.0, 2.0])),))


class TestImmutability:
    def test_trajectory_points_readonly(self):
        t = traj((0, 0), (1, 1))
        with pytest.raises(ValueError):
            t.points[0, 0] = 5.0

    def test_nonconvex_polygon_rejected(self):
        with pytest.raises(ValueError):
            ConvexPolygon(np.array([[0, 0], [2, 0], [1, 0.2], [2, 2], [0, 2]],
                                   dtype=float))

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            Trajectory(np.array([[0.0, np.nan]]))
