"""Pure-numpy implementations of the numeric kernels.

Same signatures as the compiled module in ``_fast.pyx``; used as the
fallback when the extension is unavailable.
"""

import numpy as np

# Boundary tolerance for interior tests, in meters (normals are unit length,
# so halfplane values are signed distances).
BOUNDARY_EPS = 1e-9

_TINY = 1e-300


def polyline_closest_point(p, pts):
    """Closest point on a polyline to ``p``.

    Parameters:
        p: query point, shape (n,)
        pts: polyline vertices, shape (k, n), k >= 1

    Returns:
        (projection, arc_length, distance). Ties resolve to the smallest
        arc length (first segment attaining the minimum).
    """
    p = np.asarray(p, dtype=float)
    pts = np.asarray(pts, dtype=float)
    if pts.shape[0] == 1:
        return pts[0].copy(), 0.0, float(np.linalg.norm(p - pts[0]))
    segs = pts[1:] - pts[:-1]
    seg_len2 = np.einsum("ij,ij->i", segs, segs)
    w = p - pts[:-1]
    t = np.einsum("ij,ij->i", w, segs) / np.maximum(seg_len2, _TINY)
    t = np.clip(t, 0.0, 1.0)
    proj = pts[:-1] + t[:, None] * segs
    d2 = np.einsum("ij,ij->i", p - proj, p - proj)
    i = int(np.argmin(d2))
    seg_lens = np.sqrt(seg_len2)
    arc = float(seg_lens[:i].sum() + t[i] * seg_lens[i])
    return proj[i].copy(), arc, float(np.sqrt(d2[i]))


def point_polyline_distance(p, pts):
    """Euclidean distance from ``p`` to the polyline ``pts``."""
    return polyline_closest_point(p, pts)[2]


def segment_intersects_polygon(a, b, normals, offsets):
    """True iff the open segment (a, b) crosses the polygon interior.

    The convex polygon is given as unit inward normals and offsets so that
    a point q is inside the closed region iff normals @ q - offsets >= 0
    componentwise. Endpoints on the boundary and edge/vertex grazing do
    not count as intersection.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    fa = normals @ a - offsets
    fb = normals @ b - offsets
    tmin, tmax = 0.0, 1.0
    for i in range(len(offsets)):
        denom = fb[i] - fa[i]
        if denom == 0.0:
            if fa[i] <= BOUNDARY_EPS:
                return False
            continue
        # Plain-float division: may hit inf for near-parallel segments,
        # which the interval comparisons below handle without warnings.
        tcross = -float(fa[i]) / float(denom)
        if denom > 0.0:
            if tcross > tmin:
                tmin = tcross
        else:
            if tcross < tmax:
                tmax = tcross
        if tmin >= tmax:
            return False
    mid = a + (0.5 * (tmin + tmax)) * (b - a)
    fm = normals @ mid - offsets
    return bool(np.all(fm > BOUNDARY_EPS))


def segment_intersects_box(a, b, lo, hi):
    """True iff the open segment (a, b) crosses the open box (lo, hi)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    tmin, tmax = 0.0, 1.0
    for k in range(len(lo)):
        d = b[k] - a[k]
        for f0, slope in ((a[k] - lo[k], d), (hi[k] - a[k], -d)):
            if slope == 0.0:
                if f0 <= BOUNDARY_EPS:
                    return False
                continue
            tcross = -float(f0) / float(slope)
            if slope > 0.0:
                if tcross > tmin:
                    tmin = tcross
            else:
                if tcross < tmax:
                    tmax = tcross
            if tmin >= tmax:
                return False
    mid = a + (0.5 * (tmin + tmax)) * (b - a)
    return bool(np.all(mid - lo > BOUNDARY_EPS) and np.all(hi - mid > BOUNDARY_EPS))


def nearest_index(nodes, q):
    """Index of the row of ``nodes`` closest to ``q``."""
    diff = nodes - q
    return int(np.argmin(np.einsum("ij,ij->i", diff, diff)))


def within_radius(nodes, q, r):
    """Indices of rows of ``nodes`` within distance ``r`` of ``q``."""
    diff = nodes - q
    d2 = np.einsum("ij,ij->i", diff, diff)
    return np.nonzero(d2 <= r * r)[0]
