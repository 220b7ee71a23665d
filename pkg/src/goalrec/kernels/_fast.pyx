# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels; see _pure.py for the reference semantics."""

from libc.math cimport INFINITY, sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

BOUNDARY_EPS = 1e-9

cdef double _BOUNDARY_EPS = 1e-9
cdef double _TINY = 1e-300


def polyline_closest_point(p, pts):
    """Closest point on a polyline to ``p``; ties to smallest arc length."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pa = np.ascontiguousarray(p, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pt = np.ascontiguousarray(pts, dtype=np.float64)
    cdef Py_ssize_t k = pt.shape[0]
    cdef Py_ssize_t n = pt.shape[1]
    cdef Py_ssize_t i, j, besti = 0
    cdef double best_d2 = INFINITY, best_t = 0.0
    cdef double seg2, dot, t, d2, diff, c
    if k == 1:
        d2 = 0.0
        for j in range(n):
            diff = pa[j] - pt[0, j]
            d2 += diff * diff
        return pt[0].copy(), 0.0, sqrt(d2)
    for i in range(k - 1):
        seg2 = 0.0
        dot = 0.0
        for j in range(n):
            c = pt[i + 1, j] - pt[i, j]
            seg2 += c * c
            dot += (pa[j] - pt[i, j]) * c
        t = dot / (seg2 if seg2 > _TINY else _TINY)
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        d2 = 0.0
        for j in range(n):
            diff = pa[j] - (pt[i, j] + t * (pt[i + 1, j] - pt[i, j]))
            d2 += diff * diff
        if d2 < best_d2:
            best_d2 = d2
            besti = i
            best_t = t
    cdef double arc = 0.0, seglen
    for i in range(besti):
        seg2 = 0.0
        for j in range(n):
            c = pt[i + 1, j] - pt[i, j]
            seg2 += c * c
        arc += sqrt(seg2)
    seg2 = 0.0
    for j in range(n):
        c = pt[besti + 1, j] - pt[besti, j]
        seg2 += c * c
    seglen = sqrt(seg2)
    arc += best_t * seglen
    proj = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pr = proj
    for j in range(n):
        pr[j] = pt[besti, j] + best_t * (pt[besti + 1, j] - pt[besti, j])
    return proj, arc, sqrt(best_d2)


def point_polyline_distance(p, pts):
    return polyline_closest_point(p, pts)[2]


def segment_intersects_polygon(a, b, normals, offsets):
    """True iff the open segment (a, b) crosses the polygon interior."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] aa = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bb = np.ascontiguousarray(b, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] nn = np.ascontiguousarray(normals, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] oo = np.ascontiguousarray(offsets, dtype=np.float64)
    cdef Py_ssize_t m = oo.shape[0]
    cdef Py_ssize_t i
    cdef double fa, fb, denom, tcross, tmin = 0.0, tmax = 1.0
    for i in range(m):
        fa = nn[i, 0] * aa[0] + nn[i, 1] * aa[1] - oo[i]
        fb = nn[i, 0] * bb[0] + nn[i, 1] * bb[1] - oo[i]
        denom = fb - fa
        if denom == 0.0:
            if fa <= _BOUNDARY_EPS:
                return False
            continue
        tcross = -fa / denom
        if denom > 0.0:
            if tcross > tmin:
                tmin = tcross
        else:
            if tcross < tmax:
                tmax = tcross
        if tmin >= tmax:
            return False
    cdef double tm = 0.5 * (tmin + tmax)
    cdef double mx = aa[0] + tm * (bb[0] - aa[0])
    cdef double my = aa[1] + tm * (bb[1] - aa[1])
    for i in range(m):
        if nn[i, 0] * mx + nn[i, 1] * my - oo[i] <= _BOUNDARY_EPS:
            return False
    return True


def segment_intersects_box(a, b, lo, hi):
    """True iff the open segment (a, b) crosses the open box (lo, hi)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] aa = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bb = np.ascontiguousarray(b, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ll = np.ascontiguousarray(lo, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] hh = np.ascontiguousarray(hi, dtype=np.float64)
    cdef Py_ssize_t d = ll.shape[0]
    cdef Py_ssize_t k, side
    cdef double f0, slope, tcross, tmin = 0.0, tmax = 1.0
    for k in range(d):
        for side in range(2):
            if side == 0:
                f0 = aa[k] - ll[k]
                slope = bb[k] - aa[k]
            else:
                f0 = hh[k] - aa[k]
                slope = aa[k] - bb[k]
            if slope == 0.0:
                if f0 <= _BOUNDARY_EPS:
                    return False
                continue
            tcross = -f0 / slope
            if slope > 0.0:
                if tcross > tmin:
                    tmin = tcross
            else:
                if tcross < tmax:
                    tmax = tcross
            if tmin >= tmax:
                return False
    cdef double tm = 0.5 * (tmin + tmax)
    cdef double coord
    for k in range(d):
        coord = aa[k] + tm * (bb[k] - aa[k])
        if coord - ll[k] <= _BOUNDARY_EPS or hh[k] - coord <= _BOUNDARY_EPS:
            return False
    return True


def nearest_index(nodes, q):
    """Index of the row of ``nodes`` closest to ``q``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] nd = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] qq = np.ascontiguousarray(q, dtype=np.float64)
    cdef Py_ssize_t m = nd.shape[0]
    cdef Py_ssize_t n = nd.shape[1]
    cdef Py_ssize_t i, j, best = 0
    cdef double d2, diff, best_d2 = INFINITY
    for i in range(m):
        d2 = 0.0
        for j in range(n):
            diff = nd[i, j] - qq[j]
            d2 += diff * diff
        if d2 < best_d2:
            best_d2 = d2
            best = i
    return best


def within_radius(nodes, q, r):
    """Indices of rows of ``nodes`` within distance ``r`` of ``q``."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] nd = np.ascontiguousarray(nodes, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] qq = np.ascontiguousarray(q, dtype=np.float64)
    cdef Py_ssize_t m = nd.shape[0]
    cdef Py_ssize_t n = nd.shape[1]
    cdef Py_ssize_t i, j, cnt = 0
    cdef double d2, diff, r2 = r * r
    out = np.empty(m, dtype=np.intp)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] ov = out
    for i in range(m):
        d2 = 0.0
        for j in range(n):
            diff = nd[i, j] - qq[j]
            d2 += diff * diff
        if d2 <= r2:
            ov[cnt] = i
            cnt += 1
    return out[:cnt]
