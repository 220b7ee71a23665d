"""Numeric kernels: compiled fast path with pure-numpy fallback.

The compiled extension (``goalrec.kernels._fast``) is used when it was
built; otherwise the numpy implementation in ``_pure`` is selected.
Setting the environment variable GOALREC_PURE_PYTHON=1 forces the
fallback, which is handy for benchmarking the two against each other.
"""

import os

from . import _pure

if os.environ.get("GOALREC_PURE_PYTHON"):
    _impl = _pure
else:
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

IMPLEMENTATION = "pure" if _impl is _pure else "fast"

BOUNDARY_EPS = _pure.BOUNDARY_EPS

polyline_closest_point = _impl.polyline_closest_point
point_polyline_distance = _impl.point_polyline_distance
segment_intersects_polygon = _impl.segment_intersects_polygon
segment_intersects_box = _impl.segment_intersects_box
nearest_index = _impl.nearest_index
within_radius = _impl.within_radius
