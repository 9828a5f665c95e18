"""Input coercion shared by the estimator and the CLI."""
from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .errors import InvalidInput, PointOutsidePolygon
from .geodesics import GeodesicDisk
from .kernel import SimplePolygon, validate_polygon


def check_polygon(polygon) -> SimplePolygon:
    if isinstance(polygon, SimplePolygon):
        return polygon
    if polygon is None:
        raise InvalidInput("a polygon is required")
    try:
        V = check_array(polygon, dtype=float, ensure_min_samples=3)
    except ValueError as exc:
        raise InvalidInput(str(exc)) from exc
    if V.shape[1] != 2:
        raise InvalidInput(f"polygon vertices must have 2 columns, got {V.shape[1]}")
    return validate_polygon(V)


def check_disks(X, poly: SimplePolygon | None = None) -> tuple[GeodesicDisk, ...]:
    """Rows ``(cx, cy, r)`` to disks; centers must lie in ``poly`` when given."""
    if len(X) and isinstance(X[0], GeodesicDisk):
        disks = tuple(X)
    else:
        try:
            A = check_array(X, dtype=float)
        except ValueError as exc:
            raise InvalidInput(str(exc)) from exc
        if A.shape[1] != 3:
            raise InvalidInput(f"disks must be rows (cx, cy, r), got {A.shape[1]} columns")
        disks = tuple(GeodesicDisk((float(a), float(b)), float(r)) for a, b, r in A)
    if poly is not None:
        codes = poly.locate_many(np.array([d.center for d in disks]))
        if (codes < 0).any():
            k = int(np.argmax(codes < 0))
            raise PointOutsidePolygon(f"disk {k} has its center outside the polygon")
    return disks
