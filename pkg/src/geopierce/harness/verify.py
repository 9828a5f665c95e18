"""Independent check of a piercing set.

Distances come from funnel queries on a triangulation built with a different
ear-clipping order than the pipeline's, so the two computations share no
diagonals by construction.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..geodesics import geodesic_distance
from ..kernel import Point, triangulate
from ..mindisk import TAU_PIERCE
from .io import Instance


@dataclass(frozen=True)
class DiskCheck:
    index: int
    nearest: int  # index into the point list, -1 if no point is inside P
    distance: float
    slack: float  # r - distance; >= -tol means pierced


@dataclass(frozen=True)
class VerificationReport:
    disks: tuple[DiskCheck, ...]
    tol: float
    case: str = ""
    runtime: float = 0.0
    outside: tuple[int, ...] = field(default=())

    @property
    def m(self) -> int:
        return len(self.disks)

    @property
    def pierced(self) -> int:
        return sum(d.slack >= -self.tol for d in self.disks)

    @property
    def max_violation(self) -> float:
        """Largest d(c, S) - r over the disks (<= tol iff all pierced)."""
        return max(-d.slack for d in self.disks)

    @property
    def ok(self) -> bool:
        return self.pierced == self.m

    def table(self) -> str:
        rows = [f"{'disk':>5} {'point':>5} {'distance':>14} {'slack':>14}"]
        for d in self.disks:
            flag = "" if d.slack >= -self.tol else "  UNPIERCED"
            rows.append(f"{d.index:>5} {d.nearest:>5} {d.distance:>14.9f} {d.slack:>14.3e}{flag}")
        rows.append(f"pierced {self.pierced}/{self.m}, max violation {self.max_violation:.3e}"
                    + (f", case {self.case}" if self.case else ""))
        return "\n".join(rows)


def verify_piercing(instance: Instance, S, tol: float = TAU_PIERCE) -> VerificationReport:
    """Per-disk nearest piercing point and slack.

    ``S`` is a PiercingSet or a sequence of points.
    """
    t0 = time.perf_counter()
    case = getattr(getattr(S, "case", None), "value", "")
    pts = np.asarray(getattr(S, "points", S), dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("empty piercing set")
    poly = instance.polygon
    tri = triangulate(poly, start=poly.n // 2, reverse=True)
    inside = poly.locate_many(pts) >= 0
    outside = tuple(int(k) for k in np.nonzero(~inside)[0])
    checks = []
    for i, disk in enumerate(instance.disks):
        c = np.asarray(disk.center)
        euclid = np.hypot(*(pts - c).T)
        best, arg = math.inf, -1
        # geodesic >= euclidean, so points are visited nearest first and pruned
        for k in np.argsort(euclid, kind="stable"):
            if not inside[k]:
                continue
            if euclid[k] >= best:
                break
            d = geodesic_distance(poly, tri, disk.center, Point(*pts[k]))
            if d < best:
                best, arg = d, int(k)
        checks.append(DiskCheck(i, arg, best, disk.radius - best))
    return VerificationReport(tuple(checks), tol, case, time.perf_counter() - t0, outside)
