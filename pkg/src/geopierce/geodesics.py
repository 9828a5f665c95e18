"""Geodesic shortest paths, distances, disks and cores inside a simple polygon.

Paths come from the funnel algorithm run over the dual-tree sleeve of a
triangulation.  For repeated distance queries against fixed sources there is
also :class:`DistanceField`, a visibility-graph table that answers
``d(x, c_i)`` for all sources at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse.csgraph import shortest_path as _csgraph_shortest_path

from .errors import GeodesicallyCollinear, InvalidInput, PointOutsidePolygon
from .kernel import (
    EPS_GEOM,
    Line,
    Point,
    SimplePolygon,
    Triangulation,
    _seg_point_dist2,
    as_point,
    dist,
    orient,
    segments_in_polygon,
)


@dataclass(frozen=True)
class GeodesicPath:
    waypoints: tuple[Point, ...]
    length: float

    @classmethod
    def from_points(cls, pts) -> "GeodesicPath":
        pts = tuple(as_point(p) for p in pts)
        return cls(pts, sum(dist(p, q) for p, q in zip(pts, pts[1:])))

    @property
    def source(self) -> Point:
        return self.waypoints[0]

    @property
    def target(self) -> Point:
        return self.waypoints[-1]

    def reversed(self) -> "GeodesicPath":
        return GeodesicPath(self.waypoints[::-1], self.length)

    def segments(self):
        return list(zip(self.waypoints, self.waypoints[1:]))

    def point_at(self, s: float) -> Point:
        """Point at arc length ``s`` from the source (clamped)."""
        if s <= 0:
            return self.source
        for p, q in zip(self.waypoints, self.waypoints[1:]):
            l = dist(p, q)
            if s <= l and l > 0:
                t = s / l
                return Point(p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            s -= l
        return self.target

    def sample(self, k: int) -> list[Point]:
        """``k`` points evenly spaced by arc length, endpoints included."""
        if k == 1:
            return [self.source]
        return [self.point_at(self.length * i / (k - 1)) for i in range(k)]

    def first_direction(self) -> Point | None:
        for q in self.waypoints[1:]:
            d = dist(self.source, q)
            if d > 0:
                return Point((q[0] - self.source[0]) / d, (q[1] - self.source[1]) / d)
        return None


@dataclass(frozen=True)
class GeodesicDisk:
    center: Point
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not (math.isfinite(r) and r > 0):
            raise InvalidInput(f"disk radius must be finite and positive, got {self.radius!r}")
        object.__setattr__(self, "radius", r)


# --------------------------------------------------------------------------
# funnel algorithm


def _check_inside(poly: SimplePolygon, p) -> Point:
    p = as_point(p)
    if poly.locate_many([p])[0] < 0:
        raise PointOutsidePolygon(f"point {tuple(p)} is outside the polygon")
    return p


def _portals(tri: Triangulation, s: Point, t: Point):
    """Left/right portal pairs along the sleeve from s's triangle to t's."""
    poly = tri.polygon
    ts, tt = tri.locate(s), tri.locate(t)
    if ts == tt:
        return []
    path = tri.dual_path(ts, tt)
    pts = poly.points
    out = []
    for a, b in zip(path, path[1:]):
        p, q = tri.shared_edge(a, b)
        out.append((pts[q], pts[p]))
    tol = 1e-12 * max(poly.diameter, 1.0)
    # a portal that has the query point as an endpoint carries no constraint
    while out and (dist(out[0][0], s) <= tol or dist(out[0][1], s) <= tol):
        out.pop(0)
    while out and (dist(out[-1][0], t) <= tol or dist(out[-1][1], t) <= tol):
        out.pop()
    return out


def _funnel(portals, s: Point, t: Point) -> list[Point]:
    portals = [(s, s)] + portals + [(t, t)]
    apex = left = right = s
    apex_i = left_i = right_i = 0
    pts = [s]
    i = 1
    while i < len(portals):
        pl, pr = portals[i]
        if orient(apex, right, pr) >= 0:
            if apex == right or orient(apex, left, pr) < 0:
                right, right_i = pr, i
            else:
                pts.append(left)
                apex, apex_i = left, left_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        if orient(apex, left, pl) <= 0:
            if apex == left or orient(apex, right, pl) > 0:
                left, left_i = pl, i
            else:
                pts.append(right)
                apex, apex_i = right, right_i
                left = right = apex
                left_i = right_i = apex_i
                i = apex_i + 1
                continue
        i += 1
    if pts[-1] != t:
        pts.append(t)
    # drop repeated apexes
    clean = [pts[0]]
    for p in pts[1:]:
        if p != clean[-1]:
            clean.append(p)
    return clean


def shortest_path(poly: SimplePolygon, tri: Triangulation, s, t) -> GeodesicPath:
    s, t = _check_inside(poly, s), _check_inside(poly, t)
    if s == t:
        return GeodesicPath((s, t), 0.0)
    return GeodesicPath.from_points(_funnel(_portals(tri, s, t), s, t))


def geodesic_distance(poly: SimplePolygon, tri: Triangulation, s, t) -> float:
    return shortest_path(poly, tri, s, t).length


def disk_contains(poly: SimplePolygon, tri: Triangulation, disk: GeodesicDisk, p, tol: float = EPS_GEOM) -> bool:
    return geodesic_distance(poly, tri, disk.center, p) <= disk.radius + tol


def first_visible_point(path: GeodesicPath) -> Point:
    """Waypoint preceding the target; the source when the path is one segment."""
    return path.waypoints[-2] if len(path.waypoints) >= 2 else path.waypoints[0]


def path_crossing_with_line(path: GeodesicPath, line: Line, eps: float = EPS_GEOM) -> list[Point]:
    out: list[Point] = []
    for p, q in path.segments():
        sp, sq = line.signed_distance(p), line.signed_distance(q)
        if abs(sp) <= eps and abs(sq) <= eps:
            hits = [p, q]
        elif abs(sp) <= eps:
            hits = [p]
        elif abs(sq) <= eps:
            hits = [q]
        elif sp * sq < 0:
            u = sp / (sp - sq)
            hits = [Point(p[0] + u * (q[0] - p[0]), p[1] + u * (q[1] - p[1]))]
        else:
            hits = []
        for h in hits:
            if not out or dist(out[-1], h) > eps:
                out.append(h)
    return out


# --------------------------------------------------------------------------
# geodesic cores


@dataclass(frozen=True)
class GeodesicCore:
    apexes: tuple[Point, Point, Point]
    sides: tuple[GeodesicPath, GeodesicPath, GeodesicPath]

    @cached_property
    def boundary(self) -> list[Point]:
        """Closed boundary walk a' -> b' -> c' (last point not repeated)."""
        out: list[Point] = []
        for side in self.sides:
            out.extend(side.waypoints[:-1])
        return out

    def contains(self, p, eps: float = EPS_GEOM) -> bool:
        return point_in_core(self, p, eps)


def _divergence(p1: GeodesicPath, p2: GeodesicPath, eps: float) -> tuple[Point, int, int]:
    """Last common point of two paths from the same source.

    Returns the point and, for each path, the index of the first waypoint
    strictly after it.
    """
    w1, w2 = p1.waypoints, p2.waypoints
    cur = w1[0]
    i = j = 1
    while i < len(w1) and j < len(w2):
        a, b = w1[i], w2[j]
        la, lb = dist(cur, a), dist(cur, b)
        if la <= eps:
            i += 1
            continue
        if lb <= eps:
            j += 1
            continue
        ux, uy = (a[0] - cur[0]) / la, (a[1] - cur[1]) / la
        vx, vy = (b[0] - cur[0]) / lb, (b[1] - cur[1]) / lb
        if abs(ux * vy - uy * vx) > 1e-12 or ux * vx + uy * vy < 0:
            break
        if abs(la - lb) <= eps:
            cur = a
            i += 1
            j += 1
        elif la < lb:
            cur = a
            i += 1
        else:
            cur = b
            j += 1
    return cur, i, j


def _subpath(path: GeodesicPath, start: Point, k: int) -> list[Point]:
    """``start`` followed by waypoints from index k on."""
    rest = [p for p in path.waypoints[k:]]
    return [start] + rest


def geodesic_core(poly: SimplePolygon, tri: Triangulation, a, b, c, eps: float = EPS_GEOM) -> GeodesicCore:
    a, b, c = (_check_inside(poly, p) for p in (a, b, c))
    pab = shortest_path(poly, tri, a, b)
    pac = shortest_path(poly, tri, a, c)
    pbc = shortest_path(poly, tri, b, c)
    dab, dac, dbc = pab.length, pac.length, pbc.length
    if (abs(dab + dbc - dac) <= eps or abs(dab + dac - dbc) <= eps or abs(dac + dbc - dab) <= eps):
        raise GeodesicallyCollinear("one point lies on the geodesic between the other two")
    a1, ia_b, ia_c = _divergence(pab, pac, eps)
    b1, ib_c, ib_a = _divergence(pbc, pab.reversed(), eps)
    c1, ic_a, ic_b = _divergence(pac.reversed(), pbc.reversed(), eps)
    # side a'->b': along pab from a' until b'
    side_ab = _trim(_subpath(pab, a1, ia_b), b1)
    side_bc = _trim(_subpath(pbc, b1, ib_c), c1)
    side_ca = _trim(_subpath(pac.reversed(), c1, ic_a), a1)
    sides = tuple(GeodesicPath.from_points(s) for s in (side_ab, side_bc, side_ca))
    return GeodesicCore((a1, b1, c1), sides)


def _trim(pts: list[Point], end: Point, eps: float = EPS_GEOM) -> list[Point]:
    """Cut a polyline at the first point within eps of ``end``."""
    out = [pts[0]]
    if dist(pts[0], end) <= eps:
        return [pts[0], end]
    for p, q in zip(pts, pts[1:]):
        l = dist(p, q)
        if l > 0:
            t = ((end[0] - p[0]) * (q[0] - p[0]) + (end[1] - p[1]) * (q[1] - p[1])) / (l * l)
            foot = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            if -1e-12 <= t <= 1 + 1e-12 and dist(foot, end) <= eps:
                out.append(end)
                return out
        out.append(q)
    return out


def point_in_core(core: GeodesicCore, p, eps: float = EPS_GEOM) -> bool:
    """Closed containment in the (weakly simple) core polygon."""
    ring = np.asarray(core.boundary, dtype=float)
    if len(ring) < 3:
        return False
    A, B = ring, np.roll(ring, -1, axis=0)
    P = np.asarray([as_point(p)], dtype=float)
    if _seg_point_dist2(P, A, B).min() <= eps * eps:
        return True
    # winding number
    x, y = P[0]
    wn = 0
    for (ax, ay), (bx, by) in zip(A, B):
        cr = (bx - ax) * (y - ay) - (by - ay) * (x - ax)
        if ay <= y < by and cr > 0:
            wn += 1
        elif by <= y < ay and cr < 0:
            wn -= 1
    return wn != 0


# --------------------------------------------------------------------------
# distance field


class DistanceField:
    """Visibility-graph distance tables over the polygon vertices.

    ``d(x, c) = |xc|`` when the segment is in P, otherwise the minimum over
    vertices ``v`` visible from ``x`` of ``|xv| + d(v, c)``; the shortest
    path's first bend is such a vertex, so this is exact.
    """

    def __init__(self, poly: SimplePolygon):
        self.polygon = poly
        V = poly.vertices
        n = poly.n
        i, j = np.triu_indices(n, 1)
        vis = segments_in_polygon(poly, V[i], V[j])
        W = np.zeros((n, n))
        w = np.hypot(*(V[i] - V[j]).T)
        W[i[vis], j[vis]] = w[vis]
        W[j[vis], i[vis]] = w[vis]
        self.vertex_visibility = W > 0
        self.vertex_distances = _csgraph_shortest_path(W, method="D", directed=False)

    def visibility(self, x, targets) -> np.ndarray:
        T = np.asarray(targets, dtype=float).reshape(-1, 2)
        S = np.broadcast_to(np.asarray(x, dtype=float).reshape(1, 2), T.shape)
        return segments_in_polygon(self.polygon, S, T)

    def visibility_many(self, X, targets) -> np.ndarray:
        """Visibility matrix (len(X), len(targets))."""
        X = np.asarray(X, dtype=float).reshape(-1, 2)
        T = np.asarray(targets, dtype=float).reshape(-1, 2)
        S = np.repeat(X, len(T), axis=0)
        E = np.tile(T, (len(X), 1))
        return segments_in_polygon(self.polygon, S, E).reshape(len(X), len(T))

    def vertex_table(self, c) -> np.ndarray:
        """Geodesic distance from ``c`` to every polygon vertex."""
        V = self.polygon.vertices
        vis = self.visibility(c, V)
        if not vis.any():
            raise PointOutsidePolygon(f"point {tuple(c)} sees no vertex")
        direct = np.hypot(*(V[vis] - np.asarray(c, dtype=float)).T)
        return (direct[:, None] + self.vertex_distances[vis]).min(axis=0)

    def distance(self, p, q) -> float:
        p, q = as_point(p), as_point(q)
        return float(self.sources([q]).distances(p)[0])

    def sources(self, centers) -> "SourceSet":
        return SourceSet(self, centers)


class SourceSet:
    """Distances from arbitrary query points to a fixed set of sources."""

    def __init__(self, field: DistanceField, centers):
        self.field = field
        C = np.asarray(centers, dtype=float).reshape(-1, 2)
        self.centers = C
        V = field.polygon.vertices
        m, n = len(C), len(V)
        if m == 0:
            self.tables = np.zeros((0, n))
            return
        S = np.repeat(C, n, axis=0)
        T = np.tile(V, (m, 1))
        vis = segments_in_polygon(field.polygon, S, T).reshape(m, n)
        if not vis.any(axis=1).all():
            raise PointOutsidePolygon("a source sees no polygon vertex")
        direct = np.hypot(C[:, None, 0] - V[None, :, 0], C[:, None, 1] - V[None, :, 1])
        self._direct = np.where(vis, direct, np.inf)
        self.tables = (self._direct[:, :, None] + field.vertex_distances[None, :, :]).min(axis=1)

    def pairwise(self) -> np.ndarray:
        """Symmetric matrix of geodesic distances between the sources."""
        C = self.centers
        m = len(C)
        i, j = np.triu_indices(m, 1)
        vis = segments_in_polygon(self.field.polygon, C[i], C[j])
        via = (self._direct[i] + self.tables[j]).min(axis=1)
        d = np.where(vis, np.hypot(*(C[i] - C[j]).T), via)
        out = np.zeros((m, m))
        out[i, j] = d
        out[j, i] = d
        return out

    def evaluate(self, x):
        """Distances from ``x`` to each source and the first node on each path.

        ``anchor[i] == -1`` means the source itself is visible from ``x``.
        """
        V = self.field.polygon.vertices
        n = len(V)
        x = np.asarray(x, dtype=float)
        vis = self.field.visibility(x, np.vstack([V, self.centers]))
        vv, vc = vis[:n], vis[n:]
        m = len(self.centers)
        dist_out = np.full(m, np.inf)
        anchor = np.full(m, -2, dtype=int)
        if vv.any():
            idx = np.nonzero(vv)[0]
            dx = np.hypot(*(V[idx] - x).T)
            tot = dx[None, :] + self.tables[:, idx]
            k = np.argmin(tot, axis=1)
            dist_out = tot[np.arange(m), k]
            anchor = idx[k]
        if vc.any():
            direct = np.hypot(*(self.centers - x).T)
            better = vc & (direct <= dist_out)
            dist_out = np.where(better, direct, dist_out)
            anchor = np.where(better, -1, anchor)
        return dist_out, anchor

    def distances(self, x) -> np.ndarray:
        return self.evaluate(x)[0]

    def distances_many(self, X) -> np.ndarray:
        """Distance matrix (len(X), m) for many query points in one batch."""
        V = self.field.polygon.vertices
        X = np.asarray(X, dtype=float).reshape(-1, 2)
        n, m, k = len(V), len(self.centers), len(X)
        T = np.vstack([V, self.centers])
        vis = self.field.visibility_many(X, T)
        vv, vc = vis[:, :n], vis[:, n:]
        dxv = np.hypot(X[:, None, 0] - V[None, :, 0], X[:, None, 1] - V[None, :, 1])
        dxv = np.where(vv, dxv, np.inf)
        out = (dxv[:, None, :] + self.tables[None, :, :]).min(axis=2)
        direct = np.hypot(X[:, None, 0] - self.centers[None, :, 0], X[:, None, 1] - self.centers[None, :, 1])
        return np.where(vc, np.minimum(direct, out), out)

    def successor(self, i: int, v: int) -> np.ndarray:
        """Node after vertex ``v`` on the shortest path from ``v`` to source ``i``."""
        V = self.field.polygon.vertices
        cand = np.where(self.field.vertex_visibility[v], np.hypot(*(V - V[v]).T) + self.tables[i], np.inf)
        k = int(np.argmin(cand))
        if self._direct[i, v] <= cand[k]:
            return self.centers[i]
        return V[k]

    def anchor_points(self, anchor: np.ndarray) -> np.ndarray:
        V = self.field.polygon.vertices
        return np.where((anchor < 0)[:, None], self.centers, V[np.maximum(anchor, 0)])
