"""Planar primitives, simple polygons and ear-clipping triangulation.

Polygons are stored clockwise as read-only ``(n, 2)`` float arrays.  Most
predicates come in two flavours: a scalar one built on :func:`orient` (with an
exact rational fallback near zero) and a vectorised numpy one used by the
hot loops of the distance field and the verifier.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateVertex, EndpointOutside, InvalidInput, InvariantViolation, NotSimple

EPS_GEOM = 1e-9
_CCW_ERRBOUND = (3.0 + 16.0 * 2.0**-53) * 2.0**-53
_EXACT_BAND = 1e-12


class Point(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    a: Point
    b: Point

    @property
    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    def at(self, t: float) -> Point:
        return Point(self.a[0] + t * (self.b[0] - self.a[0]), self.a[1] + t * (self.b[1] - self.a[1]))


@dataclass(frozen=True)
class Line:
    """Infinite line given by an anchor point and a unit direction."""

    anchor: Point
    direction: Point

    def __post_init__(self):
        dx, dy = float(self.direction[0]), float(self.direction[1])
        norm = math.hypot(dx, dy)
        if not norm > 0 or not math.isfinite(norm):
            raise InvalidInput("line direction must be a finite non-zero vector")
        object.__setattr__(self, "anchor", as_point(self.anchor))
        object.__setattr__(self, "direction", Point(dx / norm, dy / norm))

    @classmethod
    def through(cls, p, q) -> "Line":
        return cls(as_point(p), Point(q[0] - p[0], q[1] - p[1]))

    @property
    def normal(self) -> Point:
        return Point(-self.direction[1], self.direction[0])

    def signed_distance(self, p) -> float:
        """Positive on the left of the direction."""
        nx, ny = self.normal
        return (p[0] - self.anchor[0]) * nx + (p[1] - self.anchor[1]) * ny

    def project(self, p) -> Point:
        dx, dy = self.direction
        t = (p[0] - self.anchor[0]) * dx + (p[1] - self.anchor[1]) * dy
        return Point(self.anchor[0] + t * dx, self.anchor[1] + t * dy)

    def intersect(self, other: "Line") -> Point | None:
        d1, d2 = self.direction, other.direction
        den = d1[0] * d2[1] - d1[1] * d2[0]
        if abs(den) < 1e-15:
            return None
        wx, wy = other.anchor[0] - self.anchor[0], other.anchor[1] - self.anchor[1]
        t = (wx * d2[1] - wy * d2[0]) / den
        return Point(self.anchor[0] + t * d1[0], self.anchor[1] + t * d1[1])


def as_point(p) -> Point:
    try:
        x, y = float(p[0]), float(p[1])
    except (TypeError, IndexError, ValueError) as exc:
        raise InvalidInput(f"not a 2D point: {p!r}") from exc
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidInput(f"non-finite point: {p!r}")
    return Point(x, y)


def orient(a, b, c) -> float:
    """Twice the signed area of (a, b, c); positive for a left turn.

    Swapping ``a`` and ``b`` negates the result exactly.
    """
    if (a[0], a[1]) > (b[0], b[1]):
        return -_orient(b, a, c)
    return _orient(a, b, c)


def _orient(a, b, c) -> float:
    left = (b[0] - a[0]) * (c[1] - a[1])
    right = (b[1] - a[1]) * (c[0] - a[0])
    det = left - right
    # outside both the fixed band and the forward error bound the float sign is right
    if abs(det) > _EXACT_BAND or abs(det) > _CCW_ERRBOUND * (abs(left) + abs(right)):
        return det
    if left == 0.0 and right == 0.0:
        return 0.0
    ax, ay, bx, by, cx, cy = (Fraction(v) for v in (a[0], a[1], b[0], b[1], c[0], c[1]))
    return float((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def dist(p, q) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


def point_segment_distance(p, a, b) -> float:
    dx, dy = b[0] - a[0], b[1] - a[1]
    l2 = dx * dx + dy * dy
    if l2 == 0.0:
        return dist(p, a)
    t = max(0.0, min(1.0, ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / l2))
    return math.hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy)


def segments_cross(a, b, c, d) -> bool:
    """Proper crossing of closed segments ab and cd (interiors meet at one point)."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def segment_line_intersection(a, b, line: Line) -> Point | None:
    sa, sb = line.signed_distance(a), line.signed_distance(b)
    if sa * sb > 0 or sa == sb:
        return None
    t = sa / (sa - sb)
    return Point(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))


def point_in_triangle(p, a, b, c) -> bool:
    """Closed containment in a counter-clockwise triangle."""
    return orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0


def _seg_point_dist2(P, A, B):
    """Squared distances from points ``P`` (N,2) to segments ``A``-``B`` (n,2)."""
    E = B - A
    l2 = np.einsum("ij,ij->i", E, E)
    l2 = np.where(l2 == 0.0, 1.0, l2)
    W = P[:, None, :] - A[None, :, :]
    t = np.clip(np.einsum("kij,ij->ki", W, E) / l2, 0.0, 1.0)
    D = W - t[..., None] * E[None, :, :]
    return np.einsum("kij,kij->ki", D, D)


class Location(Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


_CODE_TO_LOCATION = {1: Location.INSIDE, 0: Location.BOUNDARY, -1: Location.OUTSIDE}


class SimplePolygon:
    """Validated simple polygon with clockwise vertices.  Build it with
    :func:`validate_polygon`; the constructor trusts its input."""

    __slots__ = ("vertices", "__dict__")

    def __init__(self, vertices: np.ndarray):
        v = np.array(vertices, dtype=float)
        v.setflags(write=False)
        self.vertices = v

    def __repr__(self):
        return f"SimplePolygon(n={self.n})"

    def __len__(self):
        return self.n

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Point:
        return Point(float(self.vertices[i, 0]), float(self.vertices[i, 1]))

    @cached_property
    def points(self) -> tuple[Point, ...]:
        return tuple(Point(float(x), float(y)) for x, y in self.vertices)

    @cached_property
    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        a = self.vertices
        b = np.roll(a, -1, axis=0)
        b.setflags(write=False)
        return a, b

    @cached_property
    def area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        return abs(0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)))

    @cached_property
    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d**2).sum(-1)).max())

    @cached_property
    def reflex(self) -> np.ndarray:
        """Boolean mask of reflex vertices (interior angle > pi)."""
        p = self.points
        n = self.n
        # clockwise order: convex vertices turn right
        out = np.array([orient(p[i - 1], p[i], p[(i + 1) % n]) > 0 for i in range(n)])
        out.setflags(write=False)
        return out

    def locate_many(self, pts, eps: float = EPS_GEOM) -> np.ndarray:
        """Codes 1 inside, 0 boundary, -1 outside for an (N,2) array."""
        P = np.asarray(pts, dtype=float).reshape(-1, 2)
        A, B = self.edges
        px, py = P[:, :1], P[:, 1:]
        ay, by = A[:, 1], B[:, 1]
        straddle = (ay > py) != (by > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = A[:, 0] + (py - ay) * (B[:, 0] - A[:, 0]) / (by - ay)
        hits = straddle & (px < xint)
        code = np.where(hits.sum(axis=1) % 2 == 1, 1, -1)
        d2 = _seg_point_dist2(P, A, B).min(axis=1)
        code[d2 <= eps * eps] = 0
        return code

    def locate(self, p, eps: float = EPS_GEOM) -> Location:
        return _CODE_TO_LOCATION[int(self.locate_many([p], eps)[0])]

    def contains(self, p, strict: bool = False) -> bool:
        code = int(self.locate_many([p])[0])
        return code == 1 if strict else code >= 0

    def boundary_distance(self, p) -> float:
        A, B = self.edges
        return float(np.sqrt(_seg_point_dist2(np.asarray([p], dtype=float), A, B).min()))

    def transformed(self, fn) -> "SimplePolygon":
        """Image under a similarity ``fn`` mapping (N,2) arrays; re-oriented clockwise."""
        return validate_polygon(fn(self.vertices), check=False)


def _signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _edge_distances(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Pairwise distances between closed segments i and j, (n,n)."""
    E = B - A

    def cr(u, v):
        return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]

    o1 = cr(E[:, None, :], A[None, :, :] - A[:, None, :])
    o2 = cr(E[:, None, :], B[None, :, :] - A[:, None, :])
    crossing = (o1 * o2 < 0) & (o1.T * o2.T < 0)
    d = np.minimum(_seg_point_dist2(A, A, B), _seg_point_dist2(B, A, B))
    d = np.minimum(d, d.T)
    d = np.sqrt(d)
    d[crossing] = 0.0
    return d


def validate_polygon(vertices: Sequence, check: bool = True) -> SimplePolygon:
    """Return a clockwise :class:`SimplePolygon` or raise.

    Counter-clockwise input is reversed, keeping the first vertex in place.
    """
    try:
        v = np.array(vertices, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInput("polygon must be a sequence of (x, y) pairs") from exc
    if v.ndim != 2 or v.shape[1] != 2:
        raise InvalidInput("polygon must be a sequence of (x, y) pairs")
    if len(v) < 3:
        raise InvalidInput("polygon needs at least 3 vertices")
    if not np.isfinite(v).all():
        raise InvalidInput("polygon has non-finite coordinates")
    n = len(v)
    if check:
        step = np.hypot(*(np.roll(v, -1, axis=0) - v).T)
        if (step <= EPS_GEOM).any():
            raise DegenerateVertex(f"repeated vertex at index {int(np.argmax(step <= EPS_GEOM))}")
        pts = [tuple(p) for p in v]
        for i in range(n):
            if orient(pts[i - 1], pts[i], pts[(i + 1) % n]) == 0.0:
                raise DegenerateVertex(f"collinear vertex at index {i}")
        A, B = v, np.roll(v, -1, axis=0)
        d = _edge_distances(A, B)
        idx = np.arange(n)
        gap = np.abs(idx[:, None] - idx[None, :])
        nonadjacent = (gap > 1) & (gap < n - 1)
        bad = nonadjacent & (d <= EPS_GEOM)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise NotSimple(f"edges {int(i)} and {int(j)} intersect")
        if abs(_signed_area(v)) <= EPS_GEOM:
            raise DegenerateVertex("polygon has zero area")
    if _signed_area(v) > 0:
        v = np.roll(v[::-1], 1, axis=0)
    return SimplePolygon(v)


def point_in_polygon(poly: SimplePolygon, p) -> Location:
    return poly.locate(p)


# --------------------------------------------------------------------------
# segment predicates


def _segment_relations(poly: SimplePolygon, S0: np.ndarray, S1: np.ndarray, eps: float):
    """Proper crossings and vertex incidences of segments with polygon edges.

    Returns ``(proper, on, t, length)``: ``proper[k, j]`` when segment k
    properly crosses edge j, ``on[k, j]`` when vertex j lies on the open
    segment k, ``t[k, j]`` the parameter of vertex j along segment k.
    """
    A, B = poly.edges
    d = S1 - S0
    L = np.hypot(d[:, 0], d[:, 1])
    Ls = np.where(L == 0.0, 1.0, L)
    rA = A[None, :, :] - S0[:, None, :]
    rB = B[None, :, :] - S0[:, None, :]
    oA = d[:, None, 0] * rA[..., 1] - d[:, None, 1] * rA[..., 0]
    oB = d[:, None, 0] * rB[..., 1] - d[:, None, 1] * rB[..., 0]
    E = B - A
    lE = np.hypot(E[:, 0], E[:, 1])
    q0 = S0[:, None, :] - A[None, :, :]
    q1 = S1[:, None, :] - A[None, :, :]
    o0 = E[None, :, 0] * q0[..., 1] - E[None, :, 1] * q0[..., 0]
    o1 = E[None, :, 0] * q1[..., 1] - E[None, :, 1] * q1[..., 0]

    tolS = eps * Ls[:, None]
    tolE = eps * lE[None, :]

    def sgn(o, tol):
        return np.where(o > tol, 1, np.where(o < -tol, -1, 0))

    sA, sB = sgn(oA, tolS), sgn(oB, tolS)
    s0, s1 = sgn(o0, tolE), sgn(o1, tolE)
    proper = (sA * sB < 0) & (s0 * s1 < 0)
    t = np.einsum("kij,kj->ki", rA, d) / (Ls * Ls)[:, None]
    on = (sA == 0) & (t * Ls[:, None] > eps) & ((1.0 - t) * Ls[:, None] > eps)
    return proper, on, t, L


def segments_in_polygon(poly: SimplePolygon, S0, S1, eps: float = EPS_GEOM) -> np.ndarray:
    """Closed containment of each segment S0[k]-S1[k] in the polygon.

    Grazing a reflex vertex or running along an edge counts as contained.
    """
    S0 = np.asarray(S0, dtype=float).reshape(-1, 2)
    S1 = np.asarray(S1, dtype=float).reshape(-1, 2)
    if len(S0) == 0:
        return np.zeros(0, dtype=bool)
    proper, on, t, L = _segment_relations(poly, S0, S1, eps)
    ok = ~proper.any(axis=1)
    mid = 0.5 * (S0 + S1)
    ok &= poly.locate_many(mid, eps) >= 0
    split = ok & on.any(axis=1)
    for k in np.nonzero(split)[0]:
        ts = np.concatenate(([0.0], np.sort(t[k][on[k]]), [1.0]))
        tm = 0.5 * (ts[:-1] + ts[1:])
        pts = S0[k] + tm[:, None] * (S1[k] - S0[k])
        ok[k] = bool((poly.locate_many(pts, eps) >= 0).all())
    short = L <= eps
    if short.any():
        ok[short] = poly.locate_many(S0[short], eps) >= 0
    return ok


def segment_in_polygon(poly: SimplePolygon, a, b) -> bool:
    return bool(segments_in_polygon(poly, [a], [b])[0])


def segment_avoids_boundary(poly: SimplePolygon, s, eps: float = EPS_GEOM) -> bool:
    """True iff the open segment neither crosses nor touches the boundary.

    Contact is allowed only at the segment's own endpoints.
    """
    a, b = as_point(s[0]), as_point(s[1])
    codes = poly.locate_many([a, b], eps)
    if (codes < 0).any():
        raise EndpointOutside(f"segment endpoint outside polygon: {a if codes[0] < 0 else b}")
    S0 = np.asarray([a], dtype=float)
    S1 = np.asarray([b], dtype=float)
    proper, on, _, L = _segment_relations(poly, S0, S1, eps)
    if L[0] <= eps:
        return bool(codes[0] == 1 or codes[1] == 1)
    if proper.any() or on.any():
        return False
    mid = 0.5 * (S0 + S1)
    return bool(poly.locate_many(mid, eps)[0] == 1)


# --------------------------------------------------------------------------
# triangulation


class Triangulation:
    """Ear-clipping triangulation with its dual tree.

    ``triangles`` are counter-clockwise index triples into the polygon's
    vertex array; ``adjacency[k]`` lists the triangles sharing a diagonal
    with triangle ``k``.
    """

    def __init__(self, polygon: SimplePolygon, triangles):
        self.polygon = polygon
        self.triangles = tuple(tuple(int(i) for i in t) for t in triangles)
        edge_owner: dict[tuple[int, int], int] = {}
        adj: list[list[int]] = [[] for _ in self.triangles]
        for k, (a, b, c) in enumerate(self.triangles):
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                other = edge_owner.pop(key, None)
                if other is None:
                    edge_owner[key] = k
                else:
                    adj[k].append(other)
                    adj[other].append(k)
        self.adjacency = tuple(tuple(sorted(a)) for a in adj)
        self._tri_xy = polygon.vertices[np.array(self.triangles, dtype=int)]
        self._parent, self._depth = self._root_tree()

    def __len__(self):
        return len(self.triangles)

    def _root_tree(self):
        m = len(self.triangles)
        parent = [-1] * m
        depth = [0] * m
        seen = [False] * m
        seen[0] = True
        queue = [0]
        for k in queue:
            for j in self.adjacency[k]:
                if not seen[j]:
                    seen[j] = True
                    parent[j] = k
                    depth[j] = depth[k] + 1
                    queue.append(j)
        if not all(seen):
            raise InvariantViolation("triangulation dual graph is disconnected")
        return parent, depth

    def areas(self) -> np.ndarray:
        t = self._tri_xy
        u, v = t[:, 1] - t[:, 0], t[:, 2] - t[:, 0]
        return 0.5 * (u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])

    def centroids(self) -> np.ndarray:
        return self._tri_xy.mean(axis=1)

    def locate(self, p) -> int:
        """Index of the triangle containing ``p`` (most interior if several)."""
        t = self._tri_xy
        px, py = p[0], p[1]

        def cr(a, b):
            return (b[:, 0] - a[:, 0]) * (py - a[:, 1]) - (b[:, 1] - a[:, 1]) * (px - a[:, 0])

        a, b, c = t[:, 0], t[:, 1], t[:, 2]
        w = np.stack([cr(a, b) / np.hypot(*(b - a).T), cr(b, c) / np.hypot(*(c - b).T),
                      cr(c, a) / np.hypot(*(a - c).T)], axis=1)
        return int(np.argmax(w.min(axis=1)))

    def dual_path(self, i: int, j: int) -> list[int]:
        """Triangle indices along the unique dual-tree path from i to j."""
        left, right = [i], [j]
        par, dep = self._parent, self._depth
        while dep[left[-1]] > dep[right[-1]]:
            left.append(par[left[-1]])
        while dep[right[-1]] > dep[left[-1]]:
            right.append(par[right[-1]])
        while left[-1] != right[-1]:
            left.append(par[left[-1]])
            right.append(par[right[-1]])
        right.pop()
        return left + right[::-1]

    def shared_edge(self, i: int, j: int) -> tuple[int, int]:
        """Shared diagonal (p, q) ordered as it runs counter-clockwise in triangle i."""
        ti, tj = self.triangles[i], set(self.triangles[j])
        for k in range(3):
            p, q = ti[k], ti[(k + 1) % 3]
            if p in tj and q in tj:
                return p, q
        raise InvariantViolation(f"triangles {i} and {j} are not adjacent")

    def diagonals(self) -> list[tuple[int, int]]:
        out = set()
        for k, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                p, q = self.shared_edge(k, j)
                out.add((min(p, q), max(p, q)))
        return sorted(out)


def triangulate(poly: SimplePolygon, start: int = 0, reverse: bool = False) -> Triangulation:
    """Ear clipping in O(n^2).

    ``start`` and ``reverse`` change the clipping order; the verifier uses
    them to get a triangulation with different diagonals.
    """
    V = poly.points
    n = poly.n
    ring = list(range(n))[::-1]  # counter-clockwise
    s = start % n
    ring = ring[s:] + ring[:s]
    prv = [0] * n
    nxt = [0] * n
    for k, i in enumerate(ring):
        prv[i] = ring[k - 1]
        nxt[i] = ring[(k + 1) % n]
    reflex = {i for i in range(n) if orient(V[prv[i]], V[i], V[nxt[i]]) <= 0}

    def is_ear(i: int) -> bool:
        a, c = prv[i], nxt[i]
        pa, pb, pc = V[a], V[i], V[c]
        if orient(pa, pb, pc) <= 0:
            return False
        for r in reflex:
            if r in (a, i, c):
                continue
            if point_in_triangle(V[r], pa, pb, pc):
                return False
        return True

    tris = []
    remaining = n
    i = ring[0]
    misses = 0
    while remaining > 3:
        if is_ear(i):
            a, c = prv[i], nxt[i]
            tris.append((a, i, c))
            nxt[a], prv[c] = c, a
            remaining -= 1
            for v in (a, c):
                if v in reflex and orient(V[prv[v]], V[v], V[nxt[v]]) > 0:
                    reflex.discard(v)
            i = a if reverse else c
            misses = 0
        else:
            i = prv[i] if reverse else nxt[i]
            misses += 1
            if misses > remaining:
                raise InvariantViolation("ear clipping found no ear; polygon is not simple")
    tris.append((prv[i], i, nxt[i]))
    return Triangulation(poly, tris)
