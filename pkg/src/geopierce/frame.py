"""Normalised frame, landmark points and the sweep-defined guard points.

In the frame D* is the unit disk at the origin, the tangent line of D_1 is
``y = -1`` and the tangent triangle has its largest angle at m_{2,3}, with
t_2 in the right half-plane and t_3 in the left one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegenerateTangentTriangle, TangencyNotFound
from .geodesics import DistanceField, GeodesicDisk, SourceSet
from .kernel import (
    EPS_GEOM,
    Line,
    Point,
    SimplePolygon,
    segment_avoids_boundary,
    segments_cross,
    segments_in_polygon,
)
from .mindisk import MinDiskResult

SQRT2 = math.sqrt(2.0)
A_CONST = 3.0 / (4.0 - 2.0 * SQRT2)

G = (Point(2.0, 0.0), Point(0.0, 2.0), Point(-2.0, 0.0), Point(0.0, -2.0))
Z = (Point(A_CONST, A_CONST), Point(-A_CONST, A_CONST), Point(-A_CONST, -A_CONST), Point(A_CONST, -A_CONST))
T_PLUS = (Point(2.0, 1.5), Point(-1.5, 2.0), Point(-2.0, -1.5), Point(1.5, -2.0))
T_MINUS = (Point(2.0, -1.5), Point(1.5, 2.0), Point(-2.0, 1.5), Point(-1.5, -2.0))
DPRIME_CENTERS = (Point(1.0, 0.0), Point(0.0, 1.0), Point(-1.0, 0.0), Point(0.0, -1.0))


def quadrant_contains(q: int, p, eps: float = EPS_GEOM) -> bool:
    """Closed quadrant Q_q, q in 1..4."""
    sx, sy = {1: (1, 1), 2: (-1, 1), 3: (-1, -1), 4: (1, -1)}[q]
    return sx * p[0] >= -eps and sy * p[1] >= -eps


# --------------------------------------------------------------------------
# frame


@dataclass(frozen=True)
class Frame:
    """Similarity (plus optional mirror) into the normalised frame.

    ``apply(p) = M R (p - translation) / scale`` where ``R`` rotates by
    ``rotation`` and ``M`` negates x when ``reflection`` is set.
    ``labels[k]`` is the index of the input disk playing D_{k+1}.
    """

    translation: Point
    scale: float
    rotation: float
    reflection: bool
    labels: tuple[int, int, int]

    @cached_property
    def _rot(self):
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        return np.array([[c, -s], [s, c]])

    def apply(self, pts) -> np.ndarray:
        P = (np.asarray(pts, dtype=float) - np.asarray(self.translation)) / self.scale
        Q = P @ self._rot.T
        if self.reflection:
            Q = Q * np.array([-1.0, 1.0])
        return Q

    def inverse(self, pts) -> np.ndarray:
        Q = np.asarray(pts, dtype=float)
        if self.reflection:
            Q = Q * np.array([-1.0, 1.0])
        return (Q @ self._rot) * self.scale + np.asarray(self.translation)

    def to_frame(self, p) -> Point:
        x, y = self.apply(np.asarray([p], dtype=float))[0]
        return Point(float(x), float(y))

    def from_frame(self, p) -> Point:
        x, y = self.inverse(np.asarray([p], dtype=float))[0]
        return Point(float(x), float(y))

    def mirrored(self) -> "Frame":
        """Mirror x -> -x and swap the roles of D_2 and D_3."""
        l1, l2, l3 = self.labels
        return Frame(self.translation, self.scale, self.rotation, not self.reflection, (l1, l3, l2))


def _sep(a: float, b: float) -> float:
    d = abs(a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d)


def build_frame(result: MinDiskResult, poly=None, disks=None) -> Frame:
    if result.helly or len(result.directions) != 3:
        raise TangencyNotFound("frame needs a non-Helly minimal disk")
    idx = result.tangent_indices
    phi = [math.atan2(u[1], u[0]) for u in result.directions]
    pairs = [(0, 1), (1, 2), (0, 2)]
    seps = [_sep(phi[a], phi[b]) for a, b in pairs]
    for s in seps:
        if s <= 1e-9 or s >= math.pi - 1e-9:
            raise DegenerateTangentTriangle("two tangent lines are parallel")
    # largest angle of the tangent triangle sits between the closest pair
    k = int(np.argmin(seps))
    a, b = pairs[k]
    one = 3 - a - b
    rot = -math.pi / 2 - phi[one]
    rest = []
    for j in (a, b):
        ang = phi[j] + rot
        rest.append((math.cos(ang), j))
    rest.sort(reverse=True)
    two, three = rest[0][1], rest[1][1]
    return Frame(result.cstar, result.rstar, rot, False, (idx[one], idx[two], idx[three]))


# --------------------------------------------------------------------------
# landmarks


@dataclass(frozen=True)
class Landmarks:
    a: float
    g: tuple[Point, ...]
    z: tuple[Point, ...]
    tplus: tuple[Point, ...]
    tminus: tuple[Point, ...]
    t: tuple[Point, Point, Point]
    lines: tuple[Line, Line, Line]
    m: dict
    m_lines: dict
    t_proj: dict
    alpha2: float
    alpha3: float

    def segment(self, name: str) -> tuple[Point, Point]:
        """Segments named like ``"z1g2"``."""
        zi, gj = int(name[1]), int(name[3])
        return self.z[zi - 1], self.g[gj - 1]


def landmarks(frame: Frame, result: MinDiskResult) -> Landmarks:
    pos = {d: k for k, d in enumerate(result.tangent_indices)}
    ts = []
    for d in frame.labels:
        ts.append(frame.to_frame(result.tangency_points[pos[d]]))
    lines = tuple(Line(t, (-t[1], t[0])) for t in ts)
    m, m_lines, t_proj = {}, {}, {}
    for i, j in ((1, 2), (2, 3), (3, 1)):
        p = lines[i - 1].intersect(lines[j - 1])
        if p is None:
            raise DegenerateTangentTriangle(f"tangent lines {i} and {j} are parallel")
        m[(i, j)] = m[(j, i)] = p
        lij = Line(p, (-p[1], p[0]))
        m_lines[(i, j)] = m_lines[(j, i)] = lij
        for a in (i, j):
            ray = Line((0.0, 0.0), ts[a - 1])
            t_proj[(a, j if a == i else i)] = lij.intersect(ray)
    phi2 = math.atan2(ts[1][1], ts[1][0])
    phi3 = math.atan2(ts[2][1], ts[2][0])
    alpha2 = math.pi / 2 - phi2
    alpha3 = (phi3 % (2 * math.pi)) - math.pi / 2
    return Landmarks(A_CONST, G, Z, T_PLUS, T_MINUS, tuple(ts), lines, m, m_lines, t_proj, alpha2, alpha3)


def m12_closed_form(alpha2: float) -> Point:
    """m_{1,2} for l_1 = {y = -1} and l_2 at angle alpha2."""
    return Point((math.cos(alpha2) + 1.0) / math.sin(alpha2), -1.0)


# --------------------------------------------------------------------------
# scene: the instance seen through a frame


class FrameScene:
    """Polygon predicates and disk distances expressed in frame coordinates."""

    def __init__(self, poly: SimplePolygon, disks, frame: Frame, field_: DistanceField | None = None,
                 sources: SourceSet | None = None):
        self.poly = poly
        self.disks = tuple(disks)
        self.frame = frame
        self.field = field_ or DistanceField(poly)
        self.sources = sources or SourceSet(self.field, [d.center for d in self.disks])
        self.eps = EPS_GEOM * frame.scale

    @cached_property
    def vertices(self) -> np.ndarray:
        return self.frame.apply(self.poly.vertices)

    def meets(self, p, q) -> bool:
        """Does the polygon meet segment pq (frame coordinates)?

        True when an endpoint is not strictly inside P or the open segment
        touches the boundary.
        """
        a, b = self.frame.from_frame(p), self.frame.from_frame(q)
        codes = self.poly.locate_many([a, b], self.eps)
        if (codes != 1).any():
            return True
        return not segment_avoids_boundary(self.poly, (a, b), self.eps)

    def contains(self, p) -> bool:
        return bool(self.poly.locate_many([self.frame.from_frame(p)], self.eps)[0] >= 0)

    def chord_distance(self, k: int, p, q) -> float:
        """min over the frame segment pq of d(x, c_k) - r_k, in frame units.

        The segment must lie in P.  The minimiser is an endpoint or the foot
        of the perpendicular from the last bend vertex of its geodesic.
        """
        P0 = np.asarray(self.frame.from_frame(p))
        P1 = np.asarray(self.frame.from_frame(q))
        src = self.sources
        r = self.disks[k].radius
        ends = src.distances_many(np.vstack([P0, P1]))[:, k]
        best = float(ends.min())
        d = P1 - P0
        L2 = float(d @ d)
        if L2 > 0:
            nodes = np.vstack([self.poly.vertices, src.centers[k : k + 1]])
            vals = np.append(src.tables[k], 0.0)
            t = ((nodes - P0) @ d) / L2
            ok = (t > 0) & (t < 1) & np.isfinite(vals)
            if ok.any():
                feet = P0 + t[ok, None] * d
                cand = vals[ok] + np.hypot(*(nodes[ok] - feet).T)
                good = cand < best
                if good.any():
                    vis = segments_in_polygon(self.poly, nodes[ok][good], feet[good])
                    if vis.any():
                        best = min(best, float(cand[good][vis].min()))
        return (best - r) / self.frame.scale


def corollary1_check(frame: Frame, poly: SimplePolygon, eps: float = EPS_GEOM) -> bool:
    """The polygon boundary avoids triangles (g1, c*, g4) and (g3, c*, g4)."""
    V = frame.apply(poly.vertices)
    n = len(V)
    for tri in ((G[0], (0.0, 0.0), G[3]), (G[2], (0.0, 0.0), G[3])):
        T = np.asarray(tri)
        # vertices strictly inside (beyond eps)
        for p in V:
            if _in_triangle_eps(p, T, eps):
                return False
        for i in range(n):
            a, b = V[i], V[(i + 1) % n]
            for j in range(3):
                if segments_cross(a, b, T[j], T[(j + 1) % 3]):
                    return False
    return True


def _in_triangle_eps(p, T, eps) -> bool:
    s = []
    for j in range(3):
        a, b = T[j], T[(j + 1) % 3]
        e = b - a
        s.append((e[0] * (p[1] - a[1]) - e[1] * (p[0] - a[0])) / math.hypot(*e))
    s = np.array(s)
    return bool((s > eps).all() or (s < -eps).all())


def observation7_alpha_bound(frame: Frame, poly: SimplePolygon, lm: Landmarks, scene: FrameScene | None = None) -> list[str]:
    """Implications 'P meets z4g1 or z4g4 => alpha2 > pi/5' (and the alpha3 mirror).

    Returns descriptions of the violated implications.
    """
    scene = scene or FrameScene(poly, [], frame)
    out = []
    if (scene.meets(Z[3], G[0]) or scene.meets(Z[3], G[3])) and not lm.alpha2 > math.pi / 5:
        out.append(f"P meets z4g1 or z4g4 but alpha2 = {lm.alpha2:.6f} <= pi/5")
    if (scene.meets(Z[2], G[2]) or scene.meets(Z[2], G[3])) and not lm.alpha3 > math.pi / 5:
        out.append(f"P meets z3g3 or z3g4 but alpha3 = {lm.alpha3:.6f} <= pi/5")
    return out


# --------------------------------------------------------------------------
# guard points


# canonical construction is g1+; each guard is its image under a symmetry
_GUARD_MAPS = {
    # name: (canonical -> frame, frame -> canonical, stop disk role)
    "g1+": (lambda x, y: (x, y), lambda x, y: (x, y), 3),
    "g1-": (lambda x, y: (x, -y), lambda x, y: (x, -y), 1),
    "g3-": (lambda x, y: (-x, y), lambda x, y: (-x, y), 2),
    "g3+": (lambda x, y: (-x, -y), lambda x, y: (-x, -y), 1),
    "g4-": (lambda x, y: (-y, -x), lambda x, y: (-y, -x), 3),
    "g4+": (lambda x, y: (y, -x), lambda x, y: (-y, x), 2),
}
_QUAD = np.array([[0.0, 0.0], [2.0, 0.0], [A_CONST, A_CONST], [0.0, 2.0]])
THETA_START = -math.pi / 3
THETA_LIMIT = 0.0


def u_on_dprime(theta: float) -> Point:
    """Intersection of the tangent line touching D* at angle theta with D' in Q1."""
    beta = -theta
    psi = math.acos(max(-1.0, min(1.0, 1.0 - math.cos(beta)))) - beta
    return Point(1.0 + math.cos(psi), math.sin(psi)), psi


def _clip_to_quad(a, b):
    """Cyrus-Beck clip of segment ab to the canonical quadrilateral."""
    t0, t1 = 0.0, 1.0
    d = (b[0] - a[0], b[1] - a[1])
    for j in range(4):
        p, q = _QUAD[j], _QUAD[(j + 1) % 4]
        nx, ny = -(q[1] - p[1]), q[0] - p[0]  # inward for a counter-clockwise quad
        num = nx * (a[0] - p[0]) + ny * (a[1] - p[1])
        den = nx * d[0] + ny * d[1]
        if den == 0.0:
            if num < 0:
                return None
            continue
        t = -num / den
        if den > 0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
        if t0 > t1:
            return None
    return (a[0] + t0 * d[0], a[1] + t0 * d[1]), (a[0] + t1 * d[0], a[1] + t1 * d[1])


def _first_touch_angle(e) -> float:
    """Smallest theta in [start, limit] whose tangent line passes through e."""
    rho = math.hypot(e[0], e[1])
    if rho < 1.0:
        return math.inf
    phi = math.atan2(e[1], e[0])
    gam = math.acos(min(1.0, 1.0 / rho))
    best = math.inf
    for th in (phi - gam, phi + gam):
        th = (th - THETA_START) % (2 * math.pi) + THETA_START
        if THETA_START - 1e-15 <= th <= THETA_LIMIT + 1e-15:
            best = min(best, th)
    return best


def _chord(theta: float):
    n = (math.cos(theta), math.sin(theta))
    d = (-n[1], n[0])
    L = 10.0
    return _clip_to_quad((n[0] - L * d[0], n[1] - L * d[1]), (n[0] + L * d[0], n[1] + L * d[1]))


def _lowest_in_dprime(V: np.ndarray) -> float:
    """Smallest y >= 0 of the polygon boundary inside D' = B((1,0), 1); 1 if none."""
    best = 1.0
    n = len(V)
    for i in range(n):
        a, b = V[i], V[(i + 1) % n]
        d = b - a
        f = a - np.array([1.0, 0.0])
        qa, qb, qc = d @ d, 2 * (f @ d), f @ f - 1.0
        disc = qb * qb - 4 * qa * qc
        if qa == 0 or disc < 0:
            continue
        s = math.sqrt(disc)
        lo, hi = max(0.0, (-qb - s) / (2 * qa)), min(1.0, (-qb + s) / (2 * qa))
        if lo > hi:
            continue
        ya, yb = a[1] + lo * d[1], a[1] + hi * d[1]
        if ya < 0 and yb < 0:
            continue
        if ya < 0 or yb < 0:
            cand = 0.0
        else:
            cand = min(ya, yb)
        best = min(best, cand)
    return max(best, 0.0)


@dataclass(frozen=True)
class SweepRecord:
    name: str
    point: Point
    u: Point
    w: Point
    theta: float
    height: float
    stop: str
    degenerate: bool


@dataclass
class GuardPoints:
    gplus: tuple
    gminus: tuple
    dprime_centers: tuple = DPRIME_CENTERS
    records: dict = field(default_factory=dict)

    @property
    def degenerate(self) -> list[str]:
        return [k for k, r in self.records.items() if r.degenerate]


class GuardSweeper:
    """Computes guard points on demand and caches them."""

    def __init__(self, scene: FrameScene, coarse: int = 48, angle_tol: float = 1e-10):
        self.scene = scene
        self.coarse = coarse
        self.angle_tol = angle_tol
        self.records: dict[str, SweepRecord] = {}

    def __call__(self, name: str) -> Point:
        if name == "g2+":
            return Point(-1.0, 1.0)
        if name == "g2-":
            return Point(1.0, 1.0)
        if name not in self.records:
            self.records[name] = self._sweep(name)
        return self.records[name].point

    def _sweep(self, name: str) -> SweepRecord:
        to_frame, to_canon, role = _GUARD_MAPS[name]
        scene = self.scene
        V = np.array([to_canon(x, y) for x, y in scene.vertices])
        n = len(V)
        # polygon contact of the rotating tangent line inside the quadrilateral
        theta_p = math.inf
        for i in range(n):
            piece = _clip_to_quad(V[i], V[(i + 1) % n])
            if piece is None:
                continue
            for e in piece:
                theta_p = min(theta_p, _first_touch_angle(e))
        hi = min(theta_p, THETA_LIMIT)
        # first contact with the stop disk, coarse scan then bisection
        k = scene.frame.labels[role - 1]

        def touches(theta):
            ch = _chord(theta)
            if ch is None:
                return False
            p, q = (to_frame(*ch[0]), to_frame(*ch[1]))
            return scene.chord_distance(k, p, q) <= 0.0

        theta_d = math.inf
        prev = THETA_START
        if touches(THETA_START):
            theta_d = THETA_START
        else:
            for j in range(1, self.coarse + 1):
                th = THETA_START + (hi - THETA_START) * j / self.coarse
                if touches(th):
                    lo_b, hi_b = prev, th
                    while hi_b - lo_b > self.angle_tol:
                        mid = 0.5 * (lo_b + hi_b)
                        if touches(mid):
                            hi_b = mid
                        else:
                            lo_b = mid
                    theta_d = hi_b
                    break
                prev = th
        theta = min(theta_p, theta_d, THETA_LIMIT)
        if theta == THETA_LIMIT and theta_p > THETA_LIMIT and theta_d > THETA_LIMIT:
            stop, degenerate = "limit", True
        else:
            stop, degenerate = ("disk" if theta_d <= theta_p else "polygon"), False
        u, psi_u = u_on_dprime(theta)
        h = _lowest_in_dprime(V)
        w = Point(1.0 + math.sqrt(max(0.0, 1.0 - h * h)), h)
        psi_w = math.asin(min(1.0, h))
        canon = u if psi_u <= psi_w else w
        point = Point(*map(float, to_frame(*canon)))
        return SweepRecord(name, point, Point(*to_frame(*u)), Point(*to_frame(*w)), theta, h, stop, degenerate)


def sweep_guard_points(frame: Frame, poly: SimplePolygon, disks, result: MinDiskResult | None = None,
                       scene: FrameScene | None = None) -> GuardPoints:
    scene = scene or FrameScene(poly, disks, frame)
    sw = GuardSweeper(scene)
    plus = (sw("g1+"), sw("g2+"), sw("g3+"), sw("g4+"))
    minus = (sw("g1-"), sw("g2-"), sw("g3-"), sw("g4-"))
    return GuardPoints(plus, minus, DPRIME_CENTERS, dict(sw.records))
