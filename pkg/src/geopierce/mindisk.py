"""The minimal disk D* and its tangency data.

``f(x) = max_i d(x, c_i) - r_i`` is minimised by majorize-minimize: at the
current point every term is bounded by ``|y - a_i| + d(a_i, c_i) - r_i``
where ``a_i`` is the first node of the geodesic from ``x`` to ``c_i``.  The
bound is an additively weighted farthest-point problem, which is solved
exactly by an LP-type basis search; a backtracking step keeps the true ``f``
decreasing.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidInput, NotPairwiseIntersecting, OptimizerStalled, TangencyNotFound
from .geodesics import DistanceField, GeodesicDisk, SourceSet, geodesic_distance
from .kernel import EPS_GEOM, Line, Point, SimplePolygon, Triangulation, orient

TAU_TAN = 1e-6
TAU_PIERCE = 1e-7


def depth(poly: SimplePolygon, tri: Triangulation, disks: Sequence[GeodesicDisk], x) -> float:
    """f(x): radius of the smallest disk at x meeting every input disk."""
    if not disks:
        raise InvalidInput("need at least one disk")
    return max(geodesic_distance(poly, tri, x, d.center) - d.radius for d in disks)


def verify_pairwise(poly: SimplePolygon, tri: Triangulation, disks: Sequence[GeodesicDisk], eps: float = EPS_GEOM,
                    field: DistanceField | None = None, sources: SourceSet | None = None) -> bool:
    """All pairs satisfy d(c_i, c_j) <= r_i + r_j + eps.

    With ``field`` (or prebuilt ``sources``) the distances come from the
    visibility-graph table, otherwise from funnel queries on ``tri``.
    """
    if field is not None or sources is not None:
        src = sources if sources is not None else field.sources([d.center for d in disks])
        D = src.pairwise()
        r = np.array([d.radius for d in disks])
        return bool((D <= r[:, None] + r[None, :] + eps).all())
    for i, j in itertools.combinations(range(len(disks)), 2):
        d = geodesic_distance(poly, tri, disks[i].center, disks[j].center)
        if d > disks[i].radius + disks[j].radius + eps:
            return False
    return True


# --------------------------------------------------------------------------
# weighted center: min_x max_i |x - a_i| + w_i


def _solve_one(A, w, i):
    return A[i].copy(), w[i]


def _solve_two(A, w, i, j):
    d = A[j] - A[i]
    L = math.hypot(d[0], d[1])
    if L == 0.0:
        return None
    s = (L + w[j] - w[i]) / 2.0
    if not 0.0 < s < L:
        return None
    return A[i] + (s / L) * d, s + w[i]


def _solve_three(A, w, i, j, k):
    """Points equidistant (in the weighted sense) from three anchors."""
    ai, aj, ak = A[i], A[j], A[k]
    wi, wj, wk = w[i], w[j], w[k]
    # 2 (a_j - a_i).x + 2 t (w_i - w_j) = w_i^2 - w_j^2 - |a_i|^2 + |a_j|^2
    M = np.array([2 * (aj - ai), 2 * (ak - ai)])
    ct = np.array([2 * (wi - wj), 2 * (wi - wk)])
    rhs = np.array([wi * wi - wj * wj - ai @ ai + aj @ aj, wi * wi - wk * wk - ai @ ai + ak @ ak])
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    scale = max(np.abs(M).max(), 1e-300)
    if abs(det) <= 1e-14 * scale * scale:
        return []
    Minv = np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]]) / det
    p = Minv @ rhs
    q = -(Minv @ ct)
    # |p + q t - a_i|^2 = (t - w_i)^2
    e = p - ai
    qa = q @ q - 1.0
    qb = 2 * (e @ q) + 2 * wi
    qc = e @ e - wi * wi
    if abs(qa) < 1e-14:
        roots = [] if abs(qb) < 1e-300 else [-qc / qb]
    else:
        disc = qb * qb - 4 * qa * qc
        if disc < 0:
            if disc < -1e-12 * (qb * qb + abs(4 * qa * qc)):
                return []
            disc = 0.0
        sq = math.sqrt(disc)
        # numerically stable pair
        r1 = (-qb - math.copysign(sq, qb)) / (2 * qa)
        roots = [r1, qc / (qa * r1)] if r1 != 0 else [0.0, -qb / qa]
    out = []
    tmin = max(wi, wj, wk)
    for t in roots:
        if t >= tmin - 1e-12 * (1 + abs(t)):
            out.append((p + q * t, t))
    return out


def _polish(A, w, idx, x, t, iters=3):
    """Newton refinement of the equal-value system for a basis."""
    idx = list(idx)
    for _ in range(iters):
        if len(idx) == 1:
            return x, t
        D = x[None, :] - A[idx]
        r = np.hypot(D[:, 0], D[:, 1])
        if (r == 0).any():
            return x, t
        F = r + w[idx] - t
        if len(idx) == 2:
            # stay on the segment: only t and the split point move
            return x, max(r + w[idx])
        J = np.c_[D / r[:, None], -np.ones(3)]
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            return x, t
        x = x + step[:2]
        t = t + step[2]
    return x, t


def weighted_center(A, w) -> tuple[np.ndarray, float, tuple[int, ...]]:
    """Exact minimiser of max_i |x - a_i| + w_i.

    Iterative basis search: keep the optimal basis of a growing working
    set; the optimum of a set is the cheapest subset solution of size <= 3
    that is feasible for the whole set.
    """
    A = np.asarray(A, dtype=float)
    w = np.asarray(w, dtype=float)
    scale = 1.0 + float(np.abs(A).max()) + float(np.abs(w).max())
    tol = 1e-12 * scale

    def value(x):
        return np.hypot(*(A - x).T) + w

    basis: tuple[int, ...] = (int(np.argmax(w)),)
    x, t = _solve_one(A, w, basis[0])
    for _ in range(10 * len(A) + 10):
        vals = value(x)
        v = int(np.argmax(vals - t))
        if vals[v] <= t + tol:
            return x, float(vals.max()), basis
        work = tuple(sorted(set(basis) | {v}))
        best = None
        for size in (1, 2, 3):
            for sub in itertools.combinations(work, size):
                if size == 1:
                    cands = [_solve_one(A, w, *sub)]
                elif size == 2:
                    c = _solve_two(A, w, *sub)
                    cands = [c] if c is not None else []
                else:
                    cands = _solve_three(A, w, *sub)
                for cx, ct in cands:
                    cv = np.hypot(*(A[list(work)] - cx).T) + w[list(work)]
                    if cv.max() <= ct + tol and (best is None or ct < best[1] - tol * 1e-3):
                        best = (cx, ct, sub)
        if best is None or best[1] < t - tol:
            break
        x, t, basis = best
        x, t = _polish(A, w, basis, x, t)
    vals = value(x)
    return x, float(vals.max()), basis


# --------------------------------------------------------------------------
# minimal disk


@dataclass(frozen=True)
class MinDiskResult:
    cstar: Point
    rstar: float
    helly: bool
    tangent_indices: tuple[int, ...] = ()
    tangency_points: tuple[Point, ...] = ()
    tangent_lines: tuple[Line, ...] = ()
    directions: tuple[Point, ...] = ()
    tangent_set: tuple[int, ...] = ()
    terms: tuple[float, ...] = ()
    iterations: int = 0
    boundary_clearance: float = math.inf
    meta: dict = field(default_factory=dict, compare=False, repr=False)


class _Objective:
    def __init__(self, poly: SimplePolygon, disks: Sequence[GeodesicDisk], field_: DistanceField | None = None):
        self.poly = poly
        self.field = field_ or DistanceField(poly)
        self.src = SourceSet(self.field, [d.center for d in disks])
        self.r = np.array([d.radius for d in disks])

    def terms(self, x):
        d, anchor = self.src.evaluate(x)
        return d - self.r, anchor

    def __call__(self, x) -> float:
        if self.poly.locate_many([x])[0] < 0:
            return math.inf
        return float(self.terms(x)[0].max())

    def model(self, x):
        terms, anchor = self.terms(x)
        x = np.asarray(x, dtype=float)
        A = self.src.anchor_points(anchor)
        # sitting on the anchor vertex flattens the bound; look one node further
        tiny = 1e-12 * max(self.poly.diameter, 1.0)
        for i in np.nonzero((anchor >= 0) & (np.hypot(*(A - x).T) <= tiny))[0]:
            A[i] = self.src.successor(i, anchor[i])
        w = terms - np.hypot(*(A - x).T)
        return A, w, terms, anchor


def _minimize(obj: _Objective, x0, max_iter: int = 200):
    x = np.asarray(x0, dtype=float)
    fx = obj(x)
    scale = max(obj.poly.diameter, 1.0)
    it = 0
    for it in range(1, max_iter + 1):
        A, w, _, _ = obj.model(x)
        y, _, _ = weighted_center(A, w)
        step = y - x
        if math.hypot(*step) <= 1e-14 * scale:
            break
        s = 1.0
        improved = False
        while s > 1e-12:
            cand = x + s * step
            fc = obj(cand)
            if fc < fx - 1e-15 * scale:
                improved = True
                break
            s *= 0.5
        if not improved:
            break
        x, fx = cand, fc
    return x, fx, it


def _angular_gap(us) -> float:
    angs = sorted(math.atan2(u[1], u[0]) for u in us)
    gaps = [(angs[(k + 1) % 3] - angs[k]) % (2 * math.pi) for k in range(3)]
    return min(min(gaps), 2 * math.pi - max(gaps))


def compute_min_disk(
    poly: SimplePolygon,
    tri: Triangulation,
    disks: Sequence[GeodesicDisk],
    *,
    tangency_tol: float = TAU_TAN,
    check_pairwise: bool = True,
    field: DistanceField | None = None,
) -> MinDiskResult:
    if not disks:
        raise InvalidInput("need at least one disk")
    field = field or DistanceField(poly)
    obj = _Objective(poly, disks, field)
    if check_pairwise and not verify_pairwise(poly, tri, disks, sources=obj.src):
        raise NotPairwiseIntersecting("disks are not pairwise intersecting")
    # f is convex along geodesics, so one start suffices in exact arithmetic;
    # a few spread-out starts guard against a poor first iterate
    starts = tri.centroids()[np.argsort(-tri.areas(), kind="stable")[:8]]
    fs = (obj.src.distances_many(starts) - obj.r[None, :]).max(axis=1)
    # the majorizer is flat when the iterate sits on a reflex vertex, so an
    # iterate stuck on the boundary falls through to the next start
    tiny = 1e-9 * max(poly.diameter, 1.0)
    found = None
    for k0 in np.argsort(fs, kind="stable"):
        x, fx, iters = _minimize(obj, starts[k0])
        if found is None or fx < found[1]:
            found = (x, fx, iters)
        if poly.boundary_distance(x) > tiny:
            break
    x, fx, iters = found
    cstar = Point(float(x[0]), float(x[1]))
    A, _, terms, anchor = obj.model(x)
    rstar = float(terms.max())
    clearance = poly.boundary_distance(cstar)
    if rstar <= tangency_tol:
        return MinDiskResult(cstar, rstar, True, terms=tuple(map(float, terms)), iterations=iters,
                             boundary_clearance=clearance, meta={"sources": obj.src})

    tangent = [i for i in range(len(disks)) if terms[i] >= rstar - tangency_tol * rstar]
    U = {}
    for i in tangent:
        d = A[i] - x
        U[i] = d / math.hypot(d[0], d[1])
    best = None
    for trip in itertools.combinations(tangent, 3):
        us = [U[i] for i in trip]
        # c* strictly inside the tangency triangle <=> 0 strictly inside hull of the u_i
        o = [orient(us[0], us[1], us[2])]
        sgn = math.copysign(1.0, o[0]) if o[0] != 0 else 0.0
        if sgn == 0.0:
            continue
        inside = all(sgn * orient(us[a], us[b], (0.0, 0.0)) > 0 for a, b in ((0, 1), (1, 2), (2, 0)))
        if not inside:
            continue
        gap = _angular_gap(us)
        if best is None or gap > best[0]:
            best = (gap, trip)
    stalled = None
    if len(tangent) < 3:
        stalled = f"only {len(tangent)} tangent disks at the optimum"
    elif best is None:
        stalled = "no tangent triple surrounds c*"
    elif clearance <= rstar * (1 - tangency_tol):
        stalled = f"D* meets the polygon boundary (clearance {clearance:.3g} < r* {rstar:.3g})"
    if stalled:
        raise OptimizerStalled(stalled, best=(cstar, rstar))
    trip = best[1]
    pts, lines, dirs = [], [], []
    for i in trip:
        u = U[i]
        t = Point(float(x[0] + rstar * u[0]), float(x[1] + rstar * u[1]))
        pts.append(t)
        dirs.append(Point(float(u[0]), float(u[1])))
        lines.append(Line(t, (-u[1], u[0])))
    return MinDiskResult(
        cstar, rstar, False,
        tangent_indices=tuple(trip),
        tangency_points=tuple(pts),
        tangent_lines=tuple(lines),
        directions=tuple(dirs),
        tangent_set=tuple(tangent),
        terms=tuple(map(float, terms)),
        iterations=iters,
        boundary_clearance=clearance,
        meta={"sources": obj.src},
    )


def tangency_data(result: MinDiskResult, disks=None):
    if result.helly or len(result.tangency_points) != 3:
        raise TangencyNotFound("no tangency data: the family is Helly")
    return result.tangency_points, result.tangent_lines


def probe_optimality(poly, disks, result: MinDiskResult, k: int = 64, radius: float = 1e-4, field=None) -> float:
    """Largest f(c*) - f(x) over ``k`` probes on a circle around c* (<= 0 at a minimum)."""
    src = result.meta.get("sources") if field is None else None
    if src is None:
        src = SourceSet(field or DistanceField(poly), [d.center for d in disks])
    r = np.array([d.radius for d in disks])
    c = np.asarray(result.cstar, dtype=float)
    ang = 2 * np.pi * np.arange(k) / k
    P = c + radius * np.c_[np.cos(ang), np.sin(ang)]
    P = P[poly.locate_many(P) >= 0]
    if len(P) == 0:
        return -math.inf
    f0 = float((src.distances_many(c[None, :])[0] - r).max())
    f = (src.distances_many(P) - r[None, :]).max(axis=1)
    return float((f0 - f).max())
