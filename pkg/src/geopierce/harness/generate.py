"""Seeded random instances.

Polygons come from random polar points with strongly varying radii, an
optional radius-dependent twist (which creates spiralling corridors), an
angular sort and 2-opt uncrossing.
"""
from __future__ import annotations

import numpy as np

from ..errors import GenerationFailed, GeoPierceError
from ..geodesics import DistanceField, GeodesicDisk
from ..kernel import SimplePolygon, segments_cross, validate_polygon
from .io import Instance

SCALE = 10.0


def _first_crossing(xy: np.ndarray):
    """First pair (i, j) of properly crossing edges, or None."""
    A, B = xy, np.roll(xy, -1, axis=0)
    E = B - A

    def cr(u, v):
        return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]

    o1 = cr(E[:, None, :], A[None, :, :] - A[:, None, :])
    o2 = cr(E[:, None, :], B[None, :, :] - A[:, None, :])
    hit = np.triu((o1 * o2 < 0) & (o1.T * o2.T < 0), 2)
    hit[0, -1] = False
    if not hit.any():
        return None
    i, j = np.argwhere(hit)[0]
    return int(i), int(j)


def _two_opt(pts: list) -> list:
    """Remove edge crossings by reversing chains; total length strictly drops."""
    m = len(pts)
    for _ in range(20 * m * m):
        hit = _first_crossing(np.asarray(pts))
        if hit is None:
            return pts
        i, j = hit
        if not segments_cross(pts[i], pts[i + 1], pts[j], pts[(j + 1) % m]):
            raise GenerationFailed("inconsistent crossing test")
        pts[i + 1 : j + 1] = pts[i + 1 : j + 1][::-1]
    raise GenerationFailed("2-opt did not converge")


def random_simple_polygon(rng: np.random.Generator, n: int, retries: int = 50) -> SimplePolygon:
    if n < 3:
        raise ValueError("n must be at least 3")
    for _ in range(retries):
        theta = np.sort(rng.uniform(0.0, 2 * np.pi, n))
        radius = rng.uniform(0.12, 1.0, n) ** rng.uniform(0.5, 1.5)
        twist = rng.uniform(0.0, 3.0) if n >= 8 else 0.0
        ang = theta + twist * radius
        xy = 0.5 * SCALE * (1.0 + np.c_[radius * np.cos(ang), radius * np.sin(ang)])
        xy = np.round(xy, 6)
        try:
            pts = _two_opt([tuple(map(float, p)) for p in xy])
            return validate_polygon(pts)
        except GeoPierceError:
            continue
    raise GenerationFailed(f"no simple polygon after {retries} attempts")


def sample_interior(rng: np.random.Generator, poly: SimplePolygon, k: int, margin: float = 1e-6) -> np.ndarray:
    lo, hi = poly.vertices.min(axis=0), poly.vertices.max(axis=0)
    out = []
    for _ in range(1000):
        cand = np.round(rng.uniform(lo, hi, size=(max(4 * k, 16), 2)), 6)
        ok = poly.locate_many(cand) == 1
        for p in cand[ok]:
            if poly.boundary_distance(p) > margin:
                out.append(p)
                if len(out) == k:
                    return np.array(out)
    raise GenerationFailed("could not sample interior points")


def generate_instance(seed: int, n: int, m: int, name: str | None = None, radii: str = "half") -> Instance:
    """Pairwise intersecting disks.

    ``radii="half"``: r_i = max_j d(c_i, c_j) / 2 * (1 + rho_i).
    ``radii="tight"``: r_i = s * w_i with random weights w_i and the smallest
    s keeping every pair intersecting; such families are usually not Helly.
    """
    if n < 3 or m < 1:
        raise ValueError("need n >= 3 and m >= 1")
    rng = np.random.default_rng(seed)
    poly = random_simple_polygon(rng, n)
    centers = sample_interior(rng, poly, m)
    rho = rng.uniform(0.0, 0.3, m)
    if m == 1:
        radii = 0.05 * poly.diameter * (1 + rho)
    else:
        field = DistanceField(poly)
        D = field.sources(centers).pairwise()
        if radii == "tight":
            w = rng.uniform(0.5, 1.5, m)
            W = w[:, None] + w[None, :]
            np.fill_diagonal(W, np.inf)
            radii = w * (D / W).max()
            # shrink each radius to the least value still meeting every other disk
            for _ in range(3):
                for i in rng.permutation(m):
                    others = np.delete(np.arange(m), i)
                    radii[i] = max((D[i, others] - radii[others]).max(), 1e-3 * radii[i])
            radii = radii * (1 + 1e-12)
        elif radii == "half":
            radii = D.max(axis=1) / 2 * (1 + rho)
        else:
            raise ValueError(f"unknown radius mode {radii!r}")
    disks = tuple(GeodesicDisk(tuple(map(float, c)), float(r)) for c, r in zip(centers, radii))
    return Instance(poly, disks, name or f"seed-{seed}", seed)


def generate_helly_instance(seed: int, n: int, m: int) -> Instance:
    """Disks that all contain a common witness point."""
    rng = np.random.default_rng(seed)
    poly = random_simple_polygon(rng, n)
    pts = sample_interior(rng, poly, m + 1)
    witness, centers = pts[0], pts[1:]
    field = DistanceField(poly)
    d = field.sources(centers).distances(witness)
    radii = d * (1 + rng.uniform(0.01, 0.3, m)) + 1e-3
    disks = tuple(GeodesicDisk(tuple(map(float, c)), float(r)) for c, r in zip(centers, radii))
    return Instance(poly, disks, f"helly-{seed}", seed)


def suite_instance(seed: int) -> Instance:
    """Instance of the randomized acceptance suite: n in [6, 60], m in [3, 40].

    Odd seeds use tight radii so that the suite exercises the non-Helly cases.
    """
    rng = np.random.default_rng([seed, 7])
    n = int(rng.integers(6, 61))
    m = int(rng.integers(3, 41))
    return generate_instance(seed, n, m, radii="tight" if seed % 2 else "half")
