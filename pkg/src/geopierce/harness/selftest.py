"""Numeric re-evaluation of the hand computations behind the guard landmarks.

Every item is instance independent.  Items report the measured margin next
to the tolerance so that a failure says how far off it is.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import SelfTestFailed
from ..frame import A_CONST, G, Z, m12_closed_form

SQRT2 = math.sqrt(2.0)

# (x of the interval's right end, listed g' point); left end of interval 1 is 3/2
INTERVAL_TABLE = (
    (1.52, (1.8033, 0.5955)),
    (1.56, (1.8152, 0.5792)),
    (1.63, (1.8347, 0.5507)),
    (1.74, (1.8623, 0.5063)),
    (1.9, (1.8966, 0.4429)),
    (2.15, (1.9376, 0.3478)),
    (3 * (2 + SQRT2) / 4, (1.9787, 0.2053)),
)


@dataclass(frozen=True)
class SelfTestItem:
    key: str
    description: str
    passed: bool
    value: float
    tol: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.key}: {self.description} (value {self.value:.3e}, tol {self.tol:.0e})"


@dataclass(frozen=True)
class SelfTestReport:
    items: tuple[SelfTestItem, ...]

    @property
    def passed(self) -> bool:
        return all(i.passed for i in self.items)

    def __getitem__(self, key: str) -> SelfTestItem:
        for i in self.items:
            if i.key == key:
                return i
        raise KeyError(key)

    def failures(self) -> list[SelfTestItem]:
        return [i for i in self.items if not i.passed]

    def text(self) -> str:
        return "\n".join(i.line() for i in self.items)


def z_equidistance_residual(a: float = A_CONST) -> float:
    """max of | |z1 g1| - (|z1| - 1) | and | |z1 g2| - (|z1| - 1) |."""
    z = np.array([a, a])
    target = math.hypot(*z) - 1.0
    return max(abs(math.hypot(*(z - np.asarray(G[0]))) - target), abs(math.hypot(*(z - np.asarray(G[1]))) - target))


def m12_by_intersection(alpha2: float) -> np.ndarray:
    """Intersection of y = -1 with the tangent line of the unit circle at angle pi/2 - alpha2."""
    phi = math.pi / 2 - alpha2
    u = np.array([math.cos(phi), math.sin(phi)])
    # points p with p.u = 1 and p_y = -1
    return np.array([(1.0 + u[1]) / u[0], -1.0])


def l12_offset(alpha2: float, p=Z[3]) -> float:
    """Signed distance of p from the line l_{1,2} (positive on the far side from c*)."""
    m = np.asarray(m12_closed_form(alpha2))
    n = m / np.linalg.norm(m)
    return float(np.asarray(p) @ n - np.linalg.norm(m))


def interval_margins(samples: int = 1000) -> list[float]:
    """Per interval: min over sampled a_x of |aq*| - |ag'_i|."""
    out = []
    lo = 1.5
    k = (4 * SQRT2 - 5) / 3
    for hi, (gx, gy) in INTERVAL_TABLE:
        ax = np.linspace(lo, hi, samples)
        ay = k * ax + 2
        margin = np.hypot(ax, ay) - 1 - np.hypot(ax - gx, ay - gy)
        out.append(float(margin.min()))
        lo = hi
    return out


def lb_intersection(bx):
    """Closed-form intersection of l_b with D' in Q1, as a function of b_x."""
    bx = np.asarray(bx, dtype=float)
    s = np.sqrt(4 + bx**2)
    gx = (bx**2 + 2 * s + 2 * bx * np.sqrt(s - 1)) / (4 + bx**2)
    gy = (2 * bx - bx * s + 4 * np.sqrt(s - 1)) / (4 + bx**2)
    return gx, gy


def end_inequality_sides(bx):
    bx = np.asarray(bx, dtype=float)
    s = np.sqrt(4 + bx**2)
    return (3 - s) * (4 + bx**2), 2 * bx - bx * s + 4 * np.sqrt(s - 1)


def la_intersection(ax: float) -> np.ndarray:
    """Point where the tangent line l_a meets D' in Q1, from the closed-form slope."""
    k = 4 * SQRT2 - 5
    disc = -3 * ((120 * SQRT2 - 171) * ax**2 - (1712 * SQRT2 - 2420) * ax + 480 * SQRT2 - 684)
    m = ((12 * SQRT2 - 15) * ax + 18 - math.sqrt(disc)) / (8 * (5 * SQRT2 - 6) * ax)
    c = m * 3 / k - 6 / (k * ax) - 1  # y = m x + c
    # (x-1)^2 + (m x + c)^2 = 1
    A, B, C = 1 + m * m, 2 * m * c - 2, c * c
    disc2 = B * B - 4 * A * C
    xs = [(-B + sg * math.sqrt(max(disc2, 0.0))) / (2 * A) for sg in (1, -1)]
    pts = [np.array([x, m * x + c]) for x in xs]
    pts = [p for p in pts if p[0] >= 0 and p[1] >= 0] or pts
    return max(pts, key=lambda p: p[1])


def selftest_paper_numerics(raise_on_failure: bool = False, samples: int = 1000) -> SelfTestReport:
    items = []
    r = z_equidistance_residual()
    items.append(SelfTestItem("z-equidistance", "a = 3/(4-2*sqrt2) solves |z1g1| = |z1g2| = |z1| - 1", r <= 1e-12, r, 1e-12))

    alpha = math.pi / 5
    r = float(np.abs(np.asarray(m12_closed_form(alpha)) - m12_by_intersection(alpha)).max())
    items.append(SelfTestItem("m12-closed-form", "m12 = ((cos a + 1)/sin a, -1) at a = pi/5", r <= 1e-12, r, 1e-12))
    off = l12_offset(alpha)
    items.append(SelfTestItem("l12-through-z4", "l_{1,2} passes through z4 at alpha2 = pi/5", abs(off) <= 1e-9, abs(off), 1e-9))
    items.append(SelfTestItem("l12-side-of-z4", "z4 lies on the c* side of l_{1,2} at alpha2 = pi/5", off <= 0, off, 0.0))

    for i, mgn in enumerate(interval_margins(samples), start=1):
        items.append(SelfTestItem(f"interval-{i}", f"|a g'_{i}| <= |a q*| on interval {i}", mgn >= 0, mgn, 0.0))

    bx = np.linspace(1.5 / samples, 1.5, samples)
    gx, _ = lb_intersection(bx)
    mgn = float((gx - bx).min())
    items.append(SelfTestItem("bx-le-gx", "b_x <= g_x for 0 < b_x <= 3/2", mgn >= 0, mgn, 0.0))

    lhs0, rhs0 = end_inequality_sides(0.0)
    r = max(abs(float(lhs0) - 4), abs(float(rhs0) - 4))
    items.append(SelfTestItem("end-inequality-at-0", "both sides equal 4 at b_x = 0", r <= 1e-9, r, 1e-9))
    lhs, rhs = end_inequality_sides(bx)
    mgn = float((rhs - lhs).min())
    items.append(SelfTestItem("end-inequality", "(3 - s)(4 + b^2) < 2b - b s + 4 sqrt(s - 1) on (0, 3/2]", mgn > 0, mgn, 0.0))

    err = max(float(np.abs(la_intersection(hi) - np.asarray(g)).max()) for hi, g in INTERVAL_TABLE)
    items.append(SelfTestItem("la-reproduces-table", "closed-form l_a gives the tabulated g'_i to 4 decimals", err <= 5e-4, err, 5e-4))

    report = SelfTestReport(tuple(items))
    if raise_on_failure and not report.passed:
        bad = report.failures()[0]
        raise SelfTestFailed(bad.key, bad.line())
    return report


def run_invariant_sweep(instances: int = 20, first_seed: int = 0) -> SelfTestReport:
    """Short randomized run of the pipeline invariants on suite instances."""
    from ..kernel import triangulate
    from ..piercing import compute_piercing_set
    from .generate import suite_instance
    from .verify import verify_piercing

    area_err = size_bad = 0.0
    worst = -math.inf
    roundtrip = 0.0
    for seed in range(first_seed, first_seed + instances):
        inst = suite_instance(seed)
        poly = inst.polygon
        tri = triangulate(poly)
        area_err = max(area_err, abs(tri.areas().sum() - poly.area) / poly.area, float(len(tri.triangles) != poly.n - 2))
        S = compute_piercing_set(poly, inst.disks, tri=tri)
        size_bad = max(size_bad, float(not 1 <= len(S.points) <= 5))
        worst = max(worst, verify_piercing(inst, S).max_violation)
        if S.frame is not None:
            roundtrip = max(roundtrip, float(np.abs(S.frame.inverse(S.frame.apply(poly.vertices)) - poly.vertices).max()))
    items = (
        SelfTestItem("triangulation", "n-2 triangles, area conserved", area_err <= 1e-9, area_err, 1e-9),
        SelfTestItem("set-size", "1 <= |S| <= 5", size_bad == 0, size_bad, 0.0),
        SelfTestItem("pierced", "max violation over the run", worst <= 1e-7, worst, 1e-7),
        SelfTestItem("frame-roundtrip", "inverse(apply(p)) = p", roundtrip <= 1e-12 * 10, roundtrip, 1e-11),
    )
    return SelfTestReport(items)
