import math
from types import SimpleNamespace

import numpy as np
import pytest

from geopierce.errors import DegenerateTangentTriangle, TangencyNotFound
from geopierce.frame import (
    A_CONST,
    DPRIME_CENTERS,
    G,
    Z,
    Frame,
    FrameScene,
    build_frame,
    corollary1_check,
    landmarks,
    m12_closed_form,
    observation7_alpha_bound,
    quadrant_contains,
    sweep_guard_points,
    u_on_dprime,
)
from geopierce.geodesics import GeodesicDisk
from geopierce.harness.generate import suite_instance
from geopierce.kernel import Point, triangulate, validate_polygon
from geopierce.mindisk import MinDiskResult, compute_min_disk

IDENTITY = Frame(Point(0.0, 0.0), 1.0, 0.0, False, (0, 1, 2))
FAR = GeodesicDisk((-500.0, -500.0), 1.0)


def _synthetic_result(degrees, cstar=(0.0, 0.0), rstar=1.0):
    dirs = [Point(math.cos(math.radians(d)), math.sin(math.radians(d))) for d in degrees]
    pts = tuple(Point(cstar[0] + rstar * u.x, cstar[1] + rstar * u.y) for u in dirs)
    return MinDiskResult(Point(*cstar), rstar, False, tangent_indices=(0, 1, 2), tangency_points=pts,
                         directions=tuple(dirs))


@pytest.fixture(scope="module")
def non_helly():
    out = []
    for seed in range(1, 40, 2):
        inst = suite_instance(seed)
        res = compute_min_disk(inst.polygon, triangulate(inst.polygon), inst.disks)
        if not res.helly:
            out.append((inst, res))
        if len(out) == 8:
            break
    assert len(out) >= 4
    return out


class TestConstants:
    def test_a(self):
        assert A_CONST == pytest.approx(2.56, abs=5e-3)
        z = np.array(Z[0])
        r = math.hypot(*z) - 1
        assert math.dist(z, G[0]) == pytest.approx(r, abs=1e-12)
        assert math.dist(z, G[1]) == pytest.approx(r, abs=1e-12)

    def test_landmarks_in_quadrants(self):
        for i in range(4):
            assert quadrant_contains(i + 1, Z[i])
            assert math.hypot(*DPRIME_CENTERS[i]) == 1.0
            assert math.dist(G[i], DPRIME_CENTERS[i]) == 1.0

    def test_m12_closed_form_on_both_lines(self):
        for a in np.linspace(0.2, 1.4, 7):
            m = m12_closed_form(a)
            phi = math.pi / 2 - a
            assert m[1] == -1.0
            assert m[0] * math.cos(phi) + m[1] * math.sin(phi) == pytest.approx(1.0, abs=1e-12)


class TestFrame:
    def test_roundtrip_and_scaling(self, rng):
        for _ in range(20):
            f = Frame(Point(*rng.normal(size=2) * 10), float(rng.uniform(0.1, 5)), float(rng.uniform(-4, 4)),
                      bool(rng.integers(2)), (0, 1, 2))
            P = rng.normal(size=(30, 2)) * 20
            Q = f.apply(P)
            assert np.abs(f.inverse(Q) - P).max() <= 1e-11
            d0 = np.hypot(*(P[1:] - P[:-1]).T)
            d1 = np.hypot(*(Q[1:] - Q[:-1]).T)
            assert np.allclose(d1 * f.scale, d0, rtol=1e-12)
            assert f.to_frame(f.translation) == pytest.approx((0.0, 0.0), abs=1e-12)

    def test_alpha_from_directions(self):
        res = _synthetic_result([-90.0, 40.0, 150.0])
        f = build_frame(res)
        assert f.rotation == pytest.approx(0.0, abs=1e-12)
        assert f.labels == (0, 1, 2)
        lm = landmarks(f, res)
        assert math.degrees(lm.alpha2) == pytest.approx(50.0)
        assert math.degrees(lm.alpha3) == pytest.approx(60.0)

    def test_random_directions_put_t1_on_y_minus_one(self, rng):
        for _ in range(50):
            base = rng.uniform(0, 360)
            gaps = rng.dirichlet([2, 2, 2]) * 360
            if gaps.max() >= 179:
                continue
            degs = base + np.cumsum(np.r_[0, gaps[:2]])
            c = tuple(rng.normal(size=2))
            res = _synthetic_result(degs, cstar=c, rstar=float(rng.uniform(0.5, 3)))
            f = build_frame(res)
            lm = landmarks(f, res)
            assert lm.t[0] == pytest.approx((0.0, -1.0), abs=1e-12)
            assert f.to_frame(res.cstar) == pytest.approx((0.0, 0.0), abs=1e-12)
            for t in lm.t:
                assert math.hypot(*t) == pytest.approx(1.0, abs=1e-12)
            # the closest pair of tangency directions is D2, D3
            assert lm.alpha2 + lm.alpha3 < math.pi

    def test_mirror(self):
        res = _synthetic_result([-90.0, 40.0, 150.0])
        f = build_frame(res)
        m = f.mirrored()
        assert m.labels == (0, 2, 1)
        assert m.mirrored() == f
        P = np.array([[0.3, 0.7], [-2.0, 1.0]])
        assert np.allclose(m.apply(P), f.apply(P) * [-1, 1])
        lm = landmarks(m, res)
        assert math.degrees(lm.alpha2) == pytest.approx(60.0)
        assert math.degrees(lm.alpha3) == pytest.approx(50.0)
        assert lm.t[0] == pytest.approx((0.0, -1.0), abs=1e-12)

    def test_needs_non_helly(self):
        with pytest.raises(TangencyNotFound):
            build_frame(MinDiskResult(Point(0, 0), -1.0, True))

    def test_parallel_tangents_rejected(self):
        with pytest.raises(DegenerateTangentTriangle):
            build_frame(_synthetic_result([0.0, 0.0, 180.0]))

    def test_instances(self, non_helly):
        for inst, res in non_helly:
            f = build_frame(res)
            lm = landmarks(f, res)
            assert lm.t[0] == pytest.approx((0.0, -1.0), abs=1e-9)
            assert 0 < lm.alpha2 < math.pi and 0 < lm.alpha3 < math.pi


class TestTriangleClearance:
    def test_big_square_passes(self, big_square):
        assert corollary1_check(IDENTITY, big_square)

    def test_spike_into_triangle_fails(self):
        poly = validate_polygon([(-10, -10), (0.4, -10), (0.5, -0.5), (0.6, -10), (10, -10), (10, 10), (-10, 10)])
        assert not corollary1_check(IDENTITY, poly)

    def test_instances(self, non_helly):
        for inst, res in non_helly:
            assert corollary1_check(build_frame(res), inst.polygon, 1e-9)


class TestAlphaBound:
    def test_clear_polygon(self, big_square):
        lm = SimpleNamespace(alpha2=0.1, alpha3=0.1)
        assert observation7_alpha_bound(IDENTITY, big_square, lm) == []

    def test_meeting_polygon(self):
        small = validate_polygon([(-2.2, -2.2), (2.2, -2.2), (2.2, 2.2), (-2.2, 2.2)])
        bad = observation7_alpha_bound(IDENTITY, small, SimpleNamespace(alpha2=0.5, alpha3=0.7))
        assert len(bad) == 1 and "alpha2" in bad[0]
        assert observation7_alpha_bound(IDENTITY, small, SimpleNamespace(alpha2=0.7, alpha3=0.7)) == []

    def test_instances(self, non_helly):
        for inst, res in non_helly:
            f = build_frame(res)
            assert observation7_alpha_bound(f, inst.polygon, landmarks(f, res)) == []


class TestSweep:
    def test_u_on_dprime(self):
        for th in np.linspace(-math.pi / 3, 0, 9):
            u, psi = u_on_dprime(th)
            assert math.dist(u, (1, 0)) == pytest.approx(1.0, abs=1e-12)
            # u lies on the tangent line of the unit circle at angle theta
            assert u[0] * math.cos(th) + u[1] * math.sin(th) == pytest.approx(1.0, abs=1e-12)
            assert u[1] >= 0
        assert u_on_dprime(0.0)[0] == pytest.approx((1.0, 1.0))

    def test_unobstructed_sweep_is_degenerate(self, big_square):
        scene = FrameScene(big_square, [FAR, FAR, FAR], IDENTITY)
        gp = sweep_guard_points(IDENTITY, big_square, scene.disks, scene=scene)
        rec = gp.records["g1+"]
        assert rec.stop == "limit" and rec.degenerate
        assert rec.point == pytest.approx((1.0, 1.0))
        assert "g1+" in gp.degenerate
        assert gp.gplus[1] == (-1.0, 1.0) and gp.gminus[1] == (1.0, 1.0)

    def test_hanging_spike_gives_horizontal_sweep(self):
        poly = validate_polygon([(-1000, -1000), (1000, -1000), (1000, 1000), (1.55, 1000), (1.5, 0.5),
                                 (1.45, 1000), (-1000, 1000)])
        scene = FrameScene(poly, [FAR, FAR, FAR], IDENTITY)
        rec = sweep_guard_points(IDENTITY, poly, scene.disks, scene=scene).records["g1+"]
        assert rec.stop == "polygon" and not rec.degenerate
        assert rec.height == pytest.approx(0.5)
        assert rec.point == pytest.approx((1 + math.sqrt(0.75), 0.5), abs=1e-12)

    def test_stop_disk(self, big_square):
        d3 = GeodesicDisk((1.6, 1.6), 0.5)
        scene = FrameScene(big_square, [FAR, FAR, d3], IDENTITY)
        rec = sweep_guard_points(IDENTITY, big_square, scene.disks, scene=scene).records["g1+"]
        expected = math.asin(0.3125 / math.sqrt(2)) - math.pi / 4
        assert rec.stop == "disk"
        assert rec.theta == pytest.approx(expected, abs=1e-9)
        assert rec.point == pytest.approx(u_on_dprime(expected)[0], abs=1e-8)

    def test_mirrored_stop_disk(self, big_square):
        # g1- stops on D1; the mirror of the D3 case above
        d1 = GeodesicDisk((1.6, -1.6), 0.5)
        scene = FrameScene(big_square, [d1, FAR, FAR], IDENTITY)
        gp = sweep_guard_points(IDENTITY, big_square, scene.disks, scene=scene)
        rec = gp.records["g1-"]
        assert rec.stop == "disk"
        u = u_on_dprime(math.asin(0.3125 / math.sqrt(2)) - math.pi / 4)[0]
        assert rec.point == pytest.approx((u[0], -u[1]), abs=1e-8)

    def test_guard_placement_on_instances(self, non_helly):
        for inst, res in non_helly:
            f = build_frame(res)
            scene = FrameScene(inst.polygon, inst.disks, f, sources=res.meta.get("sources"))
            gp = sweep_guard_points(f, inst.polygon, inst.disks, res, scene)
            for i in range(4):
                q_minus = 4 if i == 0 else i
                assert quadrant_contains(i + 1, gp.gplus[i], 1e-9)
                assert quadrant_contains(q_minus, gp.gminus[i], 1e-9)
                for g in (gp.gplus[i], gp.gminus[i]):
                    assert math.dist(g, DPRIME_CENTERS[i]) == pytest.approx(1.0, abs=1e-9)
