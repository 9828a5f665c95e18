import itertools
import math

import numpy as np
import pytest

from geopierce.errors import DegenerateVertex, EndpointOutside, NotSimple
from geopierce.harness.generate import random_simple_polygon
from geopierce.kernel import (
    Line,
    Location,
    Point,
    Segment,
    orient,
    point_in_polygon,
    point_in_triangle,
    segment_avoids_boundary,
    segments_cross,
    segments_in_polygon,
    triangulate,
    validate_polygon,
)

from oracles import avoids_boundary, locate


def _signed_area(v):
    x, y = np.asarray(v).T
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


class TestValidatePolygon:
    def test_ccw_square_becomes_clockwise(self):
        poly = validate_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
        assert poly.n == 4
        assert _signed_area(poly.vertices) < 0
        assert tuple(poly.vertices[0]) == (0.0, 0.0)
        assert sorted(map(tuple, poly.vertices)) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_clockwise_input_kept(self):
        cw = [(0, 0), (0, 1), (1, 1), (1, 0)]
        assert np.array_equal(validate_polygon(cw).vertices, np.array(cw, dtype=float))

    def test_bowtie_rejected(self):
        with pytest.raises(NotSimple):
            validate_polygon([(0, 0), (1, 1), (1, 0), (0, 1)])

    def test_duplicate_vertex_rejected(self):
        with pytest.raises(DegenerateVertex):
            validate_polygon([(0, 0), (1, 0), (1, 0), (1, 1), (0, 1)])

    def test_collinear_triple_rejected(self):
        with pytest.raises(DegenerateVertex):
            validate_polygon([(0, 0), (0.5, 0), (1, 0), (1, 1), (0, 1)])

    def test_too_few_vertices(self):
        with pytest.raises(ValueError):
            validate_polygon([(0, 0), (1, 0)])

    def test_generator_polygon_accepted(self):
        poly = random_simple_polygon(np.random.default_rng(5), 40)
        assert poly.n == 40
        V = poly.vertices
        n = len(V)
        for i, j in itertools.combinations(range(n), 2):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            assert not segments_cross(V[i], V[(i + 1) % n], V[j], V[(j + 1) % n])

    def test_vertices_read_only(self, square):
        with pytest.raises(ValueError):
            square.vertices[0, 0] = 5.0


class TestPrimitives:
    def test_orient_antisymmetric(self, rng):
        P = rng.normal(size=(500, 3, 2))
        for a, b, c in P:
            assert orient(a, b, c) == -orient(b, a, c)

    def test_orient_exact_on_collinear(self):
        assert orient((0.1, 0.1), (0.2, 0.2), (0.3, 0.3)) == pytest.approx(0.0, abs=1e-30)
        assert orient((0, 0), (1, 0), (0, 1)) > 0

    def test_orient_sign_beyond_double_cancellation(self):
        # det ~ 1e-20, far below the naive float resolution at this magnitude
        a, b = (0.0, 0.0), (1e10, 1e10)
        c = (1.0, 1.0 + 2.0**-40)
        assert orient(a, b, c) > 0

    def test_line_direction_normalized(self):
        L = Line((1, 2), (3, 4))
        assert math.hypot(*L.direction) == pytest.approx(1.0, abs=1e-12)
        assert L.signed_distance((0, 0)) == pytest.approx(-0.4)  # left of the direction is positive

    def test_line_intersection(self):
        p = Line.through((0, 0), (1, 1)).intersect(Line.through((0, 1), (1, 0)))
        assert p == pytest.approx((0.5, 0.5))
        assert Line((0, 0), (1, 0)).intersect(Line((0, 1), (2, 0))) is None

    def test_segment(self):
        s = Segment(Point(0, 0), Point(3, 4))
        assert s.length == 5
        assert s.at(0.5) == (1.5, 2.0)

    def test_point_in_triangle_closed(self):
        assert point_in_triangle((0, 0), (0, 0), (1, 0), (0, 1))
        assert not point_in_triangle((1, 1), (0, 0), (1, 0), (0, 1))


class TestPointInPolygon:
    def test_examples(self, square):
        assert point_in_polygon(square, (0.5, 0.5)) is Location.INSIDE
        assert point_in_polygon(square, (1, 1)) is Location.BOUNDARY
        assert point_in_polygon(square, (2, 0.5)) is Location.OUTSIDE

    def test_grid_matches_oracle(self, comb):
        xs = np.linspace(-0.5, 5.5, 41)
        ys = np.linspace(-0.5, 3.5, 29)
        G = np.array([(x, y) for x in xs for y in ys])
        codes = comb.locate_many(G)
        expected = np.array([locate(comb, p) for p in G])
        assert np.array_equal(codes, expected)


class TestTriangulate:
    def test_convex_pentagon(self):
        ang = 2 * np.pi * np.arange(5) / 5
        poly = validate_polygon(np.c_[np.cos(ang), np.sin(ang)])
        tri = triangulate(poly)
        assert len(tri.triangles) == 3
        assert tri.areas().sum() == pytest.approx(poly.area, rel=1e-12)

    def test_square(self, square):
        tri = triangulate(square)
        assert len(tri.triangles) == 2
        assert tri.areas().sum() == pytest.approx(1.0, rel=1e-12)

    def test_comb(self, comb):
        tri = triangulate(comb)
        assert len(tri.triangles) == 10
        assert comb.area == pytest.approx(11.0)
        assert tri.areas().sum() == pytest.approx(11.0, rel=1e-9)

    def test_adjacency_symmetric_and_diagonals_inside(self, comb):
        tri = triangulate(comb)
        for i, nbrs in enumerate(tri.adjacency):
            for j in nbrs:
                assert i in tri.adjacency[j]
        V = comb.vertices
        for a, b in tri.diagonals():
            assert segments_in_polygon(comb, [V[a]], [V[b]])[0]

    def test_alternative_order_gives_other_diagonals(self):
        poly = random_simple_polygon(np.random.default_rng(3), 30)
        d1 = set(triangulate(poly).diagonals())
        d2 = set(triangulate(poly, start=poly.n // 2, reverse=True).diagonals())
        assert d1 != d2

    @pytest.mark.parametrize("seed", range(30))
    def test_random_area_conservation(self, seed):
        poly = random_simple_polygon(np.random.default_rng(seed), 6 + seed)
        tri = triangulate(poly)
        assert len(tri.triangles) == poly.n - 2
        assert abs(tri.areas().sum() - poly.area) <= 1e-9 * poly.area


class TestSegmentAvoidsBoundary:
    def test_square_interior_diagonal(self, square):
        assert segment_avoids_boundary(square, ((0.25, 0.25), (0.75, 0.75)))

    def test_ushape_notch_blocks(self, ushape):
        assert not segment_avoids_boundary(ushape, ((0.5, 2), (2.5, 2)))
        assert segment_avoids_boundary(ushape, ((0.5, 0.5), (2.5, 0.5)))

    def test_touching_counts(self, ushape):
        # grazes the notch corner (1, 1)
        assert not segment_avoids_boundary(ushape, ((0.5, 1.5), (1.5, 0.5)))

    def test_endpoint_on_boundary_allowed(self, square):
        assert segment_avoids_boundary(square, ((0, 0.5), (0.5, 0.5)))

    def test_segment_along_edge(self, square):
        assert not segment_avoids_boundary(square, ((0, 0.2), (0, 0.8)))

    def test_endpoint_outside(self, square):
        with pytest.raises(EndpointOutside):
            segment_avoids_boundary(square, ((0.5, 0.5), (2, 2)))

    def test_random_chords_match_brute_force(self):
        rng = np.random.default_rng(11)
        checked = 0
        for seed in range(20):
            poly = random_simple_polygon(np.random.default_rng(100 + seed), 12 + 2 * seed)
            lo, hi = poly.vertices.min(axis=0), poly.vertices.max(axis=0)
            P = rng.uniform(lo, hi, size=(3000, 2))
            P = P[poly.locate_many(P) == 1][:1200]
            A, B = P[: len(P) // 2], P[len(P) // 2 : 2 * (len(P) // 2)]
            # include vertex-to-vertex chords, which graze the boundary often
            idx = rng.integers(0, poly.n, size=(60, 2))
            idx = idx[idx[:, 0] != idx[:, 1]]
            A = np.vstack([A, poly.vertices[idx[:, 0]]])
            B = np.vstack([B, poly.vertices[idx[:, 1]]])
            for a, b in zip(A, B):
                assert segment_avoids_boundary(poly, (a, b)) == avoids_boundary(poly, a, b)
                checked += 1
        assert checked >= 10_000
