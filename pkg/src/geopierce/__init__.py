"""Piercing pairwise intersecting geodesic disks in a simple polygon with five points."""
from .errors import (
    BothLarge,
    DegenerateTangentTriangle,
    DegenerateVertex,
    EndpointOutside,
    GenerationFailed,
    GeodesicallyCollinear,
    GeoPierceError,
    InvalidInput,
    InvariantViolation,
    NotPairwiseIntersecting,
    NotSimple,
    OptimizerStalled,
    PointOutsidePolygon,
    SelfTestFailed,
    SweepDegenerate,
    TangencyNotFound,
)
from .estimator import GeodesicPiercer
from .geodesics import DistanceField, GeodesicDisk, GeodesicPath, geodesic_distance, shortest_path
from .kernel import EPS_GEOM, Line, Point, SimplePolygon, Triangulation, triangulate, validate_polygon
from .mindisk import TAU_PIERCE, TAU_TAN, MinDiskResult, compute_min_disk
from .piercing import CaseTag, PiercingSet, compute_piercing_set

__version__ = "0.1.0"

__all__ = [
    "BothLarge", "CaseTag", "DegenerateTangentTriangle", "DegenerateVertex", "DistanceField",
    "EPS_GEOM", "EndpointOutside", "GenerationFailed", "GeoPierceError", "GeodesicDisk",
    "GeodesicPath", "GeodesicPiercer", "GeodesicallyCollinear", "InvalidInput", "InvariantViolation",
    "Line", "MinDiskResult", "NotPairwiseIntersecting", "NotSimple", "OptimizerStalled",
    "PiercingSet", "Point", "PointOutsidePolygon", "SelfTestFailed", "SimplePolygon",
    "SweepDegenerate", "TAU_PIERCE", "TAU_TAN", "TangencyNotFound", "Triangulation",
    "compute_min_disk", "compute_piercing_set", "geodesic_distance", "shortest_path",
    "triangulate", "validate_polygon",
]
