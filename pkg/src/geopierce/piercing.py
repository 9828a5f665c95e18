"""Case dispatch and the two guard-selection algorithms."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BothLarge
from .frame import (
    G,
    Frame,
    FrameScene,
    GuardSweeper,
    Landmarks,
    build_frame,
    landmarks,
)
from .geodesics import DistanceField, GeodesicDisk
from .kernel import EPS_GEOM, Point, SimplePolygon, Triangulation, triangulate
from .mindisk import TAU_TAN, MinDiskResult, compute_min_disk


class CaseTag(enum.Enum):
    HELLY = "Helly"
    ALPHA_TWO_LARGE = "AlphaTwoLarge"
    ALPHA_THREE_LARGE = "AlphaThreeLarge"
    BOTH_SMALL = "BothSmall"


@dataclass(frozen=True)
class PiercingSet:
    points: tuple[Point, ...]
    provenance: tuple[str, ...]
    case: CaseTag
    frame: Frame | None = None
    min_disk: MinDiskResult | None = None
    info: dict = field(default_factory=dict, compare=False, repr=False)

    def __len__(self):
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float).reshape(-1, 2)

    def to_dict(self) -> dict:
        return {
            "points": [[p.x, p.y] for p in self.points],
            "provenance": list(self.provenance),
            "case": self.case.value,
        }


def select_case(lm: Landmarks) -> CaseTag:
    big2 = lm.alpha2 > math.pi / 3
    big3 = lm.alpha3 > math.pi / 3
    if big2 and big3:
        raise BothLarge(f"alpha2 = {lm.alpha2:.6f} and alpha3 = {lm.alpha3:.6f} both exceed pi/3")
    if big2:
        return CaseTag.ALPHA_TWO_LARGE
    if big3:
        return CaseTag.ALPHA_THREE_LARGE
    return CaseTag.BOTH_SMALL


def _meets(scene: FrameScene, lm: Landmarks):
    cache = {}

    def meets(name):
        if name not in cache:
            cache[name] = scene.meets(*lm.segment(name))
        return cache[name]

    return meets


def algorithm1(frame: Frame, lm: Landmarks, guards: GuardSweeper, scene: FrameScene):
    """Guard choice when alpha2 > pi/3.  Returns five (frame point, tag) pairs."""
    meets = _meets(scene, lm)
    gp = {i: (G[i - 1], f"g{i}") for i in range(1, 5)}
    if not meets("z1g1"):
        if meets("z1g2") or meets("z2g2"):
            gp[1] = (guards("g1+"), "g1+")
            if meets("z2g2"):
                gp[2] = (guards("g2+"), "g2+")
        elif meets("z4g4"):
            gp[1] = (guards("g1-"), "g1-")
    if not meets("z2g3") and meets("z2g2"):
        gp[2] = (guards("g2+"), "g2+")
    if not meets("z3g4") and meets("z3g3"):
        gp[4] = (guards("g4-"), "g4-")
    return [(Point(0.0, 0.0), "c*")] + [gp[i] for i in range(1, 5)]


def algorithm2(frame: Frame, lm: Landmarks, guards: GuardSweeper, scene: FrameScene):
    """Guard choice when both alpha2 and alpha3 are at most pi/3."""
    meets = _meets(scene, lm)
    gp = {i: (G[i - 1], f"g{i}") for i in range(1, 5)}
    if not meets("z1g1") and meets("z1g2"):
        gp[1] = (guards("g1+"), "g1+")
    if not meets("z2g3") and meets("z2g2"):
        gp[3] = (guards("g3-"), "g3-")
    if not (meets("z1g1") or meets("z1g2") or meets("z2g2") or meets("z2g3")):
        if meets("z3g4"):
            gp[3] = (guards("g3+"), "g3+")
        if meets("z4g4"):
            gp[1] = (guards("g1-"), "g1-")
    return [(Point(0.0, 0.0), "c*")] + [gp[i] for i in range(1, 5)]


def compute_piercing_set(
    poly: SimplePolygon,
    disks: Sequence[GeodesicDisk],
    *,
    tri: Triangulation | None = None,
    field: DistanceField | None = None,
    tangency_tol: float = TAU_TAN,
    check_pairwise: bool = True,
) -> PiercingSet:
    tri = tri or triangulate(poly)
    field = field or DistanceField(poly)
    res = compute_min_disk(poly, tri, disks, tangency_tol=tangency_tol, check_pairwise=check_pairwise, field=field)
    if res.helly:
        return PiercingSet((res.cstar,), ("c*",), CaseTag.HELLY, None, res)
    frame = build_frame(res, poly, disks)
    lm = landmarks(frame, res)
    case = select_case(lm)
    if case is CaseTag.ALPHA_THREE_LARGE:
        frame = frame.mirrored()
        lm = landmarks(frame, res)
    scene = FrameScene(poly, disks, frame, field, res.meta.get("sources"))
    guards = GuardSweeper(scene)
    algo = algorithm2 if case is CaseTag.BOTH_SMALL else algorithm1
    chosen = algo(frame, lm, guards, scene)
    pts = frame.inverse(np.array([p for p, _ in chosen]))
    pts[0] = res.cstar
    # tags name landmarks of the frame actually used (mirrored in case (ii))
    tags = [t for _, t in chosen]
    codes = poly.locate_many(pts, EPS_GEOM * res.rstar)
    # a landmark outside P cannot serve as a piercing point; drop it and say so
    dropped = [tags[k] for k in np.nonzero(codes < 0)[0]]
    keep = codes >= 0
    points = tuple(Point(float(x), float(y)) for x, y in pts[keep])
    on_boundary = [tags[k] for k in np.nonzero(codes == 0)[0]]
    tags = [t for t, k in zip(tags, keep) if k]
    info = {
        "alpha2": lm.alpha2,
        "alpha3": lm.alpha3,
        "sweeps": dict(guards.records),
        "degenerate_sweeps": [k for k, r in guards.records.items() if r.degenerate],
        "on_boundary": on_boundary,
        "dropped": dropped,
    }
    return PiercingSet(points, tuple(tags), case, frame, res, info)
