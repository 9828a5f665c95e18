"""JSON instance files.

Floats are written with ``repr`` (shortest round-trip), so load(save(x))
reproduces every coordinate bit for bit.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import InvalidInput, NotPairwiseIntersecting
from ..geodesics import GeodesicDisk
from ..kernel import SimplePolygon, validate_polygon


@dataclass(frozen=True)
class Instance:
    polygon: SimplePolygon
    disks: tuple[GeodesicDisk, ...]
    name: str = ""
    seed: int | None = None
    # vertices exactly as given, so a re-save does not reorder them
    raw_polygon: tuple = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict:
        verts = self.raw_polygon or tuple(tuple(map(float, v)) for v in self.polygon.vertices)
        return {
            "polygon": [[float(x), float(y)] for x, y in verts],
            "disks": [{"center": [d.center.x, d.center.y], "radius": d.radius} for d in self.disks],
            "name": self.name,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict, check_pairwise: bool = True) -> "Instance":
        try:
            raw = tuple((float(x), float(y)) for x, y in data["polygon"])
            disks = tuple(GeodesicDisk(tuple(d["center"]), d["radius"]) for d in data["disks"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed instance: {exc}") from exc
        if not disks:
            raise InvalidInput("instance has no disks")
        poly = validate_polygon(raw)
        for d in disks:
            if not poly.contains(d.center):
                raise InvalidInput(f"disk center {tuple(d.center)} is outside the polygon")
        inst = cls(poly, disks, str(data.get("name", "")), data.get("seed"), raw)
        if check_pairwise:
            from ..mindisk import verify_pairwise
            from ..kernel import triangulate

            if not verify_pairwise(poly, triangulate(poly), disks):
                raise NotPairwiseIntersecting("instance disks are not pairwise intersecting")
        return inst


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def save_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps(inst.to_dict()), encoding="utf-8")


def load_instance(path, check_pairwise: bool = True) -> Instance:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc})") from exc
    return Instance.from_dict(data, check_pairwise=check_pairwise)


def load_points(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        pts = [(float(x), float(y)) for x, y in data["points"]]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"{path}: malformed points file ({exc})") from exc
    if not pts:
        raise InvalidInput(f"{path}: no points")
    data["points"] = pts
    return data
