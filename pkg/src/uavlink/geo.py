"""Coordinates, the degree-offset projection, distances and trilateration."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import GeometryError, InputError

# Equirectangular metres per degree near the reference point.
M_PER_DEG_LON_EQUATOR = 111320.0
M_PER_DEG_LAT = 110574.0

PAPER_SCALE = 100000.0


@dataclass(frozen=True)
class GeoCoord:
    lat: float
    lon: float
    alt: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.lat) and -90.0 <= self.lat <= 90.0):
            raise InputError(f"latitude out of range: {self.lat}")
        if not (math.isfinite(self.lon) and -180.0 <= self.lon <= 180.0):
            raise InputError(f"longitude out of range: {self.lon}")
        if not math.isfinite(self.alt):
            raise InputError(f"altitude not finite: {self.alt}")


@dataclass(frozen=True)
class LocalPoint:
    x: float
    y: float
    z: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise InputError(f"non-finite local point: ({self.x}, {self.y}, {self.z})")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def __sub__(self, other: LocalPoint) -> tuple[float, float, float]:
        return (self.x - other.x, self.y - other.y, self.z - other.z)


class ProjectionMode(enum.Enum):
    PAPER_SCALE = "paper_scale"
    EQUIRECTANGULAR = "equirectangular"


@dataclass(frozen=True)
class ProjectionConfig:
    """Reference point and scaling for the lat/lon -> local plane mapping.

    In PAPER_SCALE mode local units are ``scale`` per degree (roughly metres
    but not exactly); EQUIRECTANGULAR yields metres and ignores ``scale``.
    x follows longitude, y follows latitude.
    """

    ref_lat: float = 22.0
    ref_lon: float = 39.0
    scale: float = PAPER_SCALE
    mode: ProjectionMode = ProjectionMode.EQUIRECTANGULAR

    def __post_init__(self):
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise InputError(f"projection scale must be > 0, got {self.scale}")
        GeoCoord(self.ref_lat, self.ref_lon)
        if self.mode is ProjectionMode.EQUIRECTANGULAR and math.cos(math.radians(self.ref_lat)) < 1e-9:
            raise InputError("equirectangular projection undefined at the poles")

    def _factors(self) -> tuple[float, float]:
        if self.mode is ProjectionMode.PAPER_SCALE:
            return self.scale, self.scale
        return M_PER_DEG_LON_EQUATOR * math.cos(math.radians(self.ref_lat)), M_PER_DEG_LAT


def to_local(g: GeoCoord, cfg: ProjectionConfig) -> LocalPoint:
    kx, ky = cfg._factors()
    return LocalPoint((g.lon - cfg.ref_lon) * kx, (g.lat - cfg.ref_lat) * ky, g.alt)


def to_geo(p: LocalPoint, cfg: ProjectionConfig) -> GeoCoord:
    kx, ky = cfg._factors()
    return GeoCoord(cfg.ref_lat + p.y / ky, cfg.ref_lon + p.x / kx, p.z)


def distance(a: LocalPoint, b: LocalPoint) -> float:
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)


def trilaterate(
    anchors: Sequence[tuple[LocalPoint, float]], z: float | None = None
) -> LocalPoint:
    """Least-squares xy position from ranges to three or more anchors.

    Ranges are treated as horizontal. The range equations are linearised by
    subtracting the first one, which leaves an ordinary linear system in
    (x, y). Altitude is not observable
    from near-planar ground anchors, so it is either passed in as ``z`` or
    taken as the mean anchor altitude weighted by 1 / (1 + range).
    """
    if len(anchors) < 3:
        raise GeometryError(f"trilateration needs at least 3 anchors, got {len(anchors)}")
    pts = np.array([[p.x, p.y, p.z] for p, _ in anchors], dtype=float)
    r = np.array([float(d) for _, d in anchors])
    if np.any(~np.isfinite(r)) or np.any(r < 0):
        raise GeometryError("anchor ranges must be finite and non-negative")

    if z is None:
        w = 1.0 / (1.0 + r)
        z = float(np.sum(w * pts[:, 2]) / np.sum(w))

    xy = pts[:, :2]
    # every anchor at the same spot with zero range: that spot is the answer
    if np.all(r == 0) and np.all(xy == xy[0]):
        return LocalPoint(float(xy[0, 0]), float(xy[0, 1]), z)

    A = 2.0 * (xy[1:] - xy[0])
    b = (r[0] ** 2 - r[1:] ** 2) + np.sum(xy[1:] ** 2, axis=1) - np.sum(xy[0] ** 2)
    span = max(float(np.max(np.abs(xy - xy[0]))), 1.0)
    if np.linalg.matrix_rank(A, tol=1e-9 * span) < 2:
        raise GeometryError("anchors are collinear in the xy-plane")
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    return LocalPoint(float(sol[0]), float(sol[1]), z)


def trilateration_residual(anchors: Sequence[tuple[LocalPoint, float]], p: LocalPoint) -> float:
    """Norm of horizontal range residuals at ``p``."""
    res = [math.hypot(a.x - p.x, a.y - p.y) - d for a, d in anchors]
    return math.sqrt(sum(v * v for v in res))
