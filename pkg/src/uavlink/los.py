"""Line of sight between two points against axis-aligned obstacle boxes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError
from .geo import LocalPoint
from .world import Obstacle


@dataclass(frozen=True)
class Segment:
    a: LocalPoint
    b: LocalPoint

    def point_at(self, t: float) -> LocalPoint:
        return LocalPoint(*(p + t * (q - p) for p, q in zip(self.a.as_tuple(), self.b.as_tuple())))


def _check(s: Segment) -> None:
    if s.a == s.b:
        raise InputError("degenerate segment: endpoints coincide")


def segment_box_entry(s: Segment, o: Obstacle) -> float | None:
    """Smallest t in [0, 1] where a + t*(b - a) is inside the closed box, else None.

    Slab test: each axis restricts t to the interval between its two face
    crossings; the segment hits the box iff the three intervals and [0, 1]
    overlap. An axis with no motion either always or never contains the
    segment.
    """
    _check(s)
    t0, t1 = 0.0, 1.0
    for p, q, lo, hi in zip(s.a.as_tuple(), s.b.as_tuple(), o.lo, o.hi):
        d = q - p
        if d == 0.0:
            if p < lo or p > hi:
                return None
            continue
        ta, tb = (lo - p) / d, (hi - p) / d
        if ta > tb:
            ta, tb = tb, ta
        t0 = max(t0, ta)
        t1 = min(t1, tb)
        if t0 > t1:
            return None
    return t0


def segment_intersects_box(s: Segment, o: Obstacle) -> bool:
    return segment_box_entry(s, o) is not None


def _xy_bounds_overlap(s: Segment, o: Obstacle) -> bool:
    # cull against the rectangle spanned by the endpoints; never changes a result
    return not (
        o.hi[0] < min(s.a.x, s.b.x) or o.lo[0] > max(s.a.x, s.b.x)
        or o.hi[1] < min(s.a.y, s.b.y) or o.lo[1] > max(s.a.y, s.b.y)
    )


def first_blocking_obstacle_with_t(s: Segment, db: Sequence[Obstacle]) -> tuple[Obstacle, float] | None:
    _check(s)
    best: tuple[Obstacle, float] | None = None
    for o in db:
        if not _xy_bounds_overlap(s, o):
            continue
        t = segment_box_entry(s, o)
        if t is not None and (best is None or t < best[1]):
            best = (o, t)
    return best


def first_blocking_obstacle(s: Segment, db: Sequence[Obstacle]) -> Obstacle | None:
    hit = first_blocking_obstacle_with_t(s, db)
    return None if hit is None else hit[0]


def los_clear(s: Segment, db: Sequence[Obstacle]) -> bool:
    return first_blocking_obstacle_with_t(s, db) is None


def los_oracle_sampled(s: Segment, db: Sequence[Obstacle], n: int = 100_000) -> bool:
    """Brute-force check: sample n evenly spaced points (both ends included).

    Misses boxes whose chord along the segment is shorter than the sample
    spacing; meant only as an independent cross-check.
    """
    if n < 1000:
        raise InputError(f"oracle needs at least 1000 samples, got {n}")
    t = np.linspace(0.0, 1.0, n)[:, None]
    a = np.array(s.a.as_tuple())
    pts = a + t * (np.array(s.b.as_tuple()) - a)
    for o in db:
        inside = np.all((pts >= np.array(o.lo)) & (pts <= np.array(o.hi)), axis=1)
        if inside.any():
            return False
    return True
