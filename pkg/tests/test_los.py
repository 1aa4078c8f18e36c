import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenes import box, random_boxes_near, random_segment
from uavlink.errors import InputError
from uavlink.geo import LocalPoint
from uavlink.los import (
    Segment,
    first_blocking_obstacle,
    first_blocking_obstacle_with_t,
    los_clear,
    los_oracle_sampled,
    segment_box_entry,
    segment_intersects_box,
)
from uavlink.world import Obstacle, ObstacleDb

CUBE = box(1, (0, 0, 0), (10, 10, 10))


def seg(a, b):
    return Segment(LocalPoint(*a), LocalPoint(*b))


@pytest.mark.parametrize("a,b,hit", [
    ((-5, 5, 5), (15, 5, 5), True),      # straight through
    ((-5, 5, 20), (15, 5, 20), False),   # over the roof
    ((-5, 0, 0), (15, 0, 0), True),      # grazes an edge of the closed box
    ((-5, 5, 10), (15, 5, 10), True),    # slides along the top face
    ((-5, -5, 5), (-1, 20, 5), False),   # passes beside
    ((2, 2, 2), (3, 3, 3), True),        # entirely inside
    ((-5, 5, 5), (-0.001, 5, 5), False), # stops short of the box
    ((20, 5, 5), (30, 5, 5), False),     # box behind the transmitter
    ((5, 5, -10), (5, 5, 0), True),      # touches the floor
    ((-5, 5, 12), (15, 5, 8), True),     # descends into the roof
])
def test_segment_box_cases(a, b, hit):
    assert segment_intersects_box(seg(a, b), CUBE) is hit
    assert segment_intersects_box(seg(b, a), CUBE) is hit


def test_degenerate_segment():
    with pytest.raises(InputError):
        segment_intersects_box(seg((1, 1, 1), (1, 1, 1)), CUBE)
    with pytest.raises(InputError):
        los_clear(seg((1, 1, 1), (1, 1, 1)), ObstacleDb())


def test_entry_parameter():
    assert segment_box_entry(seg((-10, 5, 5), (10, 5, 5)), CUBE) == pytest.approx(0.5)
    assert segment_box_entry(seg((2, 2, 2), (30, 2, 2)), CUBE) == 0.0


def test_first_blocking_picks_nearest():
    s = seg((0, 0, 5), (100, 0, 5))
    near = box(8, (28, -2, 0), (32, 2, 10))   # t ~ 0.3
    far = box(2, (68, -2, 0), (72, 2, 10))    # t ~ 0.7
    assert first_blocking_obstacle(s, ObstacleDb([far, near])) is near
    o, t = first_blocking_obstacle_with_t(s, ObstacleDb([far, near]))
    assert t == pytest.approx(0.28)
    assert first_blocking_obstacle(seg((100, 0, 5), (0, 0, 5)), ObstacleDb([far, near])) is far
    assert first_blocking_obstacle(s, ObstacleDb()) is None


def test_los_clear_cases():
    s = seg((0, 0, 30), (400, 0, 0))
    assert los_clear(s, ObstacleDb())
    wall = box(1, (200, -5, 0), (210, 5, 40))
    assert not los_clear(s, ObstacleDb([wall]))
    # a 10 m shed under the sloping link: the segment is at z >= 7.5 over it
    shed = box(2, (90, -5, 0), (100, 5, 7))
    assert los_clear(s, ObstacleDb([shed]))
    assert los_oracle_sampled(s, ObstacleDb([shed]), 100_000)


def test_oracle_basics():
    s = seg((-5, 5, 5), (15, 5, 5))
    assert los_oracle_sampled(s, ObstacleDb(), 1000)
    assert not los_oracle_sampled(s, ObstacleDb([CUBE]), 1000)
    with pytest.raises(InputError):
        los_oracle_sampled(s, ObstacleDb(), 10)


def test_cull_never_changes_result():
    # box inside the endpoints' xy rectangle but far above the segment, and one outside it
    s = seg((0, 0, 0), (100, 100, 0))
    db = ObstacleDb([box(1, (40, 40, 50), (60, 60, 60)), box(2, (-30, -30, -5), (-1, -1, 5))])
    for o in db:
        assert (first_blocking_obstacle(s, [o]) is None) == (not segment_intersects_box(s, o))


@settings(max_examples=300)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_orientation_symmetry(seed):
    rng = np.random.default_rng(seed)
    s = random_segment(rng)
    for o in random_boxes_near(rng, s, 4):
        assert segment_intersects_box(s, o) == segment_intersects_box(Segment(s.b, s.a), o)


@settings(max_examples=300)
@given(st.integers(min_value=0, max_value=2**32 - 1),
       st.tuples(*[st.integers(min_value=-4096, max_value=4096)] * 3))
def test_translation_invariance(seed, shift):
    # integer shifts keep every coordinate exact, so the comparison is exact too
    rng = np.random.default_rng(seed)
    s = Segment(LocalPoint(*np.round(rng.uniform(0, 500, 3))), LocalPoint(*np.round(rng.uniform(0, 500, 3))))
    if s.a == s.b:
        return
    db = ObstacleDb(
        Obstacle(i, LocalPoint(*np.round(rng.uniform(0, 500, 3))), tuple(np.round(rng.uniform(1, 200, 3))))
        for i in range(4)
    )

    def mv(p):
        return LocalPoint(p.x + shift[0], p.y + shift[1], p.z + shift[2])

    moved_db = ObstacleDb(Obstacle(o.id, mv(o.corner), o.dims) for o in db)
    moved_s = Segment(mv(s.a), mv(s.b))
    for o, mo in zip(db, moved_db):
        assert segment_intersects_box(s, o) == segment_intersects_box(moved_s, mo)


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_high_endpoints_always_clear(seed):
    rng = np.random.default_rng(seed)
    s = random_segment(rng)
    db = random_boxes_near(rng, s, 5)
    top = max(o.hi[2] for o in db)
    lifted = Segment(LocalPoint(s.a.x, s.a.y, top + rng.uniform(0.01, 50)),
                     LocalPoint(s.b.x, s.b.y, top + rng.uniform(0.01, 50)))
    assert los_clear(lifted, db)


def test_differential_against_oracle_small():
    rng = np.random.default_rng(1234)
    for _ in range(100):
        s = random_segment(rng)
        db = random_boxes_near(rng, s, int(rng.integers(1, 6)))
        assert los_clear(s, db) == los_oracle_sampled(s, db, 100_000)
