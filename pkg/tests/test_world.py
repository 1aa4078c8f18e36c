import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scenes import brute_nearest, random_nodes
from uavlink.errors import LoadError, QueryError
from uavlink.geo import GeoCoord, LocalPoint, ProjectionConfig, distance, to_geo, to_local
from uavlink.world import (
    NodeDb,
    NodeRecord,
    dump_nodes,
    dump_obstacles,
    dump_waypoints,
    load_nodes,
    load_obstacles,
    load_waypoints,
    nearest_node,
)

CFG = ProjectionConfig(22.3, 39.1)

NODES_CSV = """\
# three motes
id,mac,lat,lon,alt_m
1,0013A20040A1B2C1,22.300,39.100,0
2,0013a20040a1b2c2,22.301,39.102,1.5

3,0013A20040A1B2C3,22.302,39.104,0
"""


def named(text, name="data.csv"):
    s = io.StringIO(text)
    s.name = name
    return s


def test_load_nodes():
    db = load_nodes(named(NODES_CSV), CFG)
    assert [n.id for n in db] == [1, 2, 3]
    assert db[0].position == LocalPoint(0.0, 0.0, 0.0)
    assert db[1].position == to_local(GeoCoord(22.301, 39.102, 1.5), CFG)


def test_load_nodes_duplicate_id_names_line():
    text = NODES_CSV.replace("3,0013A20040A1B2C3", "2,0013A20040A1B2C3")
    with pytest.raises(LoadError, match=r"nodes\.csv:6:.*duplicate"):
        load_nodes(named(text, "nodes.csv"), CFG)


@pytest.mark.parametrize("mac", ["0013A20040A1B2C", "0013A20040A1B2C1F", "0013A20040A1B2CZ"])
def test_load_nodes_bad_mac(mac):
    text = NODES_CSV.replace("0013A20040A1B2C1", mac)
    with pytest.raises(LoadError, match=":3:"):
        load_nodes(named(text), CFG)


def test_load_nodes_empty():
    with pytest.raises(LoadError, match="no nodes"):
        load_nodes(named("id,mac,lat,lon,alt_m\n"), CFG)
    with pytest.raises(LoadError):
        load_nodes(named(""), CFG)


def test_load_nodes_unparseable():
    with pytest.raises(LoadError, match=":4:"):
        load_nodes(named(NODES_CSV.replace("22.301", "north")), CFG)
    with pytest.raises(LoadError, match=":3:"):
        load_nodes(named(NODES_CSV.replace(",0\n2,", ",0,9\n2,", 1)), CFG)


def test_load_obstacles_corner_dims():
    db = load_obstacles(named("id,lat,lon,dx_m,dy_m,dz_m\n1,22.3,39.1,10,20,30\n"), CFG)
    assert db[0].lo == (0.0, 0.0, 0.0) and db[0].hi == (10.0, 20.0, 30.0)


def test_load_obstacles_zero_dimension():
    with pytest.raises(LoadError, match=":2:"):
        load_obstacles(named("id,lat,lon,dx_m,dy_m,dz_m\n1,22.3,39.1,0,20,30\n"), CFG)
    with pytest.raises(LoadError):
        load_obstacles(named("id,lat1,lon1,lat2,lon2,height_m\n1,22.3,39.1,22.3,39.2,15\n"), CFG)


def test_two_corner_matches_corner_dims():
    # box [100, 140] x [50, 80] x [0, 15] in local metres
    lo = to_geo(LocalPoint(100.0, 50.0), CFG)
    hi = to_geo(LocalPoint(140.0, 80.0), CFG)
    # corners given in the "wrong" order still describe the same box
    two = load_obstacles(named(
        f"id,lat1,lon1,lat2,lon2,height_m\n5,{hi.lat!r},{lo.lon!r},{lo.lat!r},{hi.lon!r},15\n"), CFG)[0]
    one = load_obstacles(named(f"id,lat,lon,dx_m,dy_m,dz_m\n5,{lo.lat!r},{lo.lon!r},40,30,15\n"), CFG)[0]
    assert two.id == one.id
    assert two.lo == pytest.approx(one.lo, abs=1e-6)
    assert two.dims == pytest.approx(one.dims, abs=1e-6)


def test_load_waypoints():
    table = load_waypoints(named("t_s,lat,lon,alt_m\n0,22.3,39.1,30\n5,22.3,39.1005,30\n10,22.3,39.101,30\n"))
    assert [w.t for w in table] == [0.0, 5.0, 10.0]
    with pytest.raises(LoadError, match=":4:"):
        load_waypoints(named("t_s,lat,lon,alt_m\n0,22.3,39.1,30\n5,22.3,39.1005,30\n5,22.3,39.101,30\n"))
    with pytest.raises(LoadError):
        load_waypoints(named("t_s,lat,lon,alt_m\n-1,22.3,39.1,30\n"))


def test_waypoints_every_50m():
    rows = []
    for i in range(9):
        g = to_geo(LocalPoint(50.0 * i, 0.0, 30.0), CFG)
        rows.append(f"{5 * i},{g.lat!r},{g.lon!r},30")
    table = load_waypoints(named("t_s,lat,lon,alt_m\n" + "\n".join(rows) + "\n"))
    assert len(table) == 9
    pts = [to_local(w.position, CFG) for w in table]
    assert [distance(a, b) for a, b in zip(pts, pts[1:])] == pytest.approx([50.0] * 8, abs=1e-6)


def _roundtrip(dump, load, text, *cfg):
    first = io.StringIO()
    dump(first, load(named(text), *cfg), *cfg)
    second = io.StringIO()
    dump(second, load(named(first.getvalue()), *cfg), *cfg)
    return first.getvalue(), second.getvalue()


def test_dump_is_idempotent():
    a, b = _roundtrip(dump_nodes, load_nodes, NODES_CSV, CFG)
    assert a == b
    a, b = _roundtrip(dump_obstacles, load_obstacles,
                      "id,lat1,lon1,lat2,lon2,height_m\n1,22.3001,39.1001,22.3005,39.1003,12\n", CFG)
    assert a == b
    a, b = _roundtrip(dump_waypoints, load_waypoints, "t_s,lat,lon,alt_m\n0,22.3,39.1,30\n2.5,22.31,39.11,31\n")
    assert a == b


def _node(i, x, y, z=0.0):
    return NodeRecord(i, f"{i:016X}", LocalPoint(x, y, z))


def test_nearest_examples():
    n, d = nearest_node(LocalPoint(0, 0, 0), NodeDb([_node(1, 100, 0), _node(2, 200, 0)]))
    assert (n.id, d) == (1, 100.0)
    n, _ = nearest_node(LocalPoint(0, 0, 0), NodeDb([_node(7, 50, 0), _node(3, -50, 0)]))
    assert n.id == 3
    n, d = nearest_node(LocalPoint(1, 1, 1), NodeDb([_node(9, 1, 1, 1)]))
    assert (n.id, d) == (9, 0.0)


def test_nearest_empty():
    with pytest.raises(QueryError):
        nearest_node(LocalPoint(0, 0, 0), NodeDb())


def test_nodedb_rejects_duplicates():
    with pytest.raises(ValueError):
        NodeDb([_node(1, 0, 0), _node(1, 5, 5)])


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=12))
def test_nearest_is_minimal(seed, k):
    rng = np.random.default_rng(seed)
    db = random_nodes(rng, k)
    uav = LocalPoint(*rng.uniform(0, 2000, size=2), rng.uniform(0, 150))
    n, d = nearest_node(uav, db)
    assert all(d <= distance(uav, m.position) for m in db)
    assert (n.id, d) == brute_nearest(uav, db)
    assert math.isclose(d, distance(uav, n.position))
