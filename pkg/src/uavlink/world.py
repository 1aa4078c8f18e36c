"""Node, obstacle and waypoint tables: loading, canonical dumping, queries."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from . import csvio
from .errors import InputError, LoadError, QueryError
from .geo import GeoCoord, LocalPoint, ProjectionConfig, distance, to_geo, to_local

NODE_HEADER = ["id", "mac", "lat", "lon", "alt_m"]
OBSTACLE_HEADER = ["id", "lat", "lon", "dx_m", "dy_m", "dz_m"]
OBSTACLE_CORNERS_HEADER = ["id", "lat1", "lon1", "lat2", "lon2", "height_m"]
WAYPOINT_HEADER = ["t_s", "lat", "lon", "alt_m"]

_MAC = re.compile(r"[0-9A-Fa-f]{16}")


@dataclass(frozen=True)
class NodeRecord:
    id: int
    mac: str
    position: LocalPoint
    geo: GeoCoord | None = None

    def __post_init__(self):
        if not _MAC.fullmatch(self.mac):
            raise InputError(f"MAC must be 16 hex digits, got {self.mac!r}")


@dataclass(frozen=True)
class Obstacle:
    """Axis-aligned box: ``corner`` is the min corner, ``dims`` the extents."""

    id: int
    corner: LocalPoint
    dims: tuple[float, float, float]
    geo: GeoCoord | None = None

    def __post_init__(self):
        if len(self.dims) != 3 or not all(math.isfinite(v) and v > 0 for v in self.dims):
            raise InputError(f"obstacle {self.id}: dimensions must be > 0, got {self.dims}")

    @property
    def lo(self) -> tuple[float, float, float]:
        return self.corner.as_tuple()

    @property
    def hi(self) -> tuple[float, float, float]:
        c = self.corner
        return (c.x + self.dims[0], c.y + self.dims[1], c.z + self.dims[2])

    def contains(self, p: LocalPoint) -> bool:
        return all(l <= v <= h for l, v, h in zip(self.lo, p.as_tuple(), self.hi))


@dataclass(frozen=True)
class Waypoint:
    t: float
    position: GeoCoord


class NodeDb(tuple):
    """Immutable ordered collection of NodeRecords with unique ids."""

    def __new__(cls, nodes: Iterable[NodeRecord] = ()):
        db = super().__new__(cls, nodes)
        seen = set()
        for n in db:
            if n.id in seen:
                raise InputError(f"duplicate node id {n.id}")
            seen.add(n.id)
        return db

    def by_id(self, node_id: int) -> NodeRecord:
        for n in self:
            if n.id == node_id:
                return n
        raise QueryError(f"unknown node id {node_id}")


class ObstacleDb(tuple):
    def __new__(cls, obstacles: Iterable[Obstacle] = ()):
        db = super().__new__(cls, obstacles)
        ids = [o.id for o in db]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate obstacle id")
        return db


class WaypointTable(tuple):
    def __new__(cls, waypoints: Iterable[Waypoint] = ()):
        table = super().__new__(cls, waypoints)
        for prev, cur in zip(table, table[1:]):
            if not cur.t > prev.t:
                raise InputError(f"waypoint times must strictly increase ({prev.t} then {cur.t})")
        return table


def _geo(row, lat_key, lon_key, alt, path, lineno) -> GeoCoord:
    lat = csvio.parse_float(row[lat_key], lat_key, path, lineno)
    lon = csvio.parse_float(row[lon_key], lon_key, path, lineno)
    try:
        return GeoCoord(lat, lon, alt)
    except InputError as e:
        raise LoadError(str(e), path, lineno) from None


def load_nodes(source: TextIO, cfg: ProjectionConfig = ProjectionConfig()) -> NodeDb:
    path = csvio.source_name(source)
    header, rows = csvio.read_rows(source)
    csvio.require_header(header, NODE_HEADER, path)
    nodes: list[NodeRecord] = []
    seen: set[int] = set()
    for lineno, row in rows:
        node_id = csvio.parse_int(row["id"], "id", path, lineno)
        if node_id in seen:
            raise LoadError(f"duplicate node id {node_id}", path, lineno)
        seen.add(node_id)
        mac = row["mac"]
        if not _MAC.fullmatch(mac):
            raise LoadError(f"malformed MAC {mac!r} (need 16 hex digits)", path, lineno)
        alt = csvio.parse_float(row["alt_m"], "alt_m", path, lineno)
        g = _geo(row, "lat", "lon", alt, path, lineno)
        nodes.append(NodeRecord(node_id, mac, to_local(g, cfg), g))
    if not nodes:
        raise LoadError("no nodes", path)
    return NodeDb(nodes)


def load_obstacles(source: TextIO, cfg: ProjectionConfig = ProjectionConfig()) -> ObstacleDb:
    """Load boxes given either as corner+dims or as two opposite ground corners.

    Corner heights sit on the ground (z = 0). In two-corner form the box spans
    both corners in the local frame and rises ``height_m``.
    """
    path = csvio.source_name(source)
    header, rows = csvio.read_rows(source)
    two_corner = header == OBSTACLE_CORNERS_HEADER
    if not two_corner:
        csvio.require_header(header, OBSTACLE_HEADER, path)
    out: list[Obstacle] = []
    seen: set[int] = set()
    for lineno, row in rows:
        oid = csvio.parse_int(row["id"], "id", path, lineno)
        if oid in seen:
            raise LoadError(f"duplicate obstacle id {oid}", path, lineno)
        seen.add(oid)
        if two_corner:
            p1 = to_local(_geo(row, "lat1", "lon1", 0.0, path, lineno), cfg)
            p2 = to_local(_geo(row, "lat2", "lon2", 0.0, path, lineno), cfg)
            corner = LocalPoint(min(p1.x, p2.x), min(p1.y, p2.y), 0.0)
            dims = (abs(p2.x - p1.x), abs(p2.y - p1.y),
                    csvio.parse_float(row["height_m"], "height_m", path, lineno))
            g = to_geo(corner, cfg)
        else:
            g = _geo(row, "lat", "lon", 0.0, path, lineno)
            corner = to_local(g, cfg)
            dims = tuple(csvio.parse_float(row[k], k, path, lineno) for k in ("dx_m", "dy_m", "dz_m"))
        if not all(d > 0 for d in dims):
            raise LoadError(f"obstacle {oid}: non-positive dimension {dims}", path, lineno)
        out.append(Obstacle(oid, corner, dims, g))
    return ObstacleDb(out)


def load_waypoints(source: TextIO) -> WaypointTable:
    path = csvio.source_name(source)
    header, rows = csvio.read_rows(source)
    csvio.require_header(header, WAYPOINT_HEADER, path)
    out: list[Waypoint] = []
    for lineno, row in rows:
        t = csvio.parse_float(row["t_s"], "t_s", path, lineno)
        if t < 0:
            raise LoadError(f"t_s must be >= 0, got {t}", path, lineno)
        if out and not t > out[-1].t:
            raise LoadError(f"t_s must strictly increase ({out[-1].t} then {t})", path, lineno)
        alt = csvio.parse_float(row["alt_m"], "alt_m", path, lineno)
        out.append(Waypoint(t, _geo(row, "lat", "lon", alt, path, lineno)))
    return WaypointTable(out)


def dump_nodes(stream: TextIO, db: NodeDb, cfg: ProjectionConfig = ProjectionConfig()) -> None:
    def row(n: NodeRecord):
        g = n.geo if n.geo is not None else to_geo(n.position, cfg)
        return [n.id, n.mac, csvio.fmt(g.lat), csvio.fmt(g.lon), csvio.fmt(g.alt)]

    csvio.write_rows(stream, NODE_HEADER, (row(n) for n in db))


def dump_obstacles(stream: TextIO, db: ObstacleDb, cfg: ProjectionConfig = ProjectionConfig()) -> None:
    """Always writes the corner+dims form."""

    def row(o: Obstacle):
        g = o.geo if o.geo is not None else to_geo(o.corner, cfg)
        return [o.id, csvio.fmt(g.lat), csvio.fmt(g.lon), *(csvio.fmt(d) for d in o.dims)]

    csvio.write_rows(stream, OBSTACLE_HEADER, (row(o) for o in db))


def dump_waypoints(stream: TextIO, table: WaypointTable) -> None:
    csvio.write_rows(
        stream,
        WAYPOINT_HEADER,
        ([csvio.fmt(w.t), csvio.fmt(w.position.lat), csvio.fmt(w.position.lon), csvio.fmt(w.position.alt)]
         for w in table),
    )


def nearest_node(uav: LocalPoint, db: Sequence[NodeRecord]) -> tuple[NodeRecord, float]:
    """Closest node by 3D distance; ties go to the lowest id."""
    if not db:
        raise QueryError("nearest_node on an empty node database")
    return min(((n, distance(uav, n.position)) for n in db), key=lambda nd: (nd[1], nd[0].id))
