"""Per-tick communicate/stay-silent decision and whole-trajectory replay."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from . import csvio
from .errors import InputError, LoadError
from .geo import LocalPoint, ProjectionConfig, to_local
from .los import Segment, first_blocking_obstacle
from .protocol import (
    ChannelConfig,
    EnergyLedger,
    EnergyModel,
    ProtocolEvent,
    account,
    exchange,
)
from .radio import LinkThresholds, ModelPair, PathLossModel
from .world import NodeRecord, Obstacle, Waypoint, nearest_node

DECISION_HEADER = ["tick", "t_s", "uav_x", "uav_y", "uav_z", "node_id", "d_min_m", "kind", "blocking_obstacle_id"]


class DecisionKind(enum.Enum):
    TRANSMIT_NEAR = "TransmitNear"
    TRANSMIT_LOS_CLEAR = "TransmitLosClear"
    BLOCKED_BY_OBSTACLE = "BlockedByObstacle"
    OUT_OF_RANGE = "OutOfRange"

    @property
    def transmits(self) -> bool:
        return self in (DecisionKind.TRANSMIT_NEAR, DecisionKind.TRANSMIT_LOS_CLEAR)


@dataclass(frozen=True)
class Decision:
    tick_index: int
    time: float
    uav: LocalPoint
    node_id: int
    d_min: float
    kind: DecisionKind
    blocking_obstacle_id: int | None = None

    def __post_init__(self):
        if (self.blocking_obstacle_id is not None) != (self.kind is DecisionKind.BLOCKED_BY_OBSTACLE):
            raise InputError("blocking_obstacle_id must be set exactly for BlockedByObstacle")


def classify_distance(d_min: float, th: LinkThresholds) -> DecisionKind | None:
    """Band of ``d_min``: near, out of range, or None for the LOS-checked middle.

    Exactly alpha or beta falls in the middle band.
    """
    if d_min < th.alpha:
        return DecisionKind.TRANSMIT_NEAR
    if d_min > th.beta:
        return DecisionKind.OUT_OF_RANGE
    return None


def decide(
    uav: LocalPoint,
    nodes: Sequence[NodeRecord],
    obstacles: Sequence[Obstacle],
    th: LinkThresholds,
    tick_index: int = 0,
    time: float = 0.0,
) -> Decision:
    node, d_min = nearest_node(uav, nodes)
    kind = classify_distance(d_min, th)
    blocker = None
    if kind is None:
        # d_min >= alpha > 0 here, so the segment is never degenerate
        hit = first_blocking_obstacle(Segment(uav, node.position), obstacles)
        if hit is None:
            kind = DecisionKind.TRANSMIT_LOS_CLEAR
        else:
            kind = DecisionKind.BLOCKED_BY_OBSTACLE
            blocker = hit.id
    return Decision(tick_index, time, uav, node.id, d_min, kind, blocker)


def channel_model(kind: DecisionKind, models: ModelPair) -> PathLossModel:
    """Propagation model used to simulate the exchange for a transmitting tick.

    Near ticks skip the obstacle check, so they get the indoor (obstructed)
    curve; LOS-verified ticks get the outdoor curve.
    """
    return models.indoor if kind is DecisionKind.TRANSMIT_NEAR else models.outdoor


@dataclass(frozen=True)
class SimulationRun:
    thresholds: LinkThresholds
    projection: ProjectionConfig
    models: ModelPair
    channel: ChannelConfig
    energy: EnergyModel
    decisions: tuple[Decision, ...]
    events: tuple[ProtocolEvent, ...]
    ledger: EnergyLedger

    def counts(self) -> dict[DecisionKind, int]:
        out = {k: 0 for k in DecisionKind}
        for d in self.decisions:
            out[d.kind] += 1
        return out


def simulate(
    waypoints: Sequence[Waypoint],
    nodes: Sequence[NodeRecord],
    obstacles: Sequence[Obstacle],
    th: LinkThresholds,
    cfg: ProjectionConfig,
    models: ModelPair = ModelPair(),
    channel: ChannelConfig = ChannelConfig(),
    energy: EnergyModel = EnergyModel(),
) -> SimulationRun:
    """Replay the waypoint table one tick per waypoint.

    Every transmitting tick runs an ACK exchange; the run owns a single
    generator seeded from ``channel.seed``.
    """
    if not nodes:
        raise InputError("simulation needs at least one node")
    rng = channel.make_rng()
    decisions: list[Decision] = []
    events: list[ProtocolEvent] = []
    for i, wp in enumerate(waypoints):
        dec = decide(to_local(wp.position, cfg), nodes, obstacles, th, tick_index=i, time=wp.t)
        decisions.append(dec)
        if dec.kind.transmits:
            events.append(exchange(dec, channel_model(dec.kind, models), th, channel, rng))
    return SimulationRun(
        th, cfg, models, channel, energy, tuple(decisions), tuple(events), account(decisions, energy)
    )


def write_decisions(stream: TextIO, decisions: Iterable[Decision]) -> None:
    csvio.write_rows(
        stream,
        DECISION_HEADER,
        (
            [d.tick_index, csvio.fmt(d.time), csvio.fmt(d.uav.x), csvio.fmt(d.uav.y), csvio.fmt(d.uav.z),
             d.node_id, csvio.fmt(d.d_min), d.kind.value,
             "" if d.blocking_obstacle_id is None else d.blocking_obstacle_id]
            for d in decisions
        ),
    )


def read_decisions(stream: TextIO) -> list[Decision]:
    path = csvio.source_name(stream)
    header, rows = csvio.read_rows(stream)
    csvio.require_header(header, DECISION_HEADER, path)
    out = []
    for lineno, row in rows:
        try:
            kind = DecisionKind(row["kind"])
        except ValueError:
            raise LoadError(f"unknown decision kind {row['kind']!r}", path, lineno) from None
        blocker = row["blocking_obstacle_id"]
        f = {k: csvio.parse_float(row[k], k, path, lineno) for k in ("t_s", "uav_x", "uav_y", "uav_z", "d_min_m")}
        try:
            out.append(Decision(
                csvio.parse_int(row["tick"], "tick", path, lineno),
                f["t_s"],
                LocalPoint(f["uav_x"], f["uav_y"], f["uav_z"]),
                csvio.parse_int(row["node_id"], "node_id", path, lineno),
                f["d_min_m"],
                kind,
                csvio.parse_int(blocker, "blocking_obstacle_id", path, lineno) if blocker else None,
            ))
        except InputError as e:
            if isinstance(e, LoadError):
                raise
            raise LoadError(str(e), path, lineno) from None
    return out


def timeline(run_or_decisions: SimulationRun | Iterable[Decision]) -> list[DecisionKind]:
    decisions = run_or_decisions.decisions if isinstance(run_or_decisions, SimulationRun) else run_or_decisions
    return [d.kind for d in decisions]


def is_consistent(d: Decision, th: LinkThresholds) -> bool:
    """Does the decision's kind agree with its d_min under ``th``?"""
    band = classify_distance(d.d_min, th)
    if band is None:
        return d.kind in (DecisionKind.TRANSMIT_LOS_CLEAR, DecisionKind.BLOCKED_BY_OBSTACLE)
    return d.kind is band and math.isfinite(d.d_min)
