"""ACK exchange over a simulated channel, and energy bookkeeping."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence, TextIO

import numpy as np

from . import csvio
from .errors import ContractViolation, InputError, LoadError
from .radio import LinkThresholds, PathLossModel, predict_rssi

if TYPE_CHECKING:
    from .decision import Decision

SPEED_OF_LIGHT = 299_792_458.0  # m/s

EVENT_HEADER = ["tick", "node_id", "delivered", "rssi_dbm", "elapsed_ms"]


class FrameKind(enum.Enum):
    ACK_REQUEST = "AckRequest"
    ACK_REPLY = "AckReply"


@dataclass(frozen=True)
class Frame:
    kind: FrameKind
    src_mac: str
    dst_mac: str
    payload: bytes = b""

    def reply(self, payload: bytes = b"") -> Frame:
        if self.kind is not FrameKind.ACK_REQUEST:
            raise ContractViolation("only an AckRequest can be answered")
        return Frame(FrameKind.ACK_REPLY, self.dst_mac, self.src_mac, payload)


class ChannelMode(enum.Enum):
    DETERMINISTIC = "deterministic"
    STOCHASTIC = "stochastic"


@dataclass(frozen=True)
class ChannelConfig:
    mode: ChannelMode = ChannelMode.DETERMINISTIC
    noise_sigma: float = 0.0  # dB, stochastic mode only
    timeout: float = 1000.0  # ms
    base_latency: float = 20.0  # ms
    seed: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.noise_sigma) and self.noise_sigma >= 0):
            raise InputError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if not (math.isfinite(self.timeout) and self.base_latency >= 0 and self.timeout > self.base_latency):
            raise InputError("channel timeout must exceed base_latency (both >= 0)")

    def make_rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class ProtocolEvent:
    tick_index: int
    node_id: int
    delivered: bool
    rssi: float
    elapsed: float  # ms


@dataclass(frozen=True)
class EnergyModel:
    e_tx: float = 0.5  # J per transmission attempt
    e_rx: float = 0.25  # J per listen window
    e_idle: float = 0.01  # J per silent tick

    def __post_init__(self):
        vals = (self.e_tx, self.e_rx, self.e_idle)
        if not all(math.isfinite(v) and v >= 0 for v in vals):
            raise InputError("energy costs must be finite and >= 0")
        if not self.e_tx > self.e_idle:
            raise InputError("e_tx must exceed e_idle")


@dataclass(frozen=True)
class EnergyLedger:
    optimized_joules: float
    baseline_joules: float

    @property
    def savings_fraction(self) -> float:
        if self.baseline_joules == 0:
            return 0.0
        return 1.0 - self.optimized_joules / self.baseline_joules


def exchange(
    tick: Decision,
    model: PathLossModel,
    th: LinkThresholds,
    ch: ChannelConfig,
    rng: np.random.Generator | None = None,
) -> ProtocolEvent:
    """Send an ACK request to the tick's nearest node and wait for the reply.

    ``rng`` belongs to the calling run; when omitted in stochastic mode a
    fresh generator is seeded from ``ch.seed``.
    """
    if not tick.kind.transmits:
        raise ContractViolation(f"exchange called on a {tick.kind.value} tick")
    rssi = predict_rssi(model, max(tick.d_min, 1e-9))
    received = rssi
    if ch.mode is ChannelMode.STOCHASTIC and ch.noise_sigma > 0:
        if rng is None:
            rng = ch.make_rng()
        received = rssi + float(rng.normal(0.0, ch.noise_sigma))
    delivered = received >= th.rssi_threshold
    if delivered:
        elapsed = ch.base_latency + 1000.0 * tick.d_min / SPEED_OF_LIGHT
    else:
        elapsed = ch.timeout
    return ProtocolEvent(tick.tick_index, tick.node_id, delivered, rssi, elapsed)


def account(decisions: Iterable[Decision], em: EnergyModel = EnergyModel()) -> EnergyLedger:
    """Energy of the gated protocol vs. pinging on every tick."""
    per_attempt = em.e_tx + em.e_rx
    optimized = 0.0
    ticks = 0
    for d in decisions:
        ticks += 1
        optimized += per_attempt if d.kind.transmits else em.e_idle
    return EnergyLedger(optimized, ticks * per_attempt)


def write_events(stream: TextIO, events: Iterable[ProtocolEvent]) -> None:
    csvio.write_rows(
        stream,
        EVENT_HEADER,
        ([e.tick_index, e.node_id, "true" if e.delivered else "false", csvio.fmt(e.rssi), csvio.fmt(e.elapsed)]
         for e in events),
    )


def read_events(stream: TextIO) -> list[ProtocolEvent]:
    path = csvio.source_name(stream)
    header, rows = csvio.read_rows(stream)
    csvio.require_header(header, EVENT_HEADER, path)
    out = []
    for lineno, row in rows:
        if row["delivered"] not in ("true", "false"):
            raise LoadError(f"delivered must be true or false, got {row['delivered']!r}", path, lineno)
        out.append(ProtocolEvent(
            csvio.parse_int(row["tick"], "tick", path, lineno),
            csvio.parse_int(row["node_id"], "node_id", path, lineno),
            row["delivered"] == "true",
            csvio.parse_float(row["rssi_dbm"], "rssi_dbm", path, lineno),
            csvio.parse_float(row["elapsed_ms"], "elapsed_ms", path, lineno),
        ))
    return out


def summary_lines(ledger: EnergyLedger) -> list[str]:
    return [
        f"optimized_j={csvio.fmt(ledger.optimized_joules)}",
        f"baseline_j={csvio.fmt(ledger.baseline_joules)}",
        f"savings={csvio.fmt(ledger.savings_fraction)}",
    ]


def delivery_rate(events: Sequence[ProtocolEvent]) -> float:
    return sum(e.delivered for e in events) / len(events) if events else 1.0
