"""Log-distance RSSI model: prediction, inversion, fitting and thresholds.

RSSI is kept in signed dBm (received power is negative in practice), and a
link is considered viable when its RSSI is at or above the threshold.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import csvio
from .errors import DegenerateFitError, InputError, LoadError

DEFAULT_RSSI_THRESHOLD = -30.0
DEFAULT_ALPHA = 162.0
DEFAULT_BETA = 725.0
INDOOR_EXPONENT = 2.8
OUTDOOR_EXPONENT = 2.0

MEASUREMENT_HEADER = ["distance_m", "rssi_dbm", "environment"]


class Environment(enum.Enum):
    INDOOR = "indoor"
    OUTDOOR = "outdoor"


@dataclass(frozen=True)
class RssiSample:
    distance: float
    rssi: float
    environment: Environment = Environment.OUTDOOR

    def __post_init__(self):
        if not (math.isfinite(self.distance) and self.distance > 0):
            raise InputError(f"sample distance must be > 0, got {self.distance}")
        if not math.isfinite(self.rssi):
            raise InputError(f"sample rssi not finite: {self.rssi}")


@dataclass(frozen=True)
class PathLossModel:
    intercept: float
    exponent: float
    ref_distance: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.intercept):
            raise InputError(f"model intercept not finite: {self.intercept}")
        if not (math.isfinite(self.exponent) and self.exponent > 0):
            raise InputError(f"path-loss exponent must be > 0, got {self.exponent}")
        if not (math.isfinite(self.ref_distance) and self.ref_distance > 0):
            raise InputError(f"reference distance must be > 0, got {self.ref_distance}")


@dataclass(frozen=True)
class LinkThresholds:
    rssi_threshold: float = DEFAULT_RSSI_THRESHOLD
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.rssi_threshold, self.alpha, self.beta)):
            raise InputError("invalid thresholds: values must be finite")
        if not 0 < self.alpha < self.beta:
            raise InputError(
                f"invalid thresholds: need 0 < alpha < beta, got alpha={self.alpha}, beta={self.beta}"
            )


def predict_rssi(m: PathLossModel, d: float) -> float:
    if not (math.isfinite(d) and d > 0):
        raise InputError(f"distance must be > 0, got {d}")
    return m.intercept - 10.0 * m.exponent * math.log10(d / m.ref_distance)


def invert_distance(m: PathLossModel, rssi: float) -> float:
    if not math.isfinite(rssi):
        raise InputError(f"rssi not finite: {rssi}")
    return m.ref_distance * 10.0 ** ((m.intercept - rssi) / (10.0 * m.exponent))


def derive_threshold_distance(m: PathLossModel, rssi_threshold: float) -> float:
    """Distance at which the model's RSSI curve crosses the threshold."""
    return invert_distance(m, rssi_threshold)


def model_through(distance: float, rssi: float, exponent: float, ref_distance: float = 1.0) -> PathLossModel:
    """Model with the given exponent whose curve passes through (distance, rssi)."""
    return PathLossModel(rssi + 10.0 * exponent * math.log10(distance / ref_distance), exponent, ref_distance)


DEFAULT_INDOOR = model_through(DEFAULT_ALPHA, DEFAULT_RSSI_THRESHOLD, INDOOR_EXPONENT)
DEFAULT_OUTDOOR = model_through(DEFAULT_BETA, DEFAULT_RSSI_THRESHOLD, OUTDOOR_EXPONENT)


@dataclass(frozen=True)
class ModelPair:
    indoor: PathLossModel = DEFAULT_INDOOR
    outdoor: PathLossModel = DEFAULT_OUTDOOR

    def thresholds(self, rssi_threshold: float = DEFAULT_RSSI_THRESHOLD) -> LinkThresholds:
        return LinkThresholds(
            rssi_threshold,
            derive_threshold_distance(self.indoor, rssi_threshold),
            derive_threshold_distance(self.outdoor, rssi_threshold),
        )


def fit_model(samples: Sequence[RssiSample], ref_distance: float = 1.0) -> PathLossModel:
    """Ordinary least squares of rssi against 10*log10(d / ref_distance)."""
    d = np.array([s.distance for s in samples], dtype=float)
    y = np.array([s.rssi for s in samples], dtype=float)
    if len(samples) < 2 or np.unique(d).size < 2:
        raise DegenerateFitError("fit needs at least two distinct distances")
    x = 10.0 * np.log10(d / ref_distance)
    xm, ym = x.mean(), y.mean()
    slope = float(np.sum((x - xm) * (y - ym)) / np.sum((x - xm) ** 2))
    intercept = float(ym - slope * xm)
    if not slope < 0:
        raise DegenerateFitError(f"fitted RSSI does not decrease with distance (slope {slope:.4g})")
    return PathLossModel(intercept, -slope, ref_distance)


def residual_sum_of_squares(m: PathLossModel, samples: Iterable[RssiSample]) -> float:
    return float(sum((s.rssi - predict_rssi(m, s.distance)) ** 2 for s in samples))


def residual_rms(m: PathLossModel, samples: Sequence[RssiSample]) -> float:
    return math.sqrt(residual_sum_of_squares(m, samples) / len(samples))


def load_measurements(stream: TextIO) -> list[RssiSample]:
    path = csvio.source_name(stream)
    header, rows = csvio.read_rows(stream)
    csvio.require_header(header, MEASUREMENT_HEADER, path)
    out = []
    for lineno, row in rows:
        dist = csvio.parse_float(row["distance_m"], "distance_m", path, lineno)
        rssi = csvio.parse_float(row["rssi_dbm"], "rssi_dbm", path, lineno)
        try:
            env = Environment(row["environment"].lower())
        except ValueError:
            raise LoadError(f"environment must be indoor or outdoor, got {row['environment']!r}", path, lineno) from None
        if dist <= 0:
            raise LoadError(f"distance_m must be > 0, got {dist}", path, lineno)
        out.append(RssiSample(dist, rssi, env))
    return out


def write_measurements(stream: TextIO, samples: Iterable[RssiSample]) -> None:
    csvio.write_rows(
        stream,
        MEASUREMENT_HEADER,
        ([csvio.fmt(s.distance), csvio.fmt(s.rssi), s.environment.value] for s in samples),
    )


def synthetic_samples(
    m: PathLossModel,
    distances: Sequence[float],
    environment: Environment,
    noise_db: float = 0.0,
    seed: int = 0,
) -> list[RssiSample]:
    """Samples on the model curve plus uniform noise in [-noise_db, noise_db]."""
    rng = np.random.default_rng(seed)
    noise = rng.uniform(-noise_db, noise_db, size=len(distances)) if noise_db > 0 else np.zeros(len(distances))
    return [RssiSample(float(d), predict_rssi(m, d) + float(e), environment) for d, e in zip(distances, noise)]
