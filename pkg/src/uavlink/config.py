"""Run configuration: INI-style ``key = value`` text with section headers.

Every section and key is optional except ``[files]``, which the simulate
command needs. Relative paths resolve against the config file's directory.

    [files]
    nodes = nodes.csv
    obstacles = obstacles.csv
    waypoints = waypoints.csv

    [projection]
    mode = equirectangular        ; or paper_scale
    ref_lat = 22.0
    ref_lon = 39.0
    scale = 100000                ; paper_scale only

    [thresholds]
    rssi_threshold = -30
    alpha = derive                ; or a distance in metres
    beta = derive

    [models]
    file = models.ini             ; as written by ``calibrate --model-out``
    indoor_intercept = ...        ; inline overrides win over the file
    indoor_exponent = ...
    outdoor_intercept = ...
    outdoor_exponent = ...

    [channel]
    mode = deterministic          ; or stochastic
    noise_sigma = 0
    timeout_ms = 1000
    base_latency_ms = 20
    seed = 0

    [energy]
    e_tx = 0.5
    e_rx = 0.25
    e_idle = 0.01
"""
from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InputError
from .geo import ProjectionConfig, ProjectionMode
from .protocol import ChannelConfig, ChannelMode, EnergyModel
from .radio import (
    DEFAULT_RSSI_THRESHOLD,
    LinkThresholds,
    ModelPair,
    PathLossModel,
    derive_threshold_distance,
)


class ConfigError(InputError):
    pass


@dataclass(frozen=True)
class RunConfig:
    projection: ProjectionConfig = ProjectionConfig()
    thresholds: LinkThresholds = LinkThresholds()
    models: ModelPair = ModelPair()
    channel: ChannelConfig = ChannelConfig()
    energy: EnergyModel = EnergyModel()
    nodes: Path | None = None
    obstacles: Path | None = None
    waypoints: Path | None = None
    source: Path | None = field(default=None, compare=False)

    def with_seed(self, seed: int) -> RunConfig:
        return dataclasses.replace(self, channel=dataclasses.replace(self.channel, seed=seed))

    def require_files(self, *names: str) -> None:
        for name in names:
            p = getattr(self, name)
            if p is None:
                raise ConfigError(f"{self.source or '<config>'}: [files] {name} is not set")
            if not p.is_file():
                raise ConfigError(f"{name} file not found: {p}")


def _parser() -> configparser.ConfigParser:
    return configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)


def _float(sec: configparser.SectionProxy, key: str, default: float, where: str) -> float:
    raw = sec.get(key)
    if raw is None:
        return default
    try:
        v = float(raw)
    except ValueError:
        raise ConfigError(f"{where}: [{sec.name}] {key}: not a number: {raw!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{where}: [{sec.name}] {key}: not finite")
    return v


def _section(cp: configparser.ConfigParser, name: str) -> configparser.SectionProxy:
    if not cp.has_section(name):
        cp.add_section(name)
    return cp[name]


def read_model_file(path: Path) -> dict[str, PathLossModel]:
    """Models keyed by environment name from an INI file with [indoor]/[outdoor]."""
    cp = _parser()
    try:
        with open(path, encoding="utf-8") as f:
            cp.read_file(f)
    except configparser.Error as e:
        raise ConfigError(f"{path}: {e}") from None
    out = {}
    for env in ("indoor", "outdoor"):
        if cp.has_section(env):
            sec = cp[env]
            where = str(path)
            try:
                out[env] = PathLossModel(
                    _float(sec, "intercept", math.nan, where),
                    _float(sec, "exponent", math.nan, where),
                    _float(sec, "ref_distance", 1.0, where),
                )
            except InputError as e:
                raise ConfigError(f"{path}: [{env}] {e}") from None
    return out


def write_model_file(path: Path, models: dict[str, PathLossModel]) -> None:
    """Write or update the given environment sections, keeping any others."""
    cp = _parser()
    if path.is_file():
        cp.read(path, encoding="utf-8")
    for env, m in models.items():
        cp[env] = {
            "intercept": repr(m.intercept),
            "exponent": repr(m.exponent),
            "ref_distance": repr(m.ref_distance),
        }
    with open(path, "w", encoding="utf-8") as f:
        cp.write(f)


def load_run_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    cp = _parser()
    try:
        with open(path, encoding="utf-8") as f:
            cp.read_file(f)
    except configparser.Error as e:
        raise ConfigError(f"{path}: {e}") from None
    where = str(path)
    base = path.parent

    try:
        proj = _section(cp, "projection")
        mode_name = proj.get("mode", "equirectangular").strip().lower()
        try:
            mode = ProjectionMode(mode_name)
        except ValueError:
            raise ConfigError(f"{where}: unknown projection mode {mode_name!r}") from None
        projection = ProjectionConfig(
            _float(proj, "ref_lat", 22.0, where),
            _float(proj, "ref_lon", 39.0, where),
            _float(proj, "scale", 100000.0, where),
            mode,
        )

        msec = _section(cp, "models")
        models = {"indoor": ModelPair().indoor, "outdoor": ModelPair().outdoor}
        if msec.get("file"):
            mpath = (base / msec["file"]).resolve()
            if not mpath.is_file():
                raise ConfigError(f"model file not found: {mpath}")
            models.update(read_model_file(mpath))
        for env in ("indoor", "outdoor"):
            m = models[env]
            models[env] = PathLossModel(
                _float(msec, f"{env}_intercept", m.intercept, where),
                _float(msec, f"{env}_exponent", m.exponent, where),
                _float(msec, "ref_distance", m.ref_distance, where),
            )
        pair = ModelPair(models["indoor"], models["outdoor"])

        tsec = _section(cp, "thresholds")
        rssi0 = _float(tsec, "rssi_threshold", DEFAULT_RSSI_THRESHOLD, where)

        def edge(key: str, model: PathLossModel) -> float:
            if tsec.get(key, "derive").strip().lower() == "derive":
                return derive_threshold_distance(model, rssi0)
            return _float(tsec, key, math.nan, where)

        thresholds = LinkThresholds(rssi0, edge("alpha", pair.indoor), edge("beta", pair.outdoor))

        csec = _section(cp, "channel")
        cmode_name = csec.get("mode", "deterministic").strip().lower()
        try:
            cmode = ChannelMode(cmode_name)
        except ValueError:
            raise ConfigError(f"{where}: unknown channel mode {cmode_name!r}") from None
        seed_raw = csec.get("seed", "0")
        try:
            seed = int(seed_raw)
        except ValueError:
            raise ConfigError(f"{where}: [channel] seed: not an integer: {seed_raw!r}") from None
        channel = ChannelConfig(
            cmode,
            _float(csec, "noise_sigma", 0.0, where),
            _float(csec, "timeout_ms", 1000.0, where),
            _float(csec, "base_latency_ms", 20.0, where),
            seed,
        )

        esec = _section(cp, "energy")
        energy = EnergyModel(
            _float(esec, "e_tx", 0.5, where),
            _float(esec, "e_rx", 0.25, where),
            _float(esec, "e_idle", 0.01, where),
        )
    except ConfigError:
        raise
    except InputError as e:
        raise ConfigError(f"{where}: {e}") from None

    fsec = _section(cp, "files")

    def file(key: str) -> Path | None:
        v = fsec.get(key)
        return (base / v).resolve() if v else None

    return RunConfig(
        projection, thresholds, pair, channel, energy,
        file("nodes"), file("obstacles"), file("waypoints"), path,
    )


EXAMPLE_SCENARIO = Path(__file__).resolve().parent / "data" / "campus" / "scenario.ini"
EXAMPLE_MEASUREMENTS = EXAMPLE_SCENARIO.parent / "measurements.csv"
