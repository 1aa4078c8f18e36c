"""Energy-saving UAV to ground-node link decisions from prior locations."""
from .decision import Decision, DecisionKind, SimulationRun, decide, simulate
from .errors import ContractViolation, DegenerateFitError, GeometryError, InputError, LoadError, QueryError
from .geo import GeoCoord, LocalPoint, ProjectionConfig, ProjectionMode, distance, to_geo, to_local, trilaterate
from .los import Segment, first_blocking_obstacle, los_clear, los_oracle_sampled, segment_intersects_box
from .protocol import ChannelConfig, ChannelMode, EnergyLedger, EnergyModel, ProtocolEvent, account, exchange
from .radio import (
    DEFAULT_INDOOR,
    DEFAULT_OUTDOOR,
    LinkThresholds,
    ModelPair,
    PathLossModel,
    RssiSample,
    derive_threshold_distance,
    fit_model,
    invert_distance,
    predict_rssi,
)
from .world import NodeDb, NodeRecord, Obstacle, ObstacleDb, Waypoint, WaypointTable, nearest_node

__version__ = "0.1.0"
