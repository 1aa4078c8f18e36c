"""Command-line front end: ``simulate``, ``calibrate`` and ``los``.

Exit codes: 0 success, 1 bad input or configuration, 2 internal error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, RunConfig, load_run_config, write_model_file
from .decision import DecisionKind, simulate, write_decisions
from .errors import InputError
from .geo import GeoCoord, to_local
from .los import Segment, first_blocking_obstacle_with_t
from .protocol import summary_lines, write_events
from .radio import (
    DEFAULT_RSSI_THRESHOLD,
    Environment,
    derive_threshold_distance,
    fit_model,
    load_measurements,
    residual_rms,
)
from .world import load_nodes, load_obstacles, load_waypoints

log = logging.getLogger("uavlink")

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


def _open(path: Path):
    try:
        return open(path, encoding="utf-8", newline="")
    except FileNotFoundError:
        raise InputError(f"file not found: {path}") from None


def _config(args) -> RunConfig:
    cfg = load_run_config(args.config) if args.config else RunConfig()
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def cmd_simulate(args) -> int:
    if not args.config:
        raise ConfigError("simulate needs --config PATH")
    cfg = _config(args)
    cfg.require_files("nodes", "obstacles", "waypoints")
    with _open(cfg.nodes) as f:
        nodes = load_nodes(f, cfg.projection)
    with _open(cfg.obstacles) as f:
        obstacles = load_obstacles(f, cfg.projection)
    with _open(cfg.waypoints) as f:
        waypoints = load_waypoints(f)

    run = simulate(waypoints, nodes, obstacles, cfg.thresholds, cfg.projection,
                   cfg.models, cfg.channel, cfg.energy)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "decisions.csv", "w", encoding="utf-8", newline="") as f:
        write_decisions(f, run.decisions)
    with open(out / "events.csv", "w", encoding="utf-8", newline="") as f:
        write_events(f, run.events)

    counts = run.counts()
    lines = [
        f"ticks={len(run.decisions)}",
        *(f"count_{k.value}={counts[k]}" for k in DecisionKind),
        f"delivered={sum(e.delivered for e in run.events)}",
        f"alpha_m={run.thresholds.alpha!r}",
        f"beta_m={run.thresholds.beta!r}",
        *summary_lines(run.ledger),
    ]
    (out / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    print("\n".join(lines))
    return EXIT_OK


def cmd_calibrate(args) -> int:
    cfg = _config(args)
    rssi0 = args.rssi_threshold
    if rssi0 is None:
        rssi0 = cfg.thresholds.rssi_threshold if args.config else DEFAULT_RSSI_THRESHOLD
    with _open(Path(args.measurements)) as f:
        samples = load_measurements(f)
    envs = [Environment(args.environment)] if args.environment else [e for e in Environment]
    fitted = {}
    for env in envs:
        subset = [s for s in samples if s.environment is env]
        if not subset and not args.environment:
            continue
        m = fit_model(subset)
        fitted[env.value] = m
        print(f"environment={env.value}")
        print(f"samples={len(subset)}")
        print(f"intercept_dbm={m.intercept!r}")
        print(f"exponent={m.exponent!r}")
        print(f"ref_distance_m={m.ref_distance!r}")
        print(f"residual_rms_db={residual_rms(m, subset)!r}")
        print(f"rssi_threshold_dbm={rssi0!r}")
        print(f"crossing_m={derive_threshold_distance(m, rssi0)!r}")
    if not fitted:
        raise InputError(f"{args.measurements}: no samples to fit")
    if args.model_out:
        write_model_file(Path(args.model_out), fitted)
        print(f"model_file={args.model_out}")
    return EXIT_OK


def _parse_geo(text: str) -> GeoCoord:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise InputError(f"--from expects LAT,LON[,ALT], got {text!r}")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise InputError(f"--from expects numbers, got {text!r}") from None
    return GeoCoord(*vals)


def cmd_los(args) -> int:
    cfg = _config(args)
    nodes_path = Path(args.nodes) if args.nodes else cfg.nodes
    obstacles_path = Path(args.obstacles) if args.obstacles else cfg.obstacles
    if nodes_path is None or obstacles_path is None:
        raise InputError("los needs --nodes and --obstacles (or a config with [files])")
    with _open(nodes_path) as f:
        nodes = load_nodes(f, cfg.projection)
    with _open(obstacles_path) as f:
        obstacles = load_obstacles(f, cfg.projection)

    if args.from_ is not None:
        origin = _parse_geo(args.from_)
    else:
        wp_path = Path(args.waypoints) if args.waypoints else cfg.waypoints
        if wp_path is None or args.tick is None:
            raise InputError("los needs --from LAT,LON[,ALT] or --waypoints FILE --tick N")
        with _open(wp_path) as f:
            table = load_waypoints(f)
        if not 0 <= args.tick < len(table):
            raise InputError(f"tick {args.tick} out of range (table has {len(table)} waypoints)")
        origin = table[args.tick].position

    node = nodes.by_id(args.node)
    uav = to_local(origin, cfg.projection)
    if uav == node.position:
        raise InputError("UAV position coincides with the node")
    hit = first_blocking_obstacle_with_t(Segment(uav, node.position), obstacles)
    if hit is None:
        print("clear")
    else:
        print(f"blocked obstacle_id={hit[0].id} t={hit[1]!r}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="run configuration file")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="override the channel seed")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory (default: .)")

    p = argparse.ArgumentParser(prog="uavlink", parents=[common],
                                description="Prior-location UAV link decision simulator.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="replay waypoints and write decisions/events")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("calibrate", parents=[common], help="fit path-loss models to measurements")
    c.add_argument("measurements", help="CSV with distance_m,rssi_dbm,environment")
    c.add_argument("--environment", choices=[e.value for e in Environment])
    c.add_argument("--rssi-threshold", type=float, default=None)
    c.add_argument("--model-out", help="write/update an INI model file usable from [models] file=")
    c.set_defaults(func=cmd_calibrate)

    los = sub.add_parser("los", parents=[common], help="line-of-sight check from a position to a node")
    los.add_argument("--nodes")
    los.add_argument("--obstacles")
    los.add_argument("--from", dest="from_", metavar="LAT,LON[,ALT]")
    los.add_argument("--waypoints")
    los.add_argument("--tick", type=int)
    los.add_argument("--node", type=int, required=True)
    los.set_defaults(func=cmd_los)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    for name, default in (("config", None), ("seed", None), ("out", ".")):
        if not hasattr(args, name):
            setattr(args, name, default)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:  # anything else is a bug in the simulator
        log.debug("internal failure", exc_info=True)
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
