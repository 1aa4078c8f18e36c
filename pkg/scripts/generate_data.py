"""Regenerate the shipped example scenario and synthetic measurement CSVs.

The scene is laid out in local metres (equirectangular frame around the
reference point in scenario.ini) and written out as lat/lon.

    python scripts/generate_data.py
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from uavlink.geo import LocalPoint, ProjectionConfig, to_geo
from uavlink.radio import DEFAULT_INDOOR, DEFAULT_OUTDOOR, Environment, synthetic_samples, write_measurements

OUT = Path(__file__).resolve().parents[1] / "src" / "uavlink" / "data" / "campus"
PROJ = ProjectionConfig(ref_lat=22.3, ref_lon=39.1)

UAV_ALT = 30.0
TRACK = [(50, 0), (150, 0), (350, 0), (650, 0), (1450, 0), (1800, 0), (2400, 0), (2800, 60), (2880, 0)]
NODES = [(1, "0013A20040A1B2C1", (0, 0, 0)), (2, "0013A20040A1B2C2", (650, 300, 0)),
         (3, "0013A20040A1B2C3", (2900, 0, 0))]
# id, min corner (x, y), dims (dx, dy, dz)
BOXES = [
    (1, (100, -20), (50, 40, 5)),      # low wall the T3 link passes over
    (2, (600, 100), (100, 50, 40)),    # building between T4 and N2
    (3, (2500, 40), (50, 50, 50)),     # beside the T7 link
    (4, (2840, 30), (20, 15, 30)),     # in the way of T8, which is near enough to ignore it
]


def _ll(x, y, z=0.0):
    g = to_geo(LocalPoint(x, y, z), PROJ)
    return f"{g.lat:.9f}", f"{g.lon:.9f}"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    with open(OUT / "nodes.csv", "w", encoding="utf-8") as f:
        f.write("# ground motes N1..N3\nid,mac,lat,lon,alt_m\n")
        for nid, mac, (x, y, z) in NODES:
            f.write(f"{nid},{mac},{','.join(_ll(x, y))},{z}\n")
    with open(OUT / "obstacles.csv", "w", encoding="utf-8") as f:
        f.write("# boxes: down-left corner + extents in metres\nid,lat,lon,dx_m,dy_m,dz_m\n")
        for oid, (x, y), (dx, dy, dz) in BOXES:
            f.write(f"{oid},{','.join(_ll(x, y))},{dx},{dy},{dz}\n")
    with open(OUT / "waypoints.csv", "w", encoding="utf-8") as f:
        f.write("# prior locations T1..T9, one every 5 s\nt_s,lat,lon,alt_m\n")
        for i, (x, y) in enumerate(TRACK):
            f.write(f"{5 * i},{','.join(_ll(x, y))},{UAV_ALT}\n")

    indoor = synthetic_samples(DEFAULT_INDOOR, np.geomspace(2, 300, 80), Environment.INDOOR, 0.3, seed=11)
    outdoor = synthetic_samples(DEFAULT_OUTDOOR, np.geomspace(10, 1000, 160), Environment.OUTDOOR, 0.3, seed=12)
    with open(OUT / "measurements.csv", "w", encoding="utf-8", newline="") as f:
        write_measurements(f, indoor + outdoor)


if __name__ == "__main__":
    main()
