"""Synthetic six-layer demo dataset over a 100 x 100 unit region.

The layers are hand-placed so the region has one clearly best area (good
road access, an on-site power plant, dense population nearby) plus a few
decent runner-up cells, which makes thresholded searches produce small,
readable accepted lists. All coordinates are exact binary fractions where
it matters, so rasters and reports reproduce digit for digit.
"""

from __future__ import annotations

import json
from pathlib import Path

from .geodata import ConstraintLayer, GeoPoint, LayerKind, LayerSet, write_layer_file

DEMO_WEIGHTS: tuple[float, ...] = (3.0, 1.0, 1.0, 3.0, 2.0, 2.0)
DEMO_THRESHOLD = 0.6

_ROADS = (
    ((0.0, 10.0), (40.0, 30.0), (100.0, 45.0)),
    ((20.0, 0.0), (30.0, 60.0), (35.0, 100.0)),
)
_RAILS = (((0.0, 80.0), (50.0, 65.0), (100.0, 55.0)),)
_WATERWAYS = (((0.0, 95.0), (45.0, 88.0), (100.0, 92.0)),)

# One plant sits exactly on a cell center of the default 8x8 grid.
_POWER = ((31.25, 43.75), (70.0, 70.0), (15.0, 85.0))
_COMM = ((25.0, 30.0), (56.25, 56.25), (80.0, 20.0), (60.0, 85.0))

_DENSITY_AXIS = (10.0, 30.0, 50.0, 70.0, 90.0)
_DENSITY_ROWS = (
    (120.0, 180.0, 240.0, 200.0, 140.0),
    (180.0, 320.0, 460.0, 380.0, 220.0),
    (240.0, 520.0, 760.0, 540.0, 300.0),
    (200.0, 420.0, 600.0, 460.0, 260.0),
    (140.0, 240.0, 320.0, 260.0, 180.0),
)


def _polyline_layer(name: str, lines, d_cut: float) -> ConstraintLayer:
    return ConstraintLayer(
        name=name,
        kind=LayerKind.POLYLINE,
        polylines=tuple(tuple(GeoPoint(x, y) for x, y in pts) for pts in lines),
        d_cut=d_cut,
    )


def demo_layers() -> LayerSet:
    """Six constraint layers; vertex extremes pin the bounding box to
    exactly (0,0)-(100,100) under zero padding."""
    samples = tuple(
        (GeoPoint(x, y), value)
        for y, row in zip(_DENSITY_AXIS, _DENSITY_ROWS)
        for x, value in zip(_DENSITY_AXIS, row)
    )
    return LayerSet(
        layers=(
            _polyline_layer("road", _ROADS, 30.0),
            _polyline_layer("rail", _RAILS, 35.0),
            _polyline_layer("waterway", _WATERWAYS, 40.0),
            ConstraintLayer(
                name="power",
                kind=LayerKind.POINT,
                points=tuple(GeoPoint(x, y) for x, y in _POWER),
                d_cut=45.0,
            ),
            ConstraintLayer(
                name="communication",
                kind=LayerKind.POINT,
                points=tuple(GeoPoint(x, y) for x, y in _COMM),
                d_cut=50.0,
            ),
            ConstraintLayer(name="population", kind=LayerKind.DENSITY, samples=samples),
        )
    )


_LAYER_FILES = {
    "road": ("road.csv", 30.0),
    "rail": ("rail.csv", 35.0),
    "waterway": ("waterway.csv", 40.0),
    "power": ("power.csv", 45.0),
    "communication": ("communication.csv", 50.0),
    "population": ("population.csv", None),
}


def write_demo_dataset(
    directory: str | Path,
    *,
    nx: int = 8,
    ny: int = 8,
    threshold: float = DEMO_THRESHOLD,
    seed: int = 42,
    max_evaluations: int = 2000,
    deterministic_clock: bool = False,
    remarks_path: str = "out/remarks.csv",
) -> Path:
    """Write the layer CSVs plus a config.json into `directory`.

    Returns the config path. Layer paths inside the config are relative,
    so the directory is relocatable as a unit.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    layers = []
    for layer in demo_layers():
        filename, d_cut = _LAYER_FILES[layer.name]
        write_layer_file(layer, directory / filename)
        entry: dict = {"name": layer.name, "kind": layer.kind.value, "path": filename}
        if d_cut is not None:
            entry["d_cut"] = d_cut
        layers.append(entry)
    config = {
        "version": 1,
        "layers": layers,
        "grid": {"nx": nx, "ny": ny, "padding": 0.0},
        "weights": list(DEMO_WEIGHTS),
        "threshold": threshold,
        "search": {
            "population_size": 16,
            "target_accepted": 5,
            "crossover_points": 2,
            "mutation_prob": 0.2,
            "max_evaluations": max_evaluations,
            "seed": seed,
        },
        "output": {"remarks_path": remarks_path, "deterministic_clock": deterministic_clock},
    }
    config_path = directory / "config.json"
    config_path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    return config_path
