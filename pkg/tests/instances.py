"""Random test instances in both plain-dict form (for the oracle) and
package form, built from one RNG so the two views always agree."""

import random

from siteselect.geodata import BoundingBox, ConstraintLayer, GeoPoint, GridSpec, LayerKind, LayerSet
from siteselect.scoring import build_score_fields, normalize_weights

KINDS = ("point", "polyline", "density")


def make_random_instance(seed: int, max_side: int = 16) -> dict:
    rng = random.Random(seed)
    nx = rng.randint(2, max_side)
    ny = rng.randint(2, max_side)
    xmin = rng.uniform(-50.0, 0.0)
    ymin = rng.uniform(-50.0, 0.0)
    xmax = xmin + rng.uniform(10.0, 100.0)
    ymax = ymin + rng.uniform(10.0, 100.0)
    span = max(xmax - xmin, ymax - ymin)

    def pt():
        return (rng.uniform(xmin, xmax), rng.uniform(ymin, ymax))

    m = rng.randint(2, 4)
    kinds = [KINDS[i % 3] for i in range(m)]
    rng.shuffle(kinds)
    layers = []
    for kind in kinds:
        invert = rng.random() < 0.2
        if kind == "point":
            layers.append({
                "kind": "point",
                "pts": [pt() for _ in range(rng.randint(1, 5))],
                "d_cut": rng.uniform(0.1 * span, 0.8 * span),
                "invert": invert,
            })
        elif kind == "polyline":
            layers.append({
                "kind": "polyline",
                "lines": [[pt() for _ in range(rng.randint(2, 4))] for _ in range(rng.randint(1, 3))],
                "d_cut": rng.uniform(0.1 * span, 0.8 * span),
                "invert": invert,
            })
        else:
            layers.append({
                "kind": "density",
                "samples": [(*pt(), rng.uniform(0.0, 1000.0)) for _ in range(rng.randint(3, 8))],
                "invert": invert,
            })
    return {
        "bbox": (xmin, ymin, xmax, ymax),
        "nx": nx,
        "ny": ny,
        "layers": layers,
        "raw_weights": [rng.uniform(0.1, 5.0) for _ in range(m)],
    }


def build_package_instance(instance: dict):
    """The same instance as (grid, fields, weights) package objects."""
    xmin, ymin, xmax, ymax = instance["bbox"]
    grid = GridSpec(BoundingBox(GeoPoint(xmin, ymin), GeoPoint(xmax, ymax)), instance["nx"], instance["ny"])
    layers = []
    for i, spec in enumerate(instance["layers"]):
        name = f"layer{i}"
        if spec["kind"] == "point":
            layers.append(ConstraintLayer(
                name=name,
                kind=LayerKind.POINT,
                points=tuple(GeoPoint(x, y) for x, y in spec["pts"]),
                d_cut=spec["d_cut"],
                invert=spec["invert"],
            ))
        elif spec["kind"] == "polyline":
            layers.append(ConstraintLayer(
                name=name,
                kind=LayerKind.POLYLINE,
                polylines=tuple(tuple(GeoPoint(x, y) for x, y in line) for line in spec["lines"]),
                d_cut=spec["d_cut"],
                invert=spec["invert"],
            ))
        else:
            layers.append(ConstraintLayer(
                name=name,
                kind=LayerKind.DENSITY,
                samples=tuple((GeoPoint(x, y), v) for x, y, v in spec["samples"]),
                invert=spec["invert"],
            ))
    fields = build_score_fields(LayerSet(tuple(layers)), grid)
    weights = normalize_weights(instance["raw_weights"])
    return grid, fields, weights
