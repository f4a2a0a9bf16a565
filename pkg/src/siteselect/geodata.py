"""Constraint layers, candidate grids, and planar geometry queries.

Layers come from plain CSV files and are one of three kinds: point features,
polylines, or scattered density samples. All geometry is planar Euclidean;
coordinates are assumed to be already projected.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence


class LayerKind(str, enum.Enum):
    POINT = "point"
    POLYLINE = "polyline"
    DENSITY = "density"


class LayerParseError(ValueError):
    """A layer CSV file does not match its schema."""


class EmptyLayerError(LayerParseError):
    """The file contains a header but no features."""


class MalformedRowError(LayerParseError):
    """A row has the wrong column count or an unparsable value."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MissingCutoffError(LayerParseError):
    """Point and polyline layers need a cutoff distance."""


class ShortPolylineError(LayerParseError):
    """A polyline has fewer than two vertices."""

    def __init__(self, polyline_id: int):
        super().__init__(f"polyline {polyline_id} has fewer than 2 vertices")
        self.polyline_id = polyline_id


class WrongKindError(TypeError):
    """The operation does not apply to this layer kind."""


class OutOfGridError(IndexError):
    """Cell coordinates fall outside the grid."""


@dataclass(frozen=True)
class GeoPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"coordinates must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True)
class ConstraintLayer:
    """One named spatial constraint.

    Exactly the feature fields matching `kind` are populated: `points` for
    point layers, `polylines` for polyline layers, `samples` (point, value)
    for density layers. `d_cut` is the proximity cutoff distance and applies
    to point and polyline layers only. `invert` flips the layer's score so
    that high density or closeness reads as undesirable.
    """

    name: str
    kind: LayerKind
    points: tuple[GeoPoint, ...] = ()
    polylines: tuple[tuple[GeoPoint, ...], ...] = ()
    samples: tuple[tuple[GeoPoint, float], ...] = ()
    d_cut: float | None = None
    invert: bool = False

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "polylines", tuple(tuple(pl) for pl in self.polylines))
        object.__setattr__(self, "samples", tuple((p, float(v)) for p, v in self.samples))
        populated = {
            LayerKind.POINT: self.points,
            LayerKind.POLYLINE: self.polylines,
            LayerKind.DENSITY: self.samples,
        }
        for kind, features in populated.items():
            if kind == self.kind and not features:
                raise ValueError(f"layer {self.name!r}: no features")
            if kind != self.kind and features:
                raise ValueError(f"layer {self.name!r}: {kind.value} features on a {self.kind.value} layer")
        if self.kind in (LayerKind.POINT, LayerKind.POLYLINE):
            if self.d_cut is None:
                raise MissingCutoffError(f"layer {self.name!r}: {self.kind.value} layer requires d_cut")
            if not (self.d_cut > 0):
                raise ValueError(f"layer {self.name!r}: d_cut must be positive")
        for pl in self.polylines:
            if len(pl) < 2:
                raise ValueError(f"layer {self.name!r}: polyline with fewer than 2 vertices")
        for _, v in self.samples:
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"layer {self.name!r}: density values must be non-negative")


@dataclass(frozen=True)
class LayerSet:
    """Ordered constraint layers; the order is the canonical constraint order."""

    layers: tuple[ConstraintLayer, ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise ValueError("a layer set needs at least one layer")
        names = [layer.name for layer in self.layers]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate layer names: {names}")

    def __len__(self) -> int:
        return len(self.layers)

    def __iter__(self) -> Iterator[ConstraintLayer]:
        return iter(self.layers)


@dataclass(frozen=True)
class BoundingBox:
    min: GeoPoint
    max: GeoPoint

    def __post_init__(self):
        if not (self.min.x < self.max.x and self.min.y < self.max.y):
            raise ValueError(f"degenerate bounding box: {self.min} .. {self.max}")

    def contains(self, p: GeoPoint) -> bool:
        return self.min.x <= p.x <= self.max.x and self.min.y <= p.y <= self.max.y


@dataclass(frozen=True)
class GridSpec:
    """Regular nx by ny grid of candidate cells over a bounding box.

    Cell (col, row) has its center at bbox.min + ((col + 0.5) * width / nx,
    (row + 0.5) * height / ny). Row-major order (row varies slowest) is the
    canonical cell order everywhere.
    """

    bbox: BoundingBox
    nx: int
    ny: int

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.nx}x{self.ny}")

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def cell_width(self) -> float:
        return (self.bbox.max.x - self.bbox.min.x) / self.nx

    @property
    def cell_height(self) -> float:
        return (self.bbox.max.y - self.bbox.min.y) / self.ny

    def cells(self) -> Iterator[tuple[int, int]]:
        """All (col, row) pairs in row-major order."""
        for row in range(self.ny):
            for col in range(self.nx):
                yield col, row


@dataclass(frozen=True)
class FeatureInfo:
    """What one layer knows about a query point."""

    layer_name: str
    kind: LayerKind
    value: float
    query: GeoPoint


_HEADERS = {
    LayerKind.POINT: "x,y",
    LayerKind.POLYLINE: "id,x,y",
    LayerKind.DENSITY: "x,y,value",
}


def _parse_number(token: str, line: int) -> float:
    try:
        v = float(token)
    except ValueError:
        raise MalformedRowError(line, f"not a number: {token!r}") from None
    if not math.isfinite(v):
        raise MalformedRowError(line, f"non-finite value: {token!r}")
    return v


def parse_layer_file(path: str | Path, name: str, kind: LayerKind, d_cut: float | None = None) -> ConstraintLayer:
    """Parse a layer CSV file.

    Formats (UTF-8, comma separated, mandatory header):
      point    header "x,y",       rows "x,y"
      polyline header "id,x,y",    rows "id,x,y" with unsigned integer id;
               vertices grouped by id in file order
      density  header "x,y,value", rows "x,y,value" with value >= 0

    Raises FileNotFoundError, MissingCutoffError, MalformedRowError,
    EmptyLayerError, or ShortPolylineError.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"layer file not found: {path}")
    if kind in (LayerKind.POINT, LayerKind.POLYLINE) and d_cut is None:
        raise MissingCutoffError(f"layer {name!r}: kind {kind.value} requires a cutoff distance")

    lines = path.read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedRowError(1, f"{path}: missing header")
    header = lines[0].rstrip("\r")
    if header != _HEADERS[kind]:
        raise MalformedRowError(1, f"{path}: expected header {_HEADERS[kind]!r}, got {header!r}")

    points: list[GeoPoint] = []
    groups: dict[int, list[GeoPoint]] = {}
    samples: list[tuple[GeoPoint, float]] = []
    for line_no, raw in enumerate(lines[1:], start=2):
        raw = raw.rstrip("\r")
        if not raw:
            continue
        cols = raw.split(",")
        if kind == LayerKind.POINT:
            if len(cols) != 2:
                raise MalformedRowError(line_no, f"{path}: expected 2 columns, got {len(cols)}")
            points.append(GeoPoint(_parse_number(cols[0], line_no), _parse_number(cols[1], line_no)))
        elif kind == LayerKind.POLYLINE:
            if len(cols) != 3:
                raise MalformedRowError(line_no, f"{path}: expected 3 columns, got {len(cols)}")
            try:
                pid = int(cols[0])
            except ValueError:
                raise MalformedRowError(line_no, f"{path}: not an integer id: {cols[0]!r}") from None
            if pid < 0:
                raise MalformedRowError(line_no, f"{path}: polyline id must be unsigned, got {pid}")
            vertex = GeoPoint(_parse_number(cols[1], line_no), _parse_number(cols[2], line_no))
            groups.setdefault(pid, []).append(vertex)
        else:
            if len(cols) != 3:
                raise MalformedRowError(line_no, f"{path}: expected 3 columns, got {len(cols)}")
            p = GeoPoint(_parse_number(cols[0], line_no), _parse_number(cols[1], line_no))
            v = _parse_number(cols[2], line_no)
            if v < 0:
                raise MalformedRowError(line_no, f"{path}: negative density value: {v}")
            samples.append((p, v))

    if kind == LayerKind.POINT and not points:
        raise EmptyLayerError(f"{path}: no features")
    if kind == LayerKind.POLYLINE and not groups:
        raise EmptyLayerError(f"{path}: no features")
    if kind == LayerKind.DENSITY and not samples:
        raise EmptyLayerError(f"{path}: no features")
    for pid, vertices in groups.items():
        if len(vertices) < 2:
            raise ShortPolylineError(pid)

    return ConstraintLayer(
        name=name,
        kind=kind,
        points=tuple(points),
        polylines=tuple(tuple(g) for g in groups.values()),
        samples=tuple(samples),
        d_cut=d_cut if kind in (LayerKind.POINT, LayerKind.POLYLINE) else None,
    )


def write_layer_file(layer: ConstraintLayer, path: str | Path) -> None:
    """Serialize a layer back to its CSV format (round-trips exactly)."""
    lines = [_HEADERS[layer.kind]]
    if layer.kind == LayerKind.POINT:
        lines.extend(f"{p.x!r},{p.y!r}" for p in layer.points)
    elif layer.kind == LayerKind.POLYLINE:
        for pid, polyline in enumerate(layer.polylines):
            lines.extend(f"{pid},{p.x!r},{p.y!r}" for p in polyline)
    else:
        lines.extend(f"{p.x!r},{p.y!r},{v!r}" for p, v in layer.samples)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def layer_vertices(layer: ConstraintLayer) -> Iterator[GeoPoint]:
    """Every feature vertex or sample location of a layer."""
    yield from layer.points
    for polyline in layer.polylines:
        yield from polyline
    for p, _ in layer.samples:
        yield p


def compute_bounding_box(layers: LayerSet, padding: float = 0.05) -> BoundingBox:
    """Axis-aligned box around all features, inflated by `padding` per side.

    A zero span on either axis is widened by 0.5 units per side so single
    features still define a usable grid.
    """
    if padding < 0:
        raise ValueError(f"padding must be non-negative, got {padding}")
    xs: list[float] = []
    ys: list[float] = []
    for layer in layers:
        for p in layer_vertices(layer):
            xs.append(p.x)
            ys.append(p.y)
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)

    def _inflate(lo: float, hi: float) -> tuple[float, float]:
        span = hi - lo
        if span == 0:
            return lo - 0.5, hi + 0.5
        return lo - padding * span, hi + padding * span

    lo_x, hi_x = _inflate(lo_x, hi_x)
    lo_y, hi_y = _inflate(lo_y, hi_y)
    return BoundingBox(GeoPoint(lo_x, lo_y), GeoPoint(hi_x, hi_y))


def cell_center(grid: GridSpec, cell: tuple[int, int]) -> GeoPoint:
    col, row = cell
    if not (0 <= col < grid.nx and 0 <= row < grid.ny):
        raise OutOfGridError(f"cell ({col}, {row}) outside {grid.nx}x{grid.ny} grid")
    return GeoPoint(
        grid.bbox.min.x + (col + 0.5) * grid.cell_width,
        grid.bbox.min.y + (row + 0.5) * grid.cell_height,
    )


def _segment_distance(p: GeoPoint, a: GeoPoint, b: GeoPoint) -> float:
    dx = b.x - a.x
    dy = b.y - a.y
    seg2 = dx * dx + dy * dy
    if seg2 == 0.0:
        return math.hypot(p.x - a.x, p.y - a.y)
    t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / seg2
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return math.hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy))


def distance_to_nearest(layer: ConstraintLayer, p: GeoPoint) -> float:
    """Euclidean distance to the nearest feature of a point or polyline layer."""
    if layer.kind == LayerKind.POINT:
        return min(math.hypot(p.x - q.x, p.y - q.y) for q in layer.points)
    if layer.kind == LayerKind.POLYLINE:
        return min(
            _segment_distance(p, a, b)
            for polyline in layer.polylines
            for a, b in zip(polyline, polyline[1:])
        )
    raise WrongKindError(f"layer {layer.name!r} is a density layer; distance is undefined")


def density_at(layer: ConstraintLayer, p: GeoPoint) -> float:
    """Value of the nearest density sample (ties keep the earliest sample)."""
    if layer.kind != LayerKind.DENSITY:
        raise WrongKindError(f"layer {layer.name!r} is not a density layer")
    best_d2 = math.inf
    best_v = 0.0
    for q, v in layer.samples:
        d2 = (p.x - q.x) ** 2 + (p.y - q.y) ** 2
        if d2 < best_d2:
            best_d2 = d2
            best_v = v
    return best_v


def query_features_at(layers: LayerSet, p: GeoPoint) -> tuple[FeatureInfo, ...]:
    """Per-layer feature lookup at a point, in canonical layer order.

    Point and polyline layers report the nearest-feature distance; density
    layers report the local density value.
    """
    out = []
    for layer in layers:
        if layer.kind == LayerKind.DENSITY:
            value = density_at(layer, p)
        else:
            value = distance_to_nearest(layer, p)
        out.append(FeatureInfo(layer_name=layer.name, kind=layer.kind, value=value, query=p))
    return tuple(out)
