"""Per-constraint score rasters and the weighted-sum objective.

Each constraint layer is rasterized into a score field over the candidate
grid, with every score in [0, 1] and higher meaning better. Stakeholder
weights are normalized to a convex weight vector, and a candidate's fitness
is the dot product of weights and scores.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .geodata import (
    ConstraintLayer,
    GridSpec,
    LayerKind,
    LayerSet,
    OutOfGridError,
    cell_center,
    density_at,
    distance_to_nearest,
)


class AllZeroWeightsError(ValueError):
    """Every raw weight is zero; the profile cannot be normalized."""


class LengthMismatchError(ValueError):
    """Weight and score vectors have different lengths."""


def normalize_weights(raw: Sequence[float]) -> tuple[float, ...]:
    """Divide each raw weight by the total so the result sums to 1."""
    if len(raw) == 0:
        raise ValueError("weight vector must not be empty")
    if any(r < 0 for r in raw):
        raise ValueError(f"raw weights must be non-negative, got {list(raw)}")
    total = sum(raw)
    if total == 0:
        raise AllZeroWeightsError("all raw weights are zero")
    return tuple(r / total for r in raw)


def proximity_score(d: float, d_cut: float) -> float:
    """Linear distance decay: 1 on the feature, 0 at and beyond d_cut."""
    if d < 0:
        raise ValueError(f"distance must be non-negative, got {d}")
    if not d_cut > 0:
        raise ValueError(f"cutoff must be positive, got {d_cut}")
    return max(0.0, 1.0 - d / d_cut)


def density_score(v: float, v_min: float, v_max: float) -> float:
    """Min-max normalization of a density value; uniform layers score 1.0."""
    if v_max == v_min:
        return 1.0
    return (v - v_min) / (v_max - v_min)


@dataclass(frozen=True)
class ScoreField:
    """One constraint's scores over the grid, row-major (row varies slowest)."""

    layer_name: str
    grid: GridSpec
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.grid.n_cells:
            raise ValueError(
                f"field {self.layer_name!r}: {len(self.values)} values for {self.grid.n_cells} cells"
            )
        if any(not (0.0 <= v <= 1.0) for v in self.values):
            raise ValueError(f"field {self.layer_name!r}: scores must lie in [0, 1]")

    def at(self, col: int, row: int) -> float:
        if not (0 <= col < self.grid.nx and 0 <= row < self.grid.ny):
            raise OutOfGridError(f"cell ({col}, {row}) outside {self.grid.nx}x{self.grid.ny} grid")
        return self.values[row * self.grid.nx + col]


def _rasterize(layer: ConstraintLayer, grid: GridSpec) -> list[float]:
    centers = [cell_center(grid, cell) for cell in grid.cells()]
    if layer.kind == LayerKind.DENSITY:
        raw = [density_at(layer, p) for p in centers]
        v_min, v_max = min(raw), max(raw)
        scores = [density_score(v, v_min, v_max) for v in raw]
    else:
        scores = [proximity_score(distance_to_nearest(layer, p), layer.d_cut) for p in centers]
    if layer.invert:
        scores = [1.0 - s for s in scores]
    return scores


def build_score_fields(layers: LayerSet, grid: GridSpec) -> list[ScoreField]:
    """Rasterize every layer into a score field, in canonical layer order.

    Density layers are normalized against the min and max of their own
    rasterized values, so each density field attains both 0 and 1 on the
    grid (unless uniform, which scores 1.0 everywhere).
    """
    return [ScoreField(layer_name=layer.name, grid=grid, values=tuple(_rasterize(layer, grid))) for layer in layers]


def score_vector_at(fields: Sequence[ScoreField], cell: tuple[int, int]) -> tuple[float, ...]:
    """The per-constraint scores of one cell, in canonical layer order."""
    if not fields:
        raise ValueError("no score fields")
    col, row = cell
    return tuple(f.at(col, row) for f in fields)


def aggregate(w: Sequence[float], s: Sequence[float]) -> float:
    """Weighted-sum objective: the dot product of weights and scores."""
    if len(w) != len(s):
        raise LengthMismatchError(f"{len(w)} weights vs {len(s)} scores")
    return sum(wi * si for wi, si in zip(w, s))
