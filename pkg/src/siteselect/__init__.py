"""Deterministic spatial site selection over weighted constraint layers.

Pipeline: parse constraint layers (geodata), rasterize them into per-layer
score fields and aggregate with normalized weights (scoring), search the
grid with a randomized evolutionary driver or exhaustively (search), and
compare the two methods (bench). The cli module ties it all to a config
file and an append-only results store.
"""

from .geodata import (
    BoundingBox,
    ConstraintLayer,
    GeoPoint,
    GridSpec,
    LayerKind,
    LayerSet,
    compute_bounding_box,
    parse_layer_file,
)
from .scoring import ScoreField, aggregate, build_score_fields, normalize_weights
from .search import (
    Candidate,
    SearchConfig,
    SearchMethod,
    SearchResult,
    run_brute_force,
    run_weighted_search,
)
from .bench import ComparisonReport, RunMetrics, compare

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "Candidate",
    "ComparisonReport",
    "ConstraintLayer",
    "GeoPoint",
    "GridSpec",
    "LayerKind",
    "LayerSet",
    "RunMetrics",
    "ScoreField",
    "SearchConfig",
    "SearchMethod",
    "SearchResult",
    "aggregate",
    "build_score_fields",
    "compare",
    "compute_bounding_box",
    "normalize_weights",
    "parse_layer_file",
    "run_brute_force",
    "run_weighted_search",
]
