"""Command-line front end: config loading, subcommands, and persistence.

Commands operate on a single JSON config document describing the layers,
grid, weights, threshold, and search knobs. Accepted sites are appended to
a CSV remark store that is never rewritten; a sidecar counter file makes
run ids unique across invocations.

Exit codes: 0 success with results, 1 success with no accepted results,
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from .bench import compare, render_table, report_as_dict
from .geodata import (
    GeoPoint,
    GridSpec,
    LayerKind,
    LayerSet,
    cell_center,
    compute_bounding_box,
    parse_layer_file,
    query_features_at,
)
from .scoring import ScoreField, aggregate, build_score_fields, normalize_weights, score_vector_at
from .search import SearchConfig, SearchMethod, SearchResult, run_brute_force, run_weighted_search

REMARK_HEADER = "run_id,timestamp,method,seed,col,row,x,y,fitness,accepted"
ASCII_RAMP = " .:-=+*#%@"


class ConfigError(ValueError):
    """The config document violates its schema."""


@dataclass(frozen=True)
class LayerConfig:
    name: str
    kind: LayerKind
    path: Path
    d_cut: float | None = None
    invert: bool = False


@dataclass(frozen=True)
class ProjectConfig:
    """Validated config document with paths resolved against its directory."""

    layers: tuple[LayerConfig, ...]
    nx: int
    ny: int
    padding: float
    weights: tuple[float, ...]
    threshold: float
    search: SearchConfig
    remarks_path: Path
    deterministic_clock: bool


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise ConfigError(f"{where}: missing {key!r}")
    return doc[key]


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def _positive_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigError(f"{where}: expected a positive integer, got {value!r}")
    return value


def _check_keys(doc: dict, allowed: set[str], where: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")


def _layer_config(index: int, entry, base: Path) -> LayerConfig:
    where = f"layers[{index}]"
    if not isinstance(entry, dict):
        raise ConfigError(f"{where}: expected an object")
    _check_keys(entry, {"name", "kind", "path", "d_cut", "invert"}, where)
    name = _require(entry, "name", where)
    if not isinstance(name, str) or not name:
        raise ConfigError(f"{where}: name must be a non-empty string")
    try:
        kind = LayerKind(_require(entry, "kind", where))
    except ValueError:
        raise ConfigError(f"{where}: unknown kind {entry['kind']!r}") from None
    d_cut = entry.get("d_cut")
    if d_cut is not None:
        if kind == LayerKind.DENSITY:
            raise ConfigError(f"{where}: d_cut does not apply to density layers")
        d_cut = _number(d_cut, f"{where}.d_cut")
    invert = entry.get("invert", False)
    if not isinstance(invert, bool):
        raise ConfigError(f"{where}: invert must be a boolean")
    return LayerConfig(name=name, kind=kind, path=base / _require(entry, "path", where), d_cut=d_cut, invert=invert)


SEARCH_KEYS = {"population_size", "target_accepted", "crossover_points", "mutation_prob", "max_evaluations", "seed"}


def load_config(path: str | Path) -> ProjectConfig:
    """Parse and validate a config JSON document.

    Relative layer and output paths are taken relative to the config file's
    directory, so a dataset directory is relocatable as a unit. Raises
    ConfigError with a one-line diagnostic on any schema violation.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    _check_keys(doc, {"version", "layers", "grid", "weights", "threshold", "search", "output"}, str(path))
    if doc.get("version") != 1:
        raise ConfigError(f"{path}: unsupported config version {doc.get('version')!r} (expected 1)")

    base = path.parent
    raw_layers = _require(doc, "layers", str(path))
    if not isinstance(raw_layers, list) or not raw_layers:
        raise ConfigError(f"{path}: layers must be a non-empty list")
    layers = tuple(_layer_config(i, entry, base) for i, entry in enumerate(raw_layers))
    for lc in layers:
        if not lc.path.is_file():
            raise ConfigError(f"layer file not found: {lc.path}")

    grid = _require(doc, "grid", str(path))
    if not isinstance(grid, dict):
        raise ConfigError(f"{path}: grid must be an object")
    _check_keys(grid, {"nx", "ny", "padding"}, "grid")
    nx = _positive_int(_require(grid, "nx", "grid"), "grid.nx")
    ny = _positive_int(_require(grid, "ny", "grid"), "grid.ny")
    padding = _number(grid.get("padding", 0.05), "grid.padding")
    if padding < 0:
        raise ConfigError("grid.padding: must be non-negative")

    raw_weights = _require(doc, "weights", str(path))
    if not isinstance(raw_weights, list):
        raise ConfigError(f"{path}: weights must be a list")
    weights = tuple(_number(v, f"weights[{i}]") for i, v in enumerate(raw_weights))
    if len(weights) != len(layers):
        raise ConfigError(f"weight count mismatch: {len(weights)} weights for {len(layers)} layers")

    threshold = _number(_require(doc, "threshold", str(path)), "threshold")

    search_block = doc.get("search", {})
    if not isinstance(search_block, dict):
        raise ConfigError(f"{path}: search must be an object")
    _check_keys(search_block, SEARCH_KEYS, "search")
    try:
        search = SearchConfig(threshold=threshold, **search_block)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"search: {exc}") from None

    output = doc.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError(f"{path}: output must be an object")
    _check_keys(output, {"remarks_path", "deterministic_clock"}, "output")
    remarks_path = output.get("remarks_path", "remarks.csv")
    if not isinstance(remarks_path, str) or not remarks_path:
        raise ConfigError("output.remarks_path: must be a non-empty string")
    deterministic_clock = output.get("deterministic_clock", False)
    if not isinstance(deterministic_clock, bool):
        raise ConfigError("output.deterministic_clock: must be a boolean")

    return ProjectConfig(
        layers=layers,
        nx=nx,
        ny=ny,
        padding=padding,
        weights=weights,
        threshold=threshold,
        search=search,
        remarks_path=base / remarks_path,
        deterministic_clock=deterministic_clock,
    )


def build_instance(cfg: ProjectConfig) -> tuple[LayerSet, GridSpec, list[ScoreField], tuple[float, ...]]:
    """Parse all layers and precompute the score rasters and weights."""
    parsed = []
    for lc in cfg.layers:
        layer = parse_layer_file(lc.path, lc.name, lc.kind, lc.d_cut)
        if lc.invert:
            layer = replace(layer, invert=True)
        parsed.append(layer)
    layers = LayerSet(tuple(parsed))
    grid = GridSpec(compute_bounding_box(layers, cfg.padding), cfg.nx, cfg.ny)
    return layers, grid, build_score_fields(layers, grid), normalize_weights(cfg.weights)


def append_remarks(cfg: ProjectConfig, result: SearchResult) -> int:
    """Append one remark row per accepted record, in ranked order.

    The store is append-only. A sidecar counter file next to the CSV is
    bumped on every invocation so run ids stay unique even when the same
    seed is rerun.
    """
    path = cfg.remarks_path
    path.parent.mkdir(parents=True, exist_ok=True)
    counter_path = path.with_name(path.name + ".counter")
    counter = int(counter_path.read_text(encoding="utf-8")) + 1 if counter_path.is_file() else 1
    counter_path.write_text(f"{counter}", encoding="utf-8")

    seed_token = "na" if result.seed is None else str(result.seed)
    run_id = f"{result.method.value}-{seed_token}-{counter:06d}"
    if cfg.deterministic_clock:
        timestamp = "DETERMINISTIC"
    else:
        timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    seed_field = "" if result.seed is None else str(result.seed)

    new_file = not path.is_file()
    with path.open("a", encoding="utf-8", newline="") as fh:
        if new_file:
            fh.write(REMARK_HEADER + "\n")
        for rec in result.accepted:
            fh.write(
                f"{run_id},{timestamp},{result.method.value},{seed_field},"
                f"{rec.candidate.col},{rec.candidate.row},"
                f"{rec.center.x:.9f},{rec.center.y:.9f},{rec.fitness:.9f},true\n"
            )
    return len(result.accepted)


def _containing_cell(grid: GridSpec, p: GeoPoint) -> tuple[int, int]:
    col = min(grid.nx - 1, int((p.x - grid.bbox.min.x) / grid.cell_width))
    row = min(grid.ny - 1, int((p.y - grid.bbox.min.y) / grid.cell_height))
    return col, row


def _feature_count(layer) -> int:
    if layer.kind == LayerKind.POINT:
        return len(layer.points)
    if layer.kind == LayerKind.POLYLINE:
        return len(layer.polylines)
    return len(layer.samples)


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    layers, grid, _, _ = build_instance(cfg)
    for layer in layers:
        print(f"layer {layer.name}: kind={layer.kind.value} features={_feature_count(layer)}")
    bbox = grid.bbox
    print(f"bounding box: ({bbox.min.x:.9f}, {bbox.min.y:.9f}) .. ({bbox.max.x:.9f}, {bbox.max.y:.9f})")
    print(f"grid: {grid.nx}x{grid.ny}, cell {grid.cell_width:.9f} x {grid.cell_height:.9f}")
    return 0


def cmd_score(args) -> int:
    cfg = load_config(args.config)
    layers, grid, fields, w = build_instance(cfg)
    p = args.at
    if not grid.bbox.contains(p):
        bbox = grid.bbox
        raise ConfigError(
            f"point ({p.x}, {p.y}) outside bounding box "
            f"({bbox.min.x}, {bbox.min.y}) .. ({bbox.max.x}, {bbox.max.y})"
        )
    cell = _containing_cell(grid, p)
    center = cell_center(grid, cell)
    scores = score_vector_at(fields, cell)

    print(f"query: ({p.x:.9f}, {p.y:.9f})")
    print(f"cell: ({cell[0]}, {cell[1]}) center ({center.x:.9f}, {center.y:.9f})")
    for info, score in zip(query_features_at(layers, center), scores):
        label = "value" if info.kind == LayerKind.DENSITY else "distance"
        print(f"layer {info.layer_name}: kind={info.kind.value} {label}={info.value:.6f} score={score:.9f}")
    print("weights: " + " ".join(f"{x:.9f}" for x in w))
    print(f"fitness: {aggregate(w, scores):.9f}")
    return 0


def _run_driver(args, method: SearchMethod) -> int:
    cfg = load_config(args.config)
    _, grid, fields, w = build_instance(cfg)
    if method == SearchMethod.WEIGHTED_SUM:
        search_cfg = cfg.search if args.seed is None else replace(cfg.search, seed=args.seed)
        result = run_weighted_search(fields, w, search_cfg, grid)
        print(f"method: {method.value}")
        print(f"seed: {search_cfg.seed}")
    else:
        result = run_brute_force(fields, w, cfg.threshold, grid)
        print(f"method: {method.value}")
    print(f"threshold: {cfg.threshold:.9f}")
    print(f"evaluations: {result.evaluations_used}")
    print(f"accepted: {len(result.accepted)}")
    append_remarks(cfg, result)
    if not result.accepted:
        print("no sites met the threshold")
        return 1
    for rank, rec in enumerate(result.accepted, start=1):
        print(
            f"{rank:3d}. cell ({rec.candidate.col}, {rec.candidate.row}) "
            f"center ({rec.center.x:.9f}, {rec.center.y:.9f}) fitness {rec.fitness:.9f}"
        )
    return 0


def cmd_search(args) -> int:
    return _run_driver(args, SearchMethod.WEIGHTED_SUM)


def cmd_brute(args) -> int:
    return _run_driver(args, SearchMethod.BRUTE_FORCE)


def cmd_compare(args) -> int:
    cfg = load_config(args.config)
    _, _, fields, w = build_instance(cfg)
    seeds = args.seeds if args.seeds is not None else [cfg.search.seed]
    clock = (lambda: 0.0) if cfg.deterministic_clock else time.perf_counter
    report = compare(fields, w, cfg.threshold, cfg.search, seeds, clock=clock)

    table = render_table(report)
    out_dir = cfg.remarks_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "comparison.txt").write_text(table, encoding="utf-8")
    (out_dir / "comparison.json").write_text(
        json.dumps(report_as_dict(report), indent=2) + "\n", encoding="utf-8"
    )
    sys.stdout.write(table)
    return 0


def fitness_raster(fields: Sequence[ScoreField], w: Sequence[float], grid: GridSpec) -> list[float]:
    """Per-cell fitness in row-major order; the surface both drivers search."""
    return [aggregate(w, score_vector_at(fields, cell)) for cell in grid.cells()]


def render_ascii_map(values: Sequence[float], grid: GridSpec) -> str:
    """One glyph per cell by fitness decile, row 0 last so north is up."""
    lines = []
    for row in range(grid.ny - 1, -1, -1):
        offset = row * grid.nx
        lines.append("".join(ASCII_RAMP[min(9, int(v * 10))] for v in values[offset : offset + grid.nx]))
    return "\n".join(lines) + "\n"


def render_raster_csv(values: Sequence[float], grid: GridSpec) -> str:
    lines = ["col,row,x,y,fitness"]
    for (col, row), fit in zip(grid.cells(), values):
        center = cell_center(grid, (col, row))
        lines.append(f"{col},{row},{center.x:.9f},{center.y:.9f},{fit:.9f}")
    return "\n".join(lines) + "\n"


def cmd_export(args) -> int:
    cfg = load_config(args.config)
    _, grid, fields, w = build_instance(cfg)
    values = fitness_raster(fields, w, grid)
    text = render_raster_csv(values, grid) if args.format == "csv" else render_ascii_map(values, grid)
    if args.out is None:
        sys.stdout.write(text)
    else:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    return 0


def _point_arg(text: str) -> GeoPoint:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}")
    try:
        return GeoPoint(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="siteselect",
        description="Score candidate sites against weighted constraint layers and search for acceptable ones.",
        epilog="exit codes: 0 results found, 1 no results, 2 usage or validation error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, func, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="path to the config JSON document")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "parse the config and all layers, print a summary")

    p = add("score", cmd_score, "explain the score of the cell containing a point")
    p.add_argument("--at", type=_point_arg, required=True, metavar="X,Y", help="query point")

    p = add("search", cmd_search, "run the randomized weighted-sum search")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")

    add("brute", cmd_brute, "evaluate every cell exhaustively")

    p = add("compare", cmd_compare, "run both methods and write the comparison report")
    p.add_argument("--seeds", type=int, nargs="+", default=None, metavar="SEED", help="seeds for the randomized runs (default: the config seed)")

    p = add("export", cmd_export, "write the per-cell fitness raster")
    p.add_argument("--format", choices=("csv", "ascii-map"), default="csv")
    p.add_argument(
        "--method",
        choices=("brute", "weighted"),
        default="brute",
        help="kept for symmetry; both methods search the same fitness surface, so the raster is identical",
    )
    p.add_argument("--out", default=None, help="output file (default: stdout)")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, TypeError, OSError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
