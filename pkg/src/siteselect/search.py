"""Site-finding drivers: randomized evolutionary search and exhaustive scan.

The evolutionary driver draws a random initial population of grid cells,
accepts every evaluated cell whose fitness clears the threshold, and when
too few cells have been accepted it runs a diversity step: shuffle-pairing,
multipoint crossover, and swap mutation over fixed-width bit genomes. The
brute-force driver evaluates every cell once and is the global oracle.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Sequence

from .geodata import GeoPoint, GridSpec, OutOfGridError, cell_center
from .scoring import ScoreField, aggregate, score_vector_at


class BadLengthError(ValueError):
    """Genome length does not match the grid's encoding width."""


class BadCutCountError(ValueError):
    """Crossover cut count outside 1 .. length - 1."""


class DistinctnessImpossibleError(ValueError):
    """More distinct candidates requested than the grid has cells."""


class SearchMethod(str, enum.Enum):
    WEIGHTED_SUM = "weighted_sum"
    BRUTE_FORCE = "brute_force"


@dataclass(frozen=True)
class Candidate:
    col: int
    row: int


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the evolutionary driver.

    threshold is the minimum fitness for a site to be accepted;
    target_accepted is how many accepted sites stop the search early;
    max_evaluations is the hard evaluation budget.
    """

    threshold: float
    population_size: int = 16
    target_accepted: int = 5
    crossover_points: int = 2
    mutation_prob: float = 0.2
    max_evaluations: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be at least 2 (crossover needs pairs)")
        if self.target_accepted < 1:
            raise ValueError("target_accepted must be positive")
        if self.crossover_points < 1:
            raise ValueError("crossover_points must be positive")
        if not (0.0 <= self.mutation_prob <= 1.0):
            raise ValueError("mutation_prob must lie in [0, 1]")
        if self.max_evaluations < 1:
            raise ValueError("max_evaluations must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class EvalRecord:
    candidate: Candidate
    center: GeoPoint
    scores: tuple[float, ...]
    fitness: float
    accepted: bool
    eval_index: int


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one driver run.

    accepted is sorted by fitness descending, ties broken by evaluation
    order; all_records is the full evaluation log in evaluation order.
    """

    method: SearchMethod
    accepted: tuple[EvalRecord, ...]
    all_records: tuple[EvalRecord, ...]
    evaluations_used: int
    seed: int | None


def field_width(grid: GridSpec) -> int:
    """Bits needed per coordinate: ceil(log2(max(nx, ny))), at least 1."""
    return max(1, (max(grid.nx, grid.ny) - 1).bit_length())


def encode(cand: Candidate, grid: GridSpec) -> str:
    """Fixed-width bit genome: col field then row field, MSB first."""
    if not (0 <= cand.col < grid.nx and 0 <= cand.row < grid.ny):
        raise OutOfGridError(f"candidate ({cand.col}, {cand.row}) outside {grid.nx}x{grid.ny} grid")
    b = field_width(grid)
    return f"{cand.col:0{b}b}{cand.row:0{b}b}"


def decode(genome: str, grid: GridSpec) -> Candidate:
    """Read col and row bit fields, clamping each into the grid (repair)."""
    b = field_width(grid)
    if len(genome) != 2 * b:
        raise BadLengthError(f"genome length {len(genome)}, expected {2 * b}")
    col = min(int(genome[:b], 2), grid.nx - 1)
    row = min(int(genome[b:], 2), grid.ny - 1)
    return Candidate(col, row)


def random_init(cfg: SearchConfig, grid: GridSpec, rng: random.Random) -> list[Candidate]:
    """Pairwise-distinct uniform random cells; duplicate draws are re-drawn."""
    if cfg.population_size > grid.n_cells:
        raise DistinctnessImpossibleError(
            f"population of {cfg.population_size} distinct cells on a {grid.n_cells}-cell grid"
        )
    seen: set[int] = set()
    population: list[Candidate] = []
    while len(population) < cfg.population_size:
        idx = rng.randrange(grid.n_cells)
        if idx in seen:
            continue
        seen.add(idx)
        population.append(Candidate(idx % grid.nx, idx // grid.nx))
    return population


def multipoint_crossover(a: str, b: str, k: int, rng: random.Random) -> tuple[str, str]:
    """Swap alternating segments between k sorted cut positions.

    Cuts are drawn uniformly without replacement from the internal positions;
    the first segment stays, the second is swapped, and so on.
    """
    length = len(a)
    if len(b) != length:
        raise BadLengthError(f"parent lengths differ: {len(a)} vs {len(b)}")
    if not (1 <= k <= length - 1):
        raise BadCutCountError(f"cut count {k} outside 1..{length - 1}")
    cuts = sorted(rng.sample(range(1, length), k))
    bounds = [0, *cuts, length]
    first: list[str] = []
    second: list[str] = []
    swap = False
    for lo, hi in zip(bounds, bounds[1:]):
        if swap:
            first.append(b[lo:hi])
            second.append(a[lo:hi])
        else:
            first.append(a[lo:hi])
            second.append(b[lo:hi])
        swap = not swap
    return "".join(first), "".join(second)


def swap_mutation(genome: str, rng: random.Random) -> str:
    """Exchange the bits at two distinct random positions (popcount preserved)."""
    positions = rng.sample(range(len(genome)), 2)
    i, j = min(positions), max(positions)
    if genome[i] == genome[j]:
        return genome
    return genome[:i] + genome[j] + genome[i + 1 : j] + genome[i] + genome[j + 1 :]


def _evaluate(
    fields: Sequence[ScoreField],
    w: Sequence[float],
    threshold: float,
    grid: GridSpec,
    cand: Candidate,
    eval_index: int,
) -> EvalRecord:
    scores = score_vector_at(fields, (cand.col, cand.row))
    fitness = aggregate(w, scores)
    return EvalRecord(
        candidate=cand,
        center=cell_center(grid, (cand.col, cand.row)),
        scores=scores,
        fitness=fitness,
        accepted=fitness >= threshold,
        eval_index=eval_index,
    )


def _finish(method: SearchMethod, records: list[EvalRecord], seed: int | None) -> SearchResult:
    accepted = sorted(
        (r for r in records if r.accepted),
        key=lambda r: (-r.fitness, r.eval_index),
    )
    return SearchResult(
        method=method,
        accepted=tuple(accepted),
        all_records=tuple(records),
        evaluations_used=len(records),
        seed=seed,
    )


def _next_generation(
    population: list[Candidate],
    cfg: SearchConfig,
    grid: GridSpec,
    rng: random.Random,
) -> list[Candidate]:
    genomes = [encode(c, grid) for c in population]
    rng.shuffle(genomes)
    offspring: list[Candidate] = []
    i = 0
    while i + 1 < len(genomes):
        children = multipoint_crossover(genomes[i], genomes[i + 1], cfg.crossover_points, rng)
        for child in children:
            if rng.random() < cfg.mutation_prob:
                child = swap_mutation(child, rng)
            offspring.append(decode(child, grid))
        i += 2
    if i < len(genomes):
        # odd member carried over unchanged
        offspring.append(decode(genomes[i], grid))
    return offspring


def run_weighted_search(
    fields: Sequence[ScoreField],
    w: Sequence[float],
    cfg: SearchConfig,
    grid: GridSpec,
) -> SearchResult:
    """Threshold-acceptance evolutionary search over the fitness raster.

    Each generation evaluates the whole population (revisits are recorded,
    not deduplicated), accepts every record at or above the threshold, and
    stops once target_accepted records have been accepted or the evaluation
    budget is spent. Otherwise the diversity step breeds the next
    population. Deterministic given the seed.
    """
    if cfg.crossover_points > 2 * field_width(grid) - 1:
        raise BadCutCountError(
            f"crossover_points {cfg.crossover_points} too large for genome length {2 * field_width(grid)}"
        )
    rng = random.Random(cfg.seed)
    population = random_init(cfg, grid, rng)
    records: list[EvalRecord] = []
    accepted_count = 0
    while True:
        for cand in population:
            if len(records) >= cfg.max_evaluations:
                break
            record = _evaluate(fields, w, cfg.threshold, grid, cand, len(records))
            records.append(record)
            if record.accepted:
                accepted_count += 1
        if accepted_count >= cfg.target_accepted or len(records) >= cfg.max_evaluations:
            break
        population = _next_generation(population, cfg, grid, rng)
    return _finish(SearchMethod.WEIGHTED_SUM, records, cfg.seed)


def run_brute_force(
    fields: Sequence[ScoreField],
    w: Sequence[float],
    threshold: float,
    grid: GridSpec,
) -> SearchResult:
    """Evaluate every cell exactly once, in row-major order."""
    records = [
        _evaluate(fields, w, threshold, grid, Candidate(col, row), row * grid.nx + col)
        for col, row in grid.cells()
    ]
    return _finish(SearchMethod.BRUTE_FORCE, records, None)
