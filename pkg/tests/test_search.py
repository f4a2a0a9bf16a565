import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siteselect.geodata import BoundingBox, GeoPoint, GridSpec, OutOfGridError
from siteselect.scoring import ScoreField, aggregate, normalize_weights
from siteselect.search import (
    BadCutCountError,
    BadLengthError,
    Candidate,
    DistinctnessImpossibleError,
    SearchConfig,
    SearchMethod,
    decode,
    encode,
    field_width,
    multipoint_crossover,
    random_init,
    run_brute_force,
    run_weighted_search,
    swap_mutation,
)


def make_grid(nx, ny):
    return GridSpec(BoundingBox(GeoPoint(0, 0), GeoPoint(nx, ny)), nx, ny)


def make_field(grid, values):
    return ScoreField(layer_name="f", grid=grid, values=tuple(values))


def uniform_instance(nx, ny, value=1.0):
    grid = make_grid(nx, ny)
    return grid, [make_field(grid, [value] * grid.n_cells)], (1.0,)


class StubRng:
    """Hands back pinned positions where the operators expect random draws."""

    def __init__(self, positions):
        self.positions = list(positions)

    def sample(self, population, k):
        assert k == len(self.positions)
        return list(self.positions)


@pytest.mark.parametrize("side,width", [(1, 1), (2, 1), (3, 2), (4, 2), (5, 3), (64, 6), (65, 7)])
def test_field_width(side, width):
    assert field_width(make_grid(side, 1)) == width
    assert field_width(make_grid(1, side)) == width


def test_encode_examples():
    grid = make_grid(4, 4)
    assert encode(Candidate(2, 1), grid) == "1001"
    assert encode(Candidate(0, 0), grid) == "0000"
    assert encode(Candidate(3, 3), grid) == "1111"
    with pytest.raises(OutOfGridError):
        encode(Candidate(4, 0), grid)


def test_decode_examples():
    assert decode("1001", make_grid(4, 4)) == Candidate(2, 1)
    assert decode("0000", make_grid(4, 4)) == Candidate(0, 0)
    # out-of-range coordinates are clamped, not rejected
    assert decode("1111", make_grid(3, 3)) == Candidate(2, 2)
    with pytest.raises(BadLengthError):
        decode("101", make_grid(4, 4))


@pytest.mark.parametrize("nx,ny", [(1, 1), (3, 5), (7, 64), (64, 64)])
def test_encode_decode_roundtrip(nx, ny):
    grid = make_grid(nx, ny)
    for cell in grid.cells():
        cand = Candidate(*cell)
        assert decode(encode(cand, grid), grid) == cand


def test_random_init_all_cells_is_permutation():
    grid = make_grid(3, 3)
    cfg = SearchConfig(threshold=0.5, population_size=9)
    pop = random_init(cfg, grid, random.Random(0))
    assert sorted((c.col, c.row) for c in pop) == sorted(grid.cells())


def test_random_init_single_cell():
    # the smallest legal population already exceeds a 1x1 grid
    cfg = SearchConfig(threshold=0.5, population_size=2)
    with pytest.raises(DistinctnessImpossibleError):
        random_init(cfg, make_grid(1, 1), random.Random(0))
    assert sorted((c.col, c.row) for c in random_init(cfg, make_grid(2, 1), random.Random(0))) == [(0, 0), (1, 0)]


def test_random_init_deterministic():
    grid = make_grid(8, 8)
    cfg = SearchConfig(threshold=0.5, population_size=16)
    assert random_init(cfg, grid, random.Random(3)) == random_init(cfg, grid, random.Random(3))


def test_crossover_identical_parents_fixpoint():
    for k in (1, 2, 3):
        assert multipoint_crossover("1010", "1010", k, random.Random(0)) == ("1010", "1010")


def test_crossover_pinned_single_cut():
    a, b = multipoint_crossover("00000000", "11111111", 1, StubRng([4]))
    assert (a, b) == ("00001111", "11110000")


def test_crossover_cut_count_bounds():
    with pytest.raises(BadCutCountError):
        multipoint_crossover("0000", "1111", 0, random.Random(0))
    with pytest.raises(BadCutCountError):
        multipoint_crossover("0000", "1111", 4, random.Random(0))


@given(
    st.integers(min_value=2, max_value=16).flatmap(
        lambda n: st.tuples(
            st.text(alphabet="01", min_size=n, max_size=n),
            st.text(alphabet="01", min_size=n, max_size=n),
            st.integers(min_value=1, max_value=n - 1),
            st.integers(),
        )
    )
)
def test_crossover_positionwise_multiset(args):
    a, b, k, seed = args
    c1, c2 = multipoint_crossover(a, b, k, random.Random(seed))
    assert len(c1) == len(c2) == len(a)
    for i in range(len(a)):
        assert {c1[i], c2[i]} == {a[i], b[i]}


def test_swap_mutation_pinned():
    assert swap_mutation("10000000", StubRng([0, 7])) == "00000001"
    assert swap_mutation("1001", StubRng([0, 3])) == "1001"


@given(st.text(alphabet="01", min_size=2, max_size=16), st.integers())
def test_swap_mutation_preserves_popcount(genome, seed):
    rng = random.Random(seed)
    g = genome
    for _ in range(50):
        g = swap_mutation(g, rng)
        assert len(g) == len(genome)
        assert g.count("1") == genome.count("1")


@given(st.integers(min_value=1, max_value=40), st.integers(min_value=1, max_value=40), st.integers())
def test_offspring_decode_in_grid(nx, ny, seed):
    grid = make_grid(nx, ny)
    rng = random.Random(seed)
    width = 2 * field_width(grid)
    genome = "".join(rng.choice("01") for _ in range(width))
    cand = decode(genome, grid)
    assert 0 <= cand.col < nx
    assert 0 <= cand.row < ny


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(threshold=0.5, population_size=1)
    with pytest.raises(ValueError):
        SearchConfig(threshold=0.5, mutation_prob=1.5)
    with pytest.raises(ValueError):
        SearchConfig(threshold=0.5, max_evaluations=0)
    with pytest.raises(ValueError):
        SearchConfig(threshold=0.5, seed=-1)


def test_weighted_search_threshold_zero_stops_first_generation():
    grid, fields, w = uniform_instance(8, 8, 0.7)
    cfg = SearchConfig(threshold=0.0, population_size=16, target_accepted=5)
    result = run_weighted_search(fields, w, cfg, grid)
    assert result.evaluations_used == 16
    assert len(result.accepted) == 16
    assert result.method == SearchMethod.WEIGHTED_SUM


def test_weighted_search_impossible_threshold_exhausts_budget():
    grid, fields, w = uniform_instance(8, 8, 0.7)
    cfg = SearchConfig(threshold=1.1, population_size=16, max_evaluations=200)
    result = run_weighted_search(fields, w, cfg, grid)
    assert result.accepted == ()
    assert result.evaluations_used == 200


def test_weighted_search_micro_finds_only_the_top_cell():
    grid = make_grid(2, 2)
    corner = 1.0 - (2.0**0.5) / 2.0
    fields = [make_field(grid, [1.0, 0.5, 0.5, corner])]
    cfg = SearchConfig(threshold=0.9, population_size=4, crossover_points=1, seed=11, max_evaluations=100)
    result = run_weighted_search(fields, (1.0,), cfg, grid)
    assert {r.candidate for r in result.accepted} == {Candidate(0, 0)}
    assert all(r.fitness == 1.0 for r in result.accepted)
    brute = run_brute_force(fields, (1.0,), 0.9, grid)
    assert result.accepted[0].fitness == brute.accepted[0].fitness


def test_brute_force_micro_ranking():
    grid = make_grid(2, 2)
    corner = 1.0 - (2.0**0.5) / 2.0
    fields = [make_field(grid, [1.0, 0.5, 0.5, corner])]
    result = run_brute_force(fields, (1.0,), 0.4, grid)
    assert [(r.candidate.col, r.candidate.row) for r in result.accepted] == [(0, 0), (1, 0), (0, 1)]
    assert [r.fitness for r in result.accepted] == [1.0, 0.5, 0.5]
    assert result.evaluations_used == 4
    assert result.seed is None


def test_brute_force_threshold_zero_accepts_everything():
    grid, fields, w = uniform_instance(3, 4, 0.25)
    result = run_brute_force(fields, w, 0.0, grid)
    assert len(result.accepted) == 12
    assert [r.eval_index for r in result.all_records] == list(range(12))


def test_brute_force_uniform_field_tie_breaks_row_major():
    grid, fields, w = uniform_instance(4, 4)
    result = run_brute_force(fields, w, 0.0, grid)
    assert result.accepted[0].candidate == Candidate(0, 0)
    assert [r.eval_index for r in result.accepted] == list(range(16))


def random_fields(data, nx, ny):
    grid = make_grid(nx, ny)
    m = data.draw(st.integers(min_value=1, max_value=3))
    fields = [
        make_field(grid, data.draw(st.lists(
            st.floats(min_value=0, max_value=1), min_size=grid.n_cells, max_size=grid.n_cells
        )))
        for _ in range(m)
    ]
    raw = data.draw(st.lists(st.floats(min_value=0.1, max_value=5), min_size=m, max_size=m))
    return grid, fields, normalize_weights(raw)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_weighted_never_beats_brute(data):
    nx = data.draw(st.integers(min_value=2, max_value=8))
    ny = data.draw(st.integers(min_value=2, max_value=8))
    grid, fields, w = random_fields(data, nx, ny)
    threshold = data.draw(st.floats(min_value=0, max_value=1))
    seed = data.draw(st.integers(min_value=0, max_value=2**32))
    cfg = SearchConfig(threshold=threshold, population_size=4, crossover_points=1, seed=seed, max_evaluations=60)
    weighted = run_weighted_search(fields, w, cfg, grid)
    brute = run_brute_force(fields, w, threshold, grid)
    assert max(r.fitness for r in weighted.all_records) <= max(r.fitness for r in brute.all_records)
    assert weighted.evaluations_used <= cfg.max_evaluations
    assert brute.evaluations_used == grid.n_cells
    for rec in weighted.all_records + brute.all_records:
        assert rec.accepted == (rec.fitness >= threshold)
    for result in (weighted, brute):
        fits = [r.fitness for r in result.accepted]
        assert fits == sorted(fits, reverse=True)


@settings(max_examples=20, deadline=None)
@given(st.data())
def test_weighted_search_deterministic(data):
    grid, fields, w = random_fields(data, 5, 5)
    seed = data.draw(st.integers(min_value=0, max_value=2**32))
    cfg = SearchConfig(threshold=0.7, population_size=6, crossover_points=1, seed=seed, max_evaluations=50)
    first = run_weighted_search(fields, w, cfg, grid)
    second = run_weighted_search(fields, w, cfg, grid)
    assert first == second


def test_crossover_points_validated_against_genome_length():
    grid, fields, w = uniform_instance(2, 2)
    cfg = SearchConfig(threshold=0.5, population_size=2, crossover_points=2)
    with pytest.raises(BadCutCountError):
        run_weighted_search(fields, w, cfg, grid)
