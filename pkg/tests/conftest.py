import json
from types import SimpleNamespace

import pytest

from siteselect.cli import build_instance, load_config
from siteselect.demo import write_demo_dataset


def _load(path):
    cfg = load_config(path)
    layers, grid, fields, weights = build_instance(cfg)
    return SimpleNamespace(config_path=path, cfg=cfg, layers=layers, grid=grid, fields=fields, weights=weights)


@pytest.fixture(scope="session")
def demo8(tmp_path_factory):
    return _load(write_demo_dataset(tmp_path_factory.mktemp("demo8"), deterministic_clock=True))


@pytest.fixture(scope="session")
def demo16(tmp_path_factory):
    return _load(write_demo_dataset(tmp_path_factory.mktemp("demo16"), nx=16, ny=16, deterministic_clock=True))


def write_micro_dataset(directory, threshold=0.4, seed=7, max_evaluations=200):
    """2x2 toy: one plant at (0.5, 0.5) with d_cut 2, plus a zero-weight
    layer whose vertices pin the bounding box to exactly (0,0)-(2,2).

    Cell centers land at (0.5, 0.5), (1.5, 0.5), (0.5, 1.5), (1.5, 1.5),
    giving the fitness surface 1.0, 0.5, 0.5, 1 - sqrt(2)/2.
    """
    (directory / "plant.csv").write_text("x,y\n0.5,0.5\n", encoding="utf-8")
    (directory / "extent.csv").write_text("x,y\n0,0\n2,2\n", encoding="utf-8")
    config = {
        "version": 1,
        "layers": [
            {"name": "plant", "kind": "point", "path": "plant.csv", "d_cut": 2.0},
            {"name": "extent", "kind": "point", "path": "extent.csv", "d_cut": 1.0},
        ],
        "grid": {"nx": 2, "ny": 2, "padding": 0.0},
        "weights": [1.0, 0.0],
        "threshold": threshold,
        "search": {"seed": seed, "max_evaluations": max_evaluations, "population_size": 4, "crossover_points": 1},
        "output": {"remarks_path": "out/remarks.csv", "deterministic_clock": True},
    }
    config_path = directory / "config.json"
    config_path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    return config_path


@pytest.fixture
def micro_dataset(tmp_path):
    def make(**overrides):
        return write_micro_dataset(tmp_path, **overrides)

    return make
