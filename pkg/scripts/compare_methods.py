"""Budget sweep: how often the randomized search matches brute force.

Runs the exhaustive scan once to learn the true optimum, then reruns the
weighted search across seeds at increasing evaluation budgets and reports
the hit rate per budget. Finishes with the standard comparison table at
the config's own threshold and seed list.

Usage, from the repo root:

    python scripts/compare_methods.py data/demo/config.json --seeds 50
"""

import argparse
from dataclasses import replace

from siteselect.bench import compare, render_table
from siteselect.cli import build_instance, load_config
from siteselect.search import run_brute_force, run_weighted_search


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config", nargs="?", default="data/demo/config.json")
    ap.add_argument("--seeds", type=int, default=20, help="number of seeds per budget")
    ap.add_argument(
        "--budgets", type=int, nargs="+", default=[50, 100, 250, 500, 1000, 2000]
    )
    args = ap.parse_args()

    cfg = load_config(args.config)
    _, grid, fields, w = build_instance(cfg)
    brute = run_brute_force(fields, w, cfg.threshold, grid)
    optimum = max(rec.fitness for rec in brute.all_records)
    print(f"grid {grid.nx}x{grid.ny}, brute-force optimum {optimum:.9f} over {grid.n_cells} cells")

    # Pin the threshold just under the optimum so the search stops the
    # moment it finds the best cell; a hit is an exact fitness match.
    search_cfg = replace(cfg.search, threshold=optimum - 1e-9)
    for budget in args.budgets:
        hits = 0
        for seed in range(args.seeds):
            result = run_weighted_search(
                fields, w, replace(search_cfg, max_evaluations=budget, seed=seed), grid
            )
            hits += max(rec.fitness for rec in result.all_records) == optimum
        print(f"budget {budget:5d}: {hits:3d}/{args.seeds} seeds reach the optimum")

    print()
    report = compare(fields, w, cfg.threshold, cfg.search, seeds=list(range(args.seeds)))
    print(render_table(report), end="")


if __name__ == "__main__":
    main()
