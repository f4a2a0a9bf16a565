"""Write the bundled demo dataset (six layer CSVs plus config.json).

Usage, from the repo root:

    python scripts/gen_demo_data.py data/demo
    python scripts/gen_demo_data.py /tmp/demo16 --nx 16 --ny 16
"""

import argparse
from pathlib import Path

from siteselect.demo import DEMO_THRESHOLD, write_demo_dataset


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("directory", nargs="?", default="data/demo", type=Path)
    ap.add_argument("--nx", type=int, default=8)
    ap.add_argument("--ny", type=int, default=8)
    ap.add_argument("--threshold", type=float, default=DEMO_THRESHOLD)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--budget", type=int, default=2000, help="search evaluation budget")
    ap.add_argument(
        "--deterministic-clock",
        action="store_true",
        help="stamp remark rows with a fixed token instead of wall-clock time",
    )
    args = ap.parse_args()
    config_path = write_demo_dataset(
        args.directory,
        nx=args.nx,
        ny=args.ny,
        threshold=args.threshold,
        seed=args.seed,
        max_evaluations=args.budget,
        deterministic_clock=args.deterministic_clock,
    )
    print(config_path)


if __name__ == "__main__":
    main()
