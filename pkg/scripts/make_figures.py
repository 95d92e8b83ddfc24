"""Write the datasets behind figures 2-6 as CSV files.

    python scripts/make_figures.py --out figures/ --points 200
"""

import argparse
from pathlib import Path

from shg_entangler.sweep import FIGURE_IDS, columns_for, figure_config, run_sweep, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("figures"))
    ap.add_argument("--points", type=int, default=200)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for fig in FIGURE_IDS:
        cfg = figure_config(fig, args.points)
        rows = run_sweep(cfg)
        path = args.out / f"{fig}.csv"
        write_csv(rows, path, columns_for(cfg))
        bad = sum(bool(r["error"]) for r in rows)
        print(f"{fig}: {len(rows)} rows -> {path}" + (f" ({bad} failed)" if bad else ""))


if __name__ == "__main__":
    main()
