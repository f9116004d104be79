#!/usr/bin/env python3
"""Regenerate the standard figure datasets and the statistics report.

Runs the jcsim CLI in-process with the default physical settings and drops
deterministic CSVs into --outdir. With --plot, quick-look PNGs are rendered
next to the CSVs (requires matplotlib).

    python3 scripts/reproduce_figures.py --outdir out --plot
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from jcsim.cli import main as cli_main

RUNS = [
    ("fig1_short", ["fig1", "--temps-kelvin", "0.8", "--gt-max", "50",
                    "--points", "5001"]),
    ("fig1_long", ["fig1", "--temps-kelvin", "0.8,3,10", "--gt-max", "40800",
                   "--points", "40001"]),
    ("fig2", ["fig2", "--alphas", "1,2,3", "--gt-max", "40800",
              "--points", "40001"]),
    ("fig3", ["fig3", "--alphas", "1,2,3", "--gt-max", "80",
              "--points", "8001"]),
    ("fig4", ["fig4", "--r-values", "10,25,100", "--x-max", "100",
              "--points", "10001"]),
    ("stats", ["stats", "--r-values", "5,10,25,50"]),
]


def plot_csv(csv_path, png_path):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(csv_path) as fh:
        n_meta = 0
        for line in fh:
            if not line.startswith("#"):
                break
            n_meta += 1
    rows = np.genfromtxt(csv_path, delimiter=",", names=True,
                         skip_header=n_meta)
    names = rows.dtype.names
    fig, ax = plt.subplots(figsize=(7, 4))
    for col in names[1:]:
        ax.plot(rows[names[0]], rows[col], lw=0.8, label=col)
    ax.set_xlabel(names[0])
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(png_path, dpi=130)
    plt.close(fig)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default="out", help="output directory")
    ap.add_argument("--plot", action="store_true", help="render PNG quick-looks")
    ap.add_argument("--only", default=None,
                    help="comma-separated subset of run names")
    args = ap.parse_args(argv)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    wanted = None if args.only is None else set(args.only.split(","))
    for name, run_argv in RUNS:
        if wanted is not None and name not in wanted:
            continue
        out = outdir / f"{name}.csv"
        rc = cli_main(run_argv + ["--out", str(out)])
        if rc != 0:
            print(f"{name}: exit {rc}", file=sys.stderr)
            return rc
        print(f"wrote {out}")
        if args.plot and name != "stats":
            plot_csv(out, out.with_suffix(".png"))
            print(f"wrote {out.with_suffix('.png')}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
