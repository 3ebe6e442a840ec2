#!/usr/bin/env python3
"""Plot the histogram + smoothed curve written by `ongraph density`.

Usage:
    python scripts/plot_density.py PREFIX out.png

reads PREFIX.hist.csv and PREFIX.curve.csv.
"""

import csv
import sys


def _read(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def main(argv):
    if len(argv) != 3:
        print(__doc__)
        return 2
    prefix, out_png = argv[1:]
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    hist = _read(prefix + ".hist.csv")
    curve = _read(prefix + ".curve.csv")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    lefts = [float(r["bin_left"]) for r in hist]
    widths = [float(r["bin_right"]) - float(r["bin_left"]) for r in hist]
    heights = [float(r["density"]) for r in hist]
    ax.bar(lefts, heights, width=widths, align="edge",
           color="lightgray", edgecolor="gray", lw=0.3)
    ax.plot([float(r["x"]) for r in curve],
            [float(r["density"]) for r in curve], color="crimson", lw=1.5)
    ax.set_xlabel("value")
    ax.set_ylabel("density")
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    print(f"wrote {out_png}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
