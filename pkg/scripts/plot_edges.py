#!/usr/bin/env python3
"""Plot a 1-D ONG realization from an edge-list CSV.

The core package stays free of plotting dependencies; this script reads
the CSV written by ongraph.graphs.write_edge_csv together with the point
coordinates and draws the arrival-order picture (position horizontal,
arrival order vertical).

Usage:
    python scripts/plot_edges.py edges.csv points.txt out.png

points.txt holds one coordinate per line in arrival order (including
any root points), matching the indices in the CSV.
"""

import csv
import sys


def main(argv):
    if len(argv) != 4:
        print(__doc__)
        return 2
    edges_csv, points_txt, out_png = argv[1:]
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(points_txt, encoding="utf-8") as fh:
        xs = [float(line) for line in fh if line.strip()]
    fig, ax = plt.subplots(figsize=(7, 5))
    with open(edges_csv, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            child = int(row["child_index"])
            parent = int(row["parent_index"])
            ax.plot([xs[child], xs[parent]], [child, parent],
                    color="steelblue", lw=0.8)
    ax.scatter(xs, range(len(xs)), s=8, color="black", zorder=3)
    ax.set_xlabel("position")
    ax.set_ylabel("arrival order")
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    print(f"wrote {out_png}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
