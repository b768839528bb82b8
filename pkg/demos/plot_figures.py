"""Render the CSV files of figure_data.py (needs matplotlib, not a package dependency).

    python demos/plot_figures.py figure_data
"""
import sys
from pathlib import Path

import numpy as np

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is required for rendering")

LABELS = {"leading": ("t_*", "t"), "parent": ("t_*", "x"),
          "subordinated": ("t", "x"), "directing": ("t", "t_*")}


def main(folder):
    folder = Path(folder)
    for case in sorted({p.name.split("_N")[0] for p in folder.glob("*.csv")}):
        fig, axes = plt.subplots(3, 4, figsize=(16, 10))
        for row, n in enumerate((10, 100, 1000)):
            for col, kind in enumerate(LABELS):
                ax = axes[row, col]
                data = np.loadtxt(folder / f"{case}_N{n}_{kind}.csv", delimiter=",", skiprows=1)
                ax.plot(data[:, 0], data[:, 1], lw=0.8)
                ax.set_xlabel(LABELS[kind][0])
                ax.set_ylabel(LABELS[kind][1])
                ax.set_title(f"{kind}, N={n}")
        fig.suptitle(case)
        fig.tight_layout()
        fig.savefig(folder / f"{case}.png", dpi=110)
        plt.close(fig)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "figure_data")
