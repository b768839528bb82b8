"""Plot-ready CSV for sample paths of the two symmetric case studies.

For (alpha, beta) in {(2, 0.8), (1.5, 0.9)} and N in {10, 100, 1000} steps of
tau_* = 1/N this writes the leading path (t_*, t), the parent path (t_*, x),
the subordinated path (t, x) and the directing path (t, t_*), then lints
them.  Same seed for every N, so the panels differ only through the step.

    python demos/figure_data.py [outdir]
"""
import sys
from pathlib import Path

from fracsub.cli import main

CASES = [(2.0, 0.8), (1.5, 0.9)]
STEPS = [10, 100, 1000]


def run(outdir: Path):
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for alpha, beta in CASES:
        for n in STEPS:
            common = ["--alpha", str(alpha), "--beta", str(beta), "--tau-star", repr(1.0 / n),
                      "--steps", str(n), "--seed", "2024"]
            stem = f"a{alpha}_b{beta}_N{n}"
            for kind in ("leading", "parent", "subordinated"):
                out = outdir / f"{stem}_{kind}.csv"
                main(["simulate", *common, "--plot", kind, "-o", str(out)])
                written.append(out)
            main(["invert", *common, "-o", str(outdir / f"{stem}_directing.csv")])
    leading = [str(p) for p in written if p.stem.endswith("leading")]
    others = [str(p) for p in written if not p.stem.endswith("leading")]
    code = main(["lint", *leading, "--monotone", "--require-waiting"])
    code |= main(["lint", *others])
    return code


if __name__ == "__main__":
    sys.exit(run(Path(sys.argv[1] if len(sys.argv) > 1 else "figure_data")))
