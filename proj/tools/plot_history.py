#!/usr/bin/env python3
"""Parse spbench history files and print per-scheme convergence summaries.

This is a plotting stub: it validates and loads the history CSVs
(j, phase, f, grad_norm_rel, step) so the rows can be handed to whatever
plotting frontend you prefer. With matplotlib installed, --plot writes a
semilogy convergence figure.
"""

import argparse
import csv
import pathlib
import sys

COLUMNS = ["j", "phase", "f", "grad_norm_rel", "step"]


def load_history(path):
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames != COLUMNS:
            raise ValueError(f"{path}: unexpected columns {reader.fieldnames}")
        rows = [
            {
                "j": int(row["j"]),
                "phase": int(row["phase"]),
                "f": float(row["f"]),
                "grad_norm_rel": float(row["grad_norm_rel"]),
                "step": float(row["step"]),
            }
            for row in reader
        ]
    for prev, cur in zip(rows, rows[1:]):
        if cur["j"] != prev["j"] + 1:
            raise ValueError(f"{path}: iteration counter not monotone at j={cur['j']}")
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("histories", nargs="+", help="history CSV files")
    parser.add_argument("--plot", metavar="OUT.png", help="write a semilogy figure")
    args = parser.parse_args()

    series = {}
    for path in args.histories:
        rows = load_history(path)
        name = pathlib.Path(path).stem
        series[name] = rows
        last = rows[-1]
        switches = sum(1 for a, b in zip(rows, rows[1:]) if b["phase"] != a["phase"])
        print(
            f"{name}: {last['j']} iters, final f={last['f']:.3e}, "
            f"rel grad={last['grad_norm_rel']:.3e}, phase switches={switches}"
        )

    if args.plot:
        try:
            import matplotlib

            matplotlib.use("Agg")
            import matplotlib.pyplot as plt
        except ImportError:
            print("matplotlib not available; summaries only", file=sys.stderr)
            return 1
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for name, rows in series.items():
            ax.semilogy([r["j"] for r in rows], [r["grad_norm_rel"] for r in rows], label=name)
        ax.set_xlabel("iteration")
        ax.set_ylabel("relative gradient norm")
        ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote {args.plot}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
