#!/usr/bin/env python3
"""Render error-probability curves emitted by `rcd simulate`.

Usage: plot_curves.py CURVES_CSV [OUT_PNG]
"""
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__, file=sys.stderr)
        return 1
    curves = sys.argv[1]
    out = sys.argv[2] if len(sys.argv) > 2 else "curves.png"

    df = pd.read_csv(curves)
    columns = [c for c in ("p_false_alarm", "p_miss") if c in df.columns]
    if not columns:
        print("no probability columns found in", curves, file=sys.stderr)
        return 1

    fig, axes = plt.subplots(1, len(columns), figsize=(6 * len(columns), 4.5))
    if len(columns) == 1:
        axes = [axes]
    for ax, col in zip(axes, columns):
        for agent, group in df.groupby("agent"):
            ax.semilogy(group["k"], group[col].clip(lower=1e-12), alpha=0.5, lw=0.8)
        ax.set_xlabel("k")
        ax.set_ylabel(col)
        ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print("wrote", out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
