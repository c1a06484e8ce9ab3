#!/usr/bin/env python3
"""Plot gap and distance-to-reference against t (log-log) from zero-order trace CSVs.

    python3 scripts/plot_trace.py out/trace_seed*.csv -o convergence.png
"""
import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def read_trace(path):
    t, gap, dist = [], [], []
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            step = int(row["t"])
            if step == 0:
                continue
            t.append(step)
            gap.append(float(row["F"]))
            dist.append(float(row["x_dist"]) if row["x_dist"] else None)
    return t, gap, dist


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("traces", nargs="+")
    ap.add_argument("-o", "--output", default="convergence.png")
    args = ap.parse_args()

    traces = [read_trace(p) for p in args.traces]
    has_dist = any(d is not None for _, _, dist in traces for d in dist)
    fig, axes = plt.subplots(1, 2 if has_dist else 1, figsize=(11 if has_dist else 6, 4), squeeze=False)
    ax_gap = axes[0][0]
    for path, (t, gap, dist) in zip(args.traces, traces):
        ax_gap.loglog(t, gap, lw=0.8, alpha=0.6)
        if has_dist:
            pts = [(s, d) for s, d in zip(t, dist) if d is not None]
            axes[0][1].loglog([s for s, _ in pts], [d for _, d in pts], lw=0.8, alpha=0.6)

    if len(traces) > 1 and len({len(t) for t, _, _ in traces}) == 1:
        t = traces[0][0]
        mean = [sum(tr[1][k] for tr in traces) / len(traces) for k in range(len(t))]
        ax_gap.loglog(t, mean, "k", lw=1.5, label="mean")
        ax_gap.legend()

    ax_gap.set_xlabel("t")
    ax_gap.set_ylabel("F(z_t)")
    ax_gap.grid(True, which="both", alpha=0.3)
    if has_dist:
        axes[0][1].set_xlabel("t")
        axes[0][1].set_ylabel("|x_t - x*|")
        axes[0][1].grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
