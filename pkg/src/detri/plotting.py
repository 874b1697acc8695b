"""Figures for benchmark reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .bench import BUCKETS, BenchReport  # noqa: E402


def plot_report(report: BenchReport, path: str) -> None:
    """Bucket counts per method next to elimination-reachable winner counts."""
    counts = report.buckets()
    labels = [str(s) for s in report.methods]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4), gridspec_kw={"width_ratios": [3, 1]})
    width = 0.8 / max(len(counts), 1)
    xs = range(len(BUCKETS))
    for m, row in enumerate(counts):
        ax1.bar([x + m * width for x in xs], row, width, label=f"method{m}")
    ax1.set_xticks([x + width * (len(counts) - 1) / 2 for x in xs])
    ax1.set_xticklabels(BUCKETS)
    ax1.set_xlabel("state space relative to best")
    ax1.set_ylabel("graphs")
    ax1.yaxis.set_major_locator(MaxNLocator(integer=True))
    ax1.legend(fontsize=7, title="\n".join(f"method{m}: {s}" for m, s in enumerate(labels)),
               title_fontsize=6)
    yes, no = report.elimination_counts()
    ax2.bar(["elimination", "not elimination"], [yes, no], color=["tab:gray", "tab:red"])
    ax2.set_ylabel("graphs (best triangulation)")
    ax2.yaxis.set_major_locator(MaxNLocator(integer=True))
    for ax in (ax1, ax2):
        ax.spines["top"].set_visible(False)
        ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
