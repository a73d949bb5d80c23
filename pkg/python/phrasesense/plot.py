"""Plot coverage and potential precision against the alignment-frequency threshold."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import matplotlib.ticker as ticker  # noqa: E402

from phrasesense.evaluation import SweepRow  # noqa: E402

logger = logging.getLogger(__name__)


def plot_sweep(rows: Sequence[SweepRow], output_path: Path) -> None:
    """Draw coverage (left axis) and potential precision (right axis) as step plots.

    Thresholds without covered words have no precision and leave a gap in its line.
    """
    thresholds = [row.threshold for row in rows]
    coverage = [row.coverage * 100 for row in rows]
    precision = [
        float("nan") if row.potential_precision is None else row.potential_precision * 100
        for row in rows
    ]

    fig, ax = plt.subplots(figsize=(8, 5))
    ax.step(thresholds, coverage, where="post", color="#2196F3", label="Coverage")
    ax.set_xlabel("Alignment frequency threshold")
    ax.set_ylabel("Coverage")
    ax.yaxis.set_major_formatter(ticker.FormatStrFormatter("%.1f%%"))
    if thresholds and thresholds[-1] > 10 * max(thresholds[0], 1):
        ax.set_xscale("symlog")

    twin = ax.twinx()
    twin.step(thresholds, precision, where="post", color="#FF9800", label="Potential precision")
    twin.set_ylabel("Potential precision")
    twin.set_ylim(0, 100)
    twin.yaxis.set_major_formatter(ticker.FormatStrFormatter("%.0f%%"))

    # One legend for both axes.
    handles = ax.get_legend_handles_labels()[0] + twin.get_legend_handles_labels()[0]
    ax.legend(handles, [h.get_label() for h in handles], loc="upper right")
    ax.grid(axis="y", alpha=0.3)
    ax.set_title("Threshold, coverage and potential precision")

    fig.tight_layout()
    fig.savefig(output_path, dpi=150)
    logger.info("Plot saved to %s", output_path)
    plt.close(fig)
