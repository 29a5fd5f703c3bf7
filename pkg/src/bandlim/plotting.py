"""Deterministic SVG figures for the experiments."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "svg.hashsalt": "bandlim",
    "svg.fonttype": "none",
    "figure.figsize": (6.4, 4.0),
    "axes.grid": True,
    "grid.alpha": 0.3,
    "font.size": 9,
    "legend.fontsize": 8,
}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def line_plot(path, x, series: dict, xlabel="", ylabel="", title="", logy=False, markers=False):
    """One axis, one line per ``series`` entry (label -> y values)."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        for label, y in series.items():
            y = np.asarray(y, dtype=float)
            ax.plot(x, y, marker="o" if markers else None, ms=3, lw=1.1, label=label)
        if logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if len(series) > 1:
            ax.legend()
        return _save(fig, path)


def scatter_vs_bound(path, k, measured, bound, labels=("measured", "bound"), title=""):
    """log |coefficient| against the log of its bound, both over k."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(k, measured, "o", ms=3, label=labels[0])
        ax.plot(k, bound, "-", lw=1.1, label=labels[1])
        ax.set_xlabel("k")
        ax.set_ylabel("natural log")
        if title:
            ax.set_title(title)
        ax.legend()
        return _save(fig, path)
