"""Matplotlib figures for the report path.

Figures are rendered straight to files next to the delimited outputs;
nothing here opens a window.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .model import Prediction, RCCurve
from .riskcov import risk_at_coverage


def plot_rc_curve(
    curve: RCCurve,
    path: str | Path,
    title: str = "Risk-coverage curve",
    coverage_markers: Sequence[float] = (0.8, 0.9),
) -> Path:
    """Risk against coverage, with the fixed-coverage operating points
    marked. Lower curves mean safer selective behavior."""
    coverages = [p.coverage for p in curve.points]
    risks = [p.risk for p in curve.points]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(coverages, risks, marker="o", markersize=3, linewidth=1.5, label="empirical")
    for phi in coverage_markers:
        if not coverages or phi < coverages[0] or phi > coverages[-1]:
            continue
        risk = risk_at_coverage(curve, phi)
        ax.scatter([phi], [risk], color="crimson", zorder=5)
        ax.annotate(
            f"R@{phi:g} = {risk:.3f}",
            (phi, risk),
            textcoords="offset points",
            xytext=(6, 6),
            fontsize=8,
        )
    ax.set_xlabel("coverage")
    ax.set_ylabel("selective risk")
    ax.set_title(title)
    ax.set_xlim(0.0, 1.02)
    ax.set_ylim(bottom=0.0)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_confidence_histogram(
    predictions: Sequence[Prediction],
    path: str | Path,
    bins: int = 20,
    tau: Optional[float] = None,
) -> Path:
    """Distribution of instance confidences, with the abstention
    threshold drawn when given."""
    confidences = [p.confidence for p in predictions]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(confidences, bins=bins, range=(0.0, 1.0), edgecolor="black", alpha=0.8)
    if tau is not None:
        ax.axvline(tau, color="crimson", linestyle="--", label=f"tau = {tau:g}")
        ax.legend(fontsize=8)
    ax.set_xlabel("confidence")
    ax.set_ylabel("count")
    ax.set_title("Confidence distribution")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
