"""Matplotlib renderings of experiment outputs, written straight to files."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import AgreementSample, RobustnessSample, summarize_robustness

__all__ = [
    "save_robustness_plot",
    "save_agreement_plot",
    "save_heatmap_plot",
]


def save_robustness_plot(samples: Sequence[RobustnessSample], path: str) -> None:
    """Mean tau (with sample-std error bars) against eta, one line per method."""
    summary = summarize_robustness(samples)
    methods = sorted({method for _, method, _, _ in summary})
    fig, ax = plt.subplots(figsize=(6, 4))
    for method in methods:
        rows = [(eta, mean, std) for eta, m, mean, std in summary if m == method]
        etas = [r[0] for r in rows]
        means = [r[1] for r in rows]
        stds = [r[2] for r in rows]
        ax.errorbar(etas, means, yerr=stds, marker="o", capsize=3, label=method)
    ax.set_xlabel(r"removal proportion $\eta$")
    ax.set_ylabel(r"Kendall $\tau$ vs full data")
    ax.set_ylim(-1.05, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_agreement_plot(samples: Sequence[AgreementSample], path: str) -> None:
    """Mean between-method tau against eta, one line per method pair."""
    groups: dict[tuple[str, str], dict[float, list[float]]] = {}
    for s in samples:
        groups.setdefault((s.method_a, s.method_b), {}).setdefault(s.eta, []).append(s.tau)
    fig, ax = plt.subplots(figsize=(6, 4))
    for (ma, mb), by_eta in sorted(groups.items()):
        etas = sorted(by_eta)
        means = [float(np.mean(by_eta[e])) for e in etas]
        ax.plot(etas, means, marker="o", label=f"{ma} vs {mb}")
    ax.set_xlabel(r"removal proportion $\eta$")
    ax.set_ylabel(r"between-method Kendall $\tau$")
    ax.set_ylim(-1.05, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_heatmap_plot(margins: np.ndarray, ordered_names: Sequence[str], path: str) -> None:
    """Signed-margin matrix, best to worst on both axes; green means the row
    system beats the column system with the interval clear of 0.5."""
    n = len(ordered_names)
    scale = max(float(np.abs(margins).max()), 1e-6)
    fig, ax = plt.subplots(figsize=(max(5, 0.4 * n + 2), max(4, 0.4 * n + 1.5)))
    image = ax.imshow(margins, cmap="RdYlGn", vmin=-scale, vmax=scale)
    ax.set_xticks(range(n), labels=ordered_names, rotation=90, fontsize=8)
    ax.set_yticks(range(n), labels=ordered_names, fontsize=8)
    ax.set_xlabel("best to worst")
    fig.colorbar(image, ax=ax, label="signed margin to 0.5")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
