"""Matplotlib report figures written next to the delimited outputs.

These are summary charts for human consumption; the deterministic schedule
renderer lives in render.py.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bench.montecarlo import MonteCarloStats
from .bench.reference import ReferenceRow

_POLICY_COLORS = {"asap": "#7f7f7f", "alapt": "#2e8b57", "alaps": "#4878a8"}


def save_fixture_figure(rows: list[ReferenceRow], path: str, variant: str = "opt") -> None:
    """Bounding boxes of the reference results, one bar group per circuit."""
    names = [r.circuit for r in rows]
    x = np.arange(len(names))
    width = 0.27
    fig, ax = plt.subplots(figsize=(max(8, 0.45 * len(names)), 4.5))
    for i, policy in enumerate(("asap", "alapt", "alaps")):
        bb = [r.tsb(variant, policy)[2] for r in rows]
        ax.bar(x + (i - 1) * width, bb, width, label=policy.upper(),
               color=_POLICY_COLORS[policy])
    ax.set_yscale("log")
    ax.set_ylabel("bounding box (wires x time)")
    ax.set_title(f"reference results, {variant}imised synthesis")
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=90, fontsize=7)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_corpus_figure(results: list[dict], path: str) -> None:
    """Per-circuit BB comparison for locally scheduled skeletons."""
    names = [r["circuit"] for r in results]
    x = np.arange(len(names))
    width = 0.27
    fig, ax = plt.subplots(figsize=(max(6, 0.6 * len(names)), 4.5))
    for i, policy in enumerate(("asap", "alapt", "alaps")):
        bb = [r[f"{policy}_BB"] for r in results]
        ax.bar(x + (i - 1) * width, bb, width, label=policy.upper(),
               color=_POLICY_COLORS[policy])
    ax.set_yscale("log")
    ax.set_ylabel("bounding box (wires x time)")
    ax.set_title("worst-case scheduling of generated skeletons")
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=45, ha="right", fontsize=8)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_mc_figure(stats: MonteCarloStats, path: str) -> None:
    """Histogram of sampled bounding boxes and makespans vs the worst case."""
    if not stats.samples:
        raise ValueError("monte_carlo must be called with keep_samples=True")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    ax1.hist(stats.samples["BB"], bins=40, color="#4878a8")
    ax1.axvline(stats.worst_case["BB"], color="#c0392b", linestyle="--",
                label="worst case")
    ax1.set_xlabel("bounding box")
    ax1.set_ylabel("runs")
    ax1.legend()
    ax2.hist(stats.samples["T"], bins=40, color="#2e8b57")
    ax2.axvline(stats.worst_case["T"], color="#c0392b", linestyle="--",
                label="worst case")
    ax2.set_xlabel("makespan")
    ax2.legend()
    fig.suptitle(f"{stats.algo}/{stats.strategy}, {stats.runs} runs, seed {stats.base_seed}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
