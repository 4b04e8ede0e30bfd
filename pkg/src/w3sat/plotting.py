"""Figures for the harness reports, rendered to files with the Agg backend."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    # no version string in the metadata, so bytes do not track the matplotlib release
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_agreement(rows, path):
    """Stacked bars per n: agreeing SAT, agreeing UNSAT, disagreements."""
    by_n = defaultdict(lambda: [0, 0, 0])
    for r in rows:
        if r.oracle_status == "SAT":
            by_n[r.n][0] += 1
        elif r.agree:
            by_n[r.n][1] += 1
        else:
            by_n[r.n][2] += 1
    ns = sorted(by_n)
    counts = np.array([by_n[n] for n in ns]).reshape(-1, 3)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    bottom = np.zeros(len(ns))
    for col, (label, color) in enumerate((("agree SAT", "tab:green"),
                                          ("agree UNSAT", "tab:blue"),
                                          ("UNSAT but saturated", "tab:red"))):
        ax.bar(ns, counts[:, col], bottom=bottom, label=label, color=color)
        bottom += counts[:, col]
    ax.set_xlabel("variables n")
    ax.set_ylabel("instances")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, path)


def plot_bench(rows, path):
    """Left: peak database size against the bound. Right: mean saturation
    time on log-log axes with a least-squares power-law fit."""
    ns = np.array([r.n for r in rows], dtype=float)
    fig, (left, right) = plt.subplots(1, 2, figsize=(9, 3.5))
    left.plot(ns, [r.db_bound for r in rows], "k--", label="bound")
    left.plot(ns, [r.max_db_size for r in rows], "o-", label="peak observed")
    left.set_yscale("log")
    left.set_xlabel("variables n")
    left.set_ylabel("clauses stored")
    left.legend(frameon=False, fontsize=8)

    times = np.array([r.mean_seconds for r in rows])
    ok = (times > 0) & (ns > 0)
    right.loglog(ns[ok], times[ok], "o", label="mean time")
    if ok.sum() >= 2:
        slope, icept = np.polyfit(np.log(ns[ok]), np.log(times[ok]), 1)
        grid = np.linspace(ns[ok].min(), ns[ok].max(), 50)
        right.loglog(grid, np.exp(icept) * grid**slope, "-", label=f"fit n^{slope:.2f}")
    right.set_xlabel("variables n")
    right.set_ylabel("seconds")
    right.legend(frameon=False, fontsize=8)
    return _save(fig, path)


def plot_lemmas(reports, path):
    """Grouped bars of the reduced-width derivation rate per lemma and k."""
    labels = sorted({r.lemma_id for r in reports})
    ks = sorted({r.k for r in reports})
    width = 0.8 / max(len(ks), 1)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    x = np.arange(len(labels))
    for i, k in enumerate(ks):
        rates = []
        for lab in labels:
            match = [r for r in reports if r.lemma_id == lab and r.k == k]
            rate = match[0].pass_rate if match else None
            rates.append(np.nan if rate is None else rate)
        ax.bar(x + i * width, rates, width, label=f"k={k}")
    ax.set_xticks(x + width * (len(ks) - 1) / 2, labels)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("target derived at width k-1")
    ax.legend(frameon=False, fontsize=8)
    return _save(fig, path)
