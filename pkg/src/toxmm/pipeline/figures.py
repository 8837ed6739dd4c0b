"""Matplotlib figures written next to the delimited report output."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .report import ROW_ORDER


def parity_figure(pred, target, label: str, r2: float, path: Path):
    pred = np.asarray(pred).reshape(-1)
    target = np.asarray(target).reshape(-1)
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    lo = float(min(pred.min(), target.min())) - 0.3
    hi = float(max(pred.max(), target.max())) + 0.3
    ax.plot([lo, hi], [lo, hi], color="0.6", lw=1.0, zorder=1)
    ax.scatter(target, pred, s=9, alpha=0.55, edgecolors="none", zorder=2)
    ax.set_xlim(lo, hi)
    ax.set_ylim(lo, hi)
    ax.set_xlabel("experimental -log10(C)")
    ax.set_ylabel("predicted -log10(C)")
    ax.set_title(f"{label} (test R$^2$ = {r2:.3f})")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def r2_bar_figure(report, path: Path):
    kinds = [k for k in ROW_ORDER if k in report.cv_r2 or k in report.test_r2]
    if not kinds:
        return
    x = np.arange(len(kinds))
    width = 0.2
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    series = [
        ("cv", [report.cv_r2.get(k) for k in kinds]),
        ("test", [report.test_r2.get(k) for k in kinds]),
        ("ref cv", [report.reference.get(k, (None, None))[0] for k in kinds]),
        ("ref test", [report.reference.get(k, (None, None))[1] for k in kinds]),
    ]
    for i, (label, values) in enumerate(series):
        vals = [v if v is not None else np.nan for v in values]
        ax.bar(x + (i - 1.5) * width, vals, width, label=label)
    ax.set_xticks(x)
    ax.set_xticklabels(kinds)
    ax.set_ylabel("Pearson R$^2$")
    ax.set_ylim(0.0, 1.0)
    ax.legend(fontsize=8, ncol=4, loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_figures(out_dir, report, predictions: dict):
    out_dir = Path(out_dir)
    for kind, (pred, target) in predictions.items():
        if kind in report.test_r2:
            parity_figure(pred, target, kind, report.test_r2[kind],
                          out_dir / f"parity_{kind}.png")
    r2_bar_figure(report, out_dir / "r2_comparison.png")
