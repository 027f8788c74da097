"""Histogram PNGs for certification and portal reports.

Rendering uses the Agg backend with fixed size, dpi and no timestamp or
software metadata, so the same data gives the same bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_META = {"Software": None}


def _save(fig, path):
    fig.savefig(path, format="png", dpi=100, metadata=_META)
    plt.close(fig)


def error_histogram(errors, epsilon: float, path, title: str = "max relative error per trial"):
    errors = np.asarray(errors, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    hi = max(float(errors.max(initial=0.0)), epsilon) * 1.05 or 1.0
    ax.hist(errors, bins=30, range=(0.0, hi), color="#4878a8", edgecolor="white")
    ax.axvline(epsilon, color="#c03030", linestyle="--", label=f"eps = {epsilon:g}")
    passed = int(np.count_nonzero(errors <= epsilon))
    ax.set_title(f"{title} ({passed}/{len(errors)} within eps)")
    ax.set_xlabel("max relative error")
    ax.set_ylabel("trials")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def distortion_histogram(ratios, upper: float, path, title: str = "f / d over terminal-vertex pairs"):
    ratios = np.asarray(ratios, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 4))
    hi = max(float(ratios.max(initial=1.0)), upper) * 1.02
    ax.hist(ratios, bins=40, range=(min(1.0, float(ratios.min(initial=1.0))), hi),
            color="#589858", edgecolor="white")
    ax.axvline(1.0, color="black", linewidth=1)
    ax.axvline(upper, color="#c03030", linestyle="--", label=f"bound {upper:g}")
    ax.set_title(title)
    ax.set_xlabel("f / d")
    ax.set_ylabel("pairs")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)
