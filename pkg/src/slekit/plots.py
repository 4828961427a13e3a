"""Figure rendering for traces and Monte Carlo reports.

Every function takes a report object (or raw trace points), draws a single
figure with a non-interactive backend, writes it to the given path, and
returns that path. The image format follows the file extension, as usual
for matplotlib. Nothing here computes: estimates, error bars, and theory
lines are read off the report objects so the figure always matches the
delimited output produced alongside it.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .mc import DimensionReport, DriftReport, EstimateResult, MartingaleReport

_ESTIMATE_BAR = 2.0  # error bars on Bernoulli estimates span +-2 stderr


def _finish(fig, path: str) -> str:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_trace(points: Sequence[complex], path: str, *,
               title: str | None = None) -> str:
    """Draw a trace polyline in the upper half-plane."""
    pts = np.asarray(points, dtype=complex)
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.plot(pts.real, pts.imag, lw=0.7, color="tab:blue")
    ax.axhline(0.0, color="black", lw=0.8)
    ax.plot([pts.real[0]], [pts.imag[0]], "o", ms=3, color="black")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_aspect("equal", adjustable="datalim")
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def plot_estimates(results: Sequence[EstimateResult], labels: Sequence[str],
                   path: str, *, title: str | None = None) -> str:
    """Point estimates with error bars against their theory values."""
    xs = np.arange(len(results))
    means = [r.mean for r in results]
    errs = [_ESTIMATE_BAR * r.stderr for r in results]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.errorbar(xs, means, yerr=errs, fmt="o", capsize=4,
                color="tab:blue", label="estimate")
    shown = False
    for x, r in zip(xs, results):
        if r.theory is None:
            continue
        ax.hlines(r.theory, x - 0.25, x + 0.25, color="tab:red",
                  label=None if shown else "theory")
        shown = True
    ax.set_xticks(xs)
    ax.set_xticklabels(labels)
    ax.set_ylabel("probability")
    ax.legend()
    if title:
        ax.set_title(title)
    return _finish(fig, path)


def plot_martingale(report: MartingaleReport, path: str) -> str:
    """E[Y at (t ^ tau)] per check time with the exact initial value."""
    ts = list(report.times)
    means = [e.mean for e in report.estimates]
    errs = [_ESTIMATE_BAR * e.stderr for e in report.estimates]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.errorbar(ts, means, yerr=errs, fmt="o", capsize=4,
                color="tab:blue", label="E[Y]")
    ax.axhline(report.initial_value, color="tab:red", label="Y_0")
    ax.set_xlabel("t")
    ax.set_ylabel("E[Y at (t ^ tau)]")
    ax.legend()
    ax.set_title(f"n={report.n_samples}, discarded={report.n_discarded}")
    return _finish(fig, path)


def plot_dimension(report: DimensionReport, path: str) -> str:
    """Box counts against box size on log-log axes with the fitted slope."""
    sizes = np.asarray(report.box_sizes)
    counts = np.asarray(report.counts)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(sizes, counts, "o", color="tab:blue", label="box counts")
    # Fitted line through the log-log centroid with the reported slope.
    lx = np.log(sizes)
    anchor = math.exp(np.mean(np.log(counts)) + report.estimate * np.mean(lx))
    ax.loglog(sizes, anchor * sizes ** (-report.estimate), "-",
              color="tab:blue", lw=0.8,
              label=f"slope {report.estimate:.3f}")
    ax.loglog(sizes, anchor * sizes ** (-report.target), "--",
              color="tab:red", lw=0.8, label=f"target {report.target:.3f}")
    ax.set_xlabel("box size")
    ax.set_ylabel("occupied boxes")
    ax.legend()
    ax.set_title(f"kappa={report.kappa:g}")
    return _finish(fig, path)


def plot_drift(report: DriftReport, path: str) -> str:
    """Relative drift error against dt on log-log axes with a slope-1 guide."""
    dts = np.asarray(report.dts)
    rel = np.asarray(report.rel_errors)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(dts, rel, "o-", color="tab:blue", label="relative error")
    guide = rel[0] * dts / dts[0]
    ax.loglog(dts, guide, "--", color="tab:red", lw=0.8, label="slope 1")
    ax.set_xlabel("dt")
    ax.set_ylabel("|lhs - rhs| / |rhs|")
    ax.legend()
    ax.set_title(f"slit=({report.slit[0]:g}, {report.slit[1]:g}), "
                 f"order={report.order:.2f}")
    return _finish(fig, path)
