"""Figure rendering for pipeline reports.

render_figures(report, out_dir) writes PNG plots next to the delimited
output: the sup-norm history of the run, the final component profiles
(curves in one dimension, images in two), a log-log rate panel when a
blow-up analysis ran, and the windowed norm series when one was
recorded.  Rendering is headless; nothing here needs a display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .fields import linf_norm
from .pipeline import RunReport, component_names

__all__ = ["render_figures"]

_DPI = 120


def _history_png(report: RunReport, out: Path) -> Path:
    result = report.result
    if result.trace is not None:
        t = np.asarray(result.trace["t"], dtype=np.float64)
        sup = np.asarray(result.trace["sup"], dtype=np.float64)
    else:
        t = np.asarray(result.t_grid, dtype=np.float64)
        sup = np.column_stack(
            [[linf_norm(f) for f in comp] for comp in result.components]
        )
    names = component_names(sup.shape[1])
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for c, name in enumerate(names):
        ax.plot(t, sup[:, c], label=name)
    positive = sup[sup > 0.0]
    if positive.size and positive.max() / positive.min() > 100.0:
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("sup norm")
    ax.set_title(report.config.label or "sup-norm history")
    ax.legend()
    fig.tight_layout()
    path = out / "history.png"
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def _profiles_png(report: RunReport, out: Path) -> Path | None:
    result = report.result
    domain = result.components[0][0].domain
    if domain.dim > 2:
        return None
    names = component_names(len(result.components))
    t_last = float(result.t_grid[-1])
    path = out / "profiles.png"
    if domain.dim == 1:
        x = domain.axes[0]
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for name, comp in zip(names, result.components):
            ax.plot(x, comp[-1].values, label=name)
        ax.set_xlabel("x")
        ax.set_ylabel("value")
        ax.set_title(f"profiles at t = {t_last:g}")
        ax.legend()
    else:
        fig, axes = plt.subplots(
            1, len(names), figsize=(5.2 * len(names), 4.4), squeeze=False
        )
        extent = [
            domain.axes[0][0],
            domain.axes[0][-1],
            domain.axes[1][0],
            domain.axes[1][-1],
        ]
        for ax, name, comp in zip(axes[0], names, result.components):
            img = ax.imshow(
                comp[-1].values.T,
                origin="lower",
                extent=extent,
                aspect="auto",
            )
            fig.colorbar(img, ax=ax)
            ax.set_title(f"{name} at t = {t_last:g}")
            ax.set_xlabel("x1")
            ax.set_ylabel("x2")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def _rate_png(report: RunReport, out: Path) -> Path:
    rate = report.rate_report
    dist = np.asarray(rate.series["dist"], dtype=np.float64)
    sup = np.asarray(rate.series["sup"], dtype=np.float64)
    names = component_names(sup.shape[1])
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for c, name in enumerate(names):
        keep = sup[:, c] > 0.0
        ax.loglog(dist[keep], sup[keep, c], ".", label=f"{name} samples")
        # fitted power line anchored at the last kept sample
        x = dist[keep]
        y = sup[keep, c]
        exp = rate.fitted_exps[c]
        ax.loglog(
            x,
            y[-1] * (x / x[-1]) ** (-exp),
            "-",
            label=f"{name} fit, exponent {exp:.3f}",
        )
    ax.invert_xaxis()
    ax.set_xlabel("t_est - t")
    ax.set_ylabel("sup norm")
    ax.set_title("growth toward the estimated blow-up time")
    ax.legend()
    fig.tight_layout()
    path = out / "rate_fit.png"
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def _norms_png(report: RunReport, out: Path) -> Path:
    hist = report.history
    names = component_names(len(hist.norms))
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for c, name in enumerate(names):
        ax.semilogx(hist.dist, hist.scaled[c], ".-", label=f"{name} scaled")
    ax.axhline(hist.empirical_floor, linestyle="--", linewidth=1.0,
               label=f"floor {hist.empirical_floor:.3g}")
    ax.invert_xaxis()
    ax.set_xlabel("t_est - t")
    ax.set_ylabel("scaled windowed norm")
    ax.set_title("windowed norms toward the estimated blow-up time")
    ax.legend()
    fig.tight_layout()
    path = out / "norm_history.png"
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def render_figures(report: RunReport, out_dir: str | Path) -> list:
    """Render every figure the report's payloads support; returns paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if report.result is not None:
        written.append(_history_png(report, out))
        written.append(_profiles_png(report, out))
    if report.rate_report is not None:
        written.append(_rate_png(report, out))
    if report.history is not None:
        written.append(_norms_png(report, out))
    return [p for p in written if p is not None]
