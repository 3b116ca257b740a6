"""Static SVG plot emission from the CSV artifacts.

matplotlib is imported lazily (plotting is optional at runtime) and
configured for reproducible output: fixed hash salt, no embedded creation
date, so identical inputs give byte-identical SVG files.
"""

from __future__ import annotations

import math

import numpy as np

from . import breaking_theory as bt
from . import reporting
from .errors import ConfigurationError


def _matplotlib():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "wavebreak"
    plt.rcParams["svg.fonttype"] = "none"  # keep labels as searchable text
    return plt


def _save(fig, out_path) -> None:
    fig.savefig(out_path, format="svg", metadata={"Date": None})


def emit_portrait_plot(arrows_csv, boundaries_csv, out_path) -> None:
    """Slope-plane portrait: arrow field, breaking-region boundary (the
    vertical segment and the parabola branch), and the classical line."""
    plt = _matplotlib()
    arrows, curves = reporting.read_portrait_csvs(arrows_csv, boundaries_csv)
    fig, ax = plt.subplots(figsize=(7, 6))
    if arrows.size:
        ax.quiver(arrows[:, 0], arrows[:, 1], arrows[:, 2], arrows[:, 3],
                  angles="xy", width=0.0025, color="0.4")
    styles = {
        "omega_line": dict(color="red", lw=1.8, label="breaking region boundary"),
        "omega_parabola": dict(color="red", lw=1.8),
        "seliger_line": dict(color="blue", lw=1.5, ls="--",
                             label="classical condition m1+m2=-2"),
    }
    for name, curve in curves.items():
        if len(curve):
            ax.plot(curve[:, 0], curve[:, 1], **styles.get(name, {}))
    ax.set_xlabel("m1")
    ax.set_ylabel("m2")
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title("slope-plane vector field")
    _save(fig, out_path)
    plt.close(fig)


def emit_series_plot(series_csv, out_path, t_star: float | None = None,
                     T_star: float | None = None,
                     envelope_origin_m1: float | None = None) -> None:
    """Time series of the slope extrema with the Riccati envelope overlay.

    The envelope is drawn as the implied upper bound on m1 (= 1/envelope
    while the envelope is negative) from the given origin; vertical markers
    show t* and T*.  An empty series yields an empty-axes plot.
    """
    plt = _matplotlib()
    series = reporting.read_sim_csv(series_csv)
    fig, ax = plt.subplots(figsize=(7, 5))
    if series:
        t = np.array([s.t for s in series])
        ax.plot(t, [s.m1 for s in series], color="tab:red", label="min slope m1")
        ax.plot(t, [s.m2 for s in series], color="tab:blue", label="max slope m2")
        if (t_star is not None and envelope_origin_m1 is not None
                and envelope_origin_m1 < -2.0):
            dl = bt.deadline(envelope_origin_m1, t_star)
            tt = np.linspace(t_star, min(dl - 1e-9, float(t[-1])), 400)
            env = np.array([bt.riccati_envelope(envelope_origin_m1, t_star, s)
                            for s in tt])
            keep = env < 0
            ax.plot(tt[keep], 1.0 / env[keep], color="tab:red", ls=":",
                    label="Riccati bound on m1")
    for val, name, color in ((t_star, "t*", "0.3"), (T_star, "T*", "0.1")):
        if val is not None and math.isfinite(val):
            ax.axvline(val, color=color, lw=1.0, ls="--")
            ax.text(val, 0.98, name, transform=ax.get_xaxis_transform(),
                    ha="left", va="top", fontsize=9)
    ax.set_xlabel("t")
    ax.set_ylabel("slope extrema")
    if series:
        ax.legend(loc="lower left", fontsize=8)
    _save(fig, out_path)
    plt.close(fig)


def emit_trajectory_plot(trajectory_csv, out_path) -> None:
    """Phase-plane path of a comparison-system trajectory over the region
    boundaries."""
    plt = _matplotlib()
    t, x, y = reporting.read_trajectory_csv(trajectory_csv)
    fig, ax = plt.subplots(figsize=(7, 6))
    if len(t):
        from .phase_plane import Window, boundary_curves

        xmin = min(float(np.min(x)), -6.0)
        win = Window(xmin, max(float(np.max(x)), 1.0),
                     min(float(np.min(y)), -1.0), max(float(np.max(y)), 7.0))
        for name, curve in boundary_curves(win).items():
            color = "red" if name.startswith("omega") else "blue"
            ax.plot(curve[:, 0], curve[:, 1], color=color, lw=1.2,
                    ls="-" if name.startswith("omega") else "--")
        ax.plot(x, y, color="black", lw=1.4)
        ax.plot([x[0]], [y[0]], marker="o", color="black")
        ax.set_xlim(max(xmin, -12.0), win.xmax)
        ax.set_ylim(win.ymin, max(float(np.max(y)) * 1.1, 7.0))
    ax.set_xlabel("x (= m1 shadow)")
    ax.set_ylabel("y (= m2 shadow)")
    ax.set_title("comparison-system trajectory")
    _save(fig, out_path)
    plt.close(fig)


def emit_plot(kind: str, out_path, **inputs) -> None:
    """Dispatch on plot kind: 'portrait', 'series', or 'trajectory'."""
    if kind == "portrait":
        emit_portrait_plot(inputs.pop("arrows_csv"), inputs.pop("boundaries_csv"),
                           out_path, **inputs)
    elif kind == "series":
        emit_series_plot(inputs.pop("series_csv"), out_path, **inputs)
    elif kind == "trajectory":
        emit_trajectory_plot(inputs.pop("trajectory_csv"), out_path, **inputs)
    else:
        raise ConfigurationError(f"unknown plot kind {kind!r}")
