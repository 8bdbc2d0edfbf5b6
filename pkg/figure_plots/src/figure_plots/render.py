"""Figure rendering from flat run records.

One PlotJob produces exactly one image.  Rendering is single-process,
single-threaded, and deterministic: the Agg backend draws the same bytes
for the same records.  Analytic overlays are computed from the formula
functions in overlays, never fitted or read back from the data.
"""

from __future__ import annotations

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .overlays import (
    classify_pattern,
    dense_upper_bound,
    fully_doped_gap,
    overlay_for,
    staggered_gap,
    undoped_gap,
)
from .records import SelectionError, apply_selection, load_records, numeric

KINDS = ("gap-sweep", "scaling", "orbits", "weights")

_FIGSIZE = (6.4, 4.2)
_DPI = 150
_OVERLAY_STYLE = {"linestyle": "--", "color": "black", "linewidth": 1.0, "zorder": 1}


@dataclass(frozen=True)
class PlotJob:
    """One figure request.

    inputs holds the record file paths, kind picks the figure type, out
    is the image path to write.  selects filters rows by exact
    column=value matches before grouping.
    """

    inputs: tuple[str, ...]
    kind: str
    out: str
    overlay: bool = True
    logy: bool = False
    selects: tuple[tuple[str, str], ...] = ()
    title: str | None = None


def plot(job):
    """Render one figure and write it to job.out.  Returns the path."""
    if job.kind not in KINDS:
        raise ValueError(f"unknown figure kind {job.kind!r}; expected one of {KINDS}")
    rows, columns = load_records(job.inputs, job.kind)
    rows = apply_selection(rows, columns, job.selects)
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    try:
        _RENDERERS[job.kind](ax, rows, job)
        if job.logy:
            ax.set_yscale("log")
        if job.title:
            ax.set_title(job.title)
        fig.tight_layout()
        fig.savefig(job.out, dpi=_DPI)
    finally:
        plt.close(fig)
    return job.out


def _measured_series(rows, key_fields, x_field):
    """Group rows by key_fields, keeping (x, delta, stderr) points.

    Rows without a measured gap (null delta) are dropped.  Raises
    SelectionError when nothing measurable remains.
    """
    series = {}
    for row in rows:
        delta = numeric(row, "delta")
        if delta is None:
            continue
        key = tuple(row[field] for field in key_fields)
        point = (float(row[x_field]), delta, numeric(row, "stderr"))
        series.setdefault(key, []).append(point)
    if not series:
        raise SelectionError("no records carry a measured gap value")
    return {key: sorted(points) for key, points in sorted(series.items())}


def _draw_points(ax, points, label):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    errs = [p[2] for p in points]
    if any(e is not None and e > 0 for e in errs):
        yerr = [e if e is not None else 0.0 for e in errs]
        ax.errorbar(xs, ys, yerr=yerr, marker="o", markersize=4, capsize=2, label=label)
    else:
        ax.plot(xs, ys, marker="o", markersize=4, label=label)


def _gap_sweep(ax, rows, job):
    """Gap versus damping rate, one line per (pattern, n) series."""
    series = _measured_series(rows, ("pattern", "n"), "gamma")
    drawn_overlays = set()
    for (pattern, n_text), points in series.items():
        n = int(n_text)
        _draw_points(ax, points, f"n={n} {pattern}")
        if not job.overlay:
            continue
        gammas = [p[0] for p in points]
        grid = np.linspace(min(gammas), max(gammas), 101)
        curve = overlay_for(pattern, n, grid)
        if curve is None:
            continue
        label, values = curve
        if label in drawn_overlays:
            label = None
        else:
            drawn_overlays.add(label)
        ax.plot(grid, values, label=label, **_OVERLAY_STYLE)
    ax.set_xlabel("damping rate γ")
    ax.set_ylabel("gap per period")
    ax.legend(fontsize=8)


def _scaling(ax, rows, job):
    """Gap versus system size at fixed damping, one line per series.

    Series group by (pattern class, gamma) because the literal pattern
    string differs across n.  Overlays: the undoped rate grows linearly
    with n while the thermodynamic values are horizontal asymptotes.
    """
    series = {}
    for row in rows:
        delta = numeric(row, "delta")
        if delta is None:
            continue
        key = (classify_pattern(row["pattern"]), row["gamma"])
        point = (int(row["n"]), delta, numeric(row, "stderr"))
        series.setdefault(key, []).append(point)
    if not series:
        raise SelectionError("no records carry a measured gap value")
    for (kind, gamma_text), points in sorted(series.items()):
        points.sort()
        gamma = float(gamma_text)
        _draw_points(ax, points, f"{kind} γ={gamma_text}")
        if not job.overlay:
            continue
        ns = [p[0] for p in points]
        if kind == "undoped":
            ax.plot(ns, [undoped_gap(n, gamma) for n in ns], **_OVERLAY_STYLE)
        elif kind == "full":
            ax.axhline(fully_doped_gap(gamma), **_OVERLAY_STYLE)
        elif kind == "staggered":
            ax.axhline(staggered_gap(gamma), **_OVERLAY_STYLE)
        elif kind == "dense":
            ax.axhline(dense_upper_bound(gamma), **_OVERLAY_STYLE)
    ax.set_xlabel("qubits n")
    ax.set_ylabel("gap per period")
    ax.legend(fontsize=8)


def _orbits(ax, rows, job):
    """Sorted orbit-weight scatter with the minima circled in black."""
    series = {}
    for row in rows:
        key = (row["n"], row["gate_set"])
        series.setdefault(key, []).append((int(row["orbit_index"]), float(row["value"])))
    for (n_text, gate_set), points in sorted(series.items()):
        points.sort()
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        ax.scatter(xs, ys, s=10, label=f"n={n_text} {gate_set}")
        floor = min(ys)
        min_xs = [x for x, y in points if y <= floor + 1e-15]
        min_ys = [y for _, y in points if y <= floor + 1e-15]
        ax.scatter(
            min_xs,
            min_ys,
            s=70,
            facecolors="none",
            edgecolors="black",
            linewidths=1.2,
            zorder=3,
        )
    ax.set_xlabel("orbit index (sorted)")
    ax.set_ylabel("mean weight per site")
    ax.legend(fontsize=8)


def _weights(ax, rows, job):
    """Weight histogram of the slowest eigenmode, grouped bars per run."""
    series = {}
    for row in rows:
        key = (row["n"], row["gamma"], row["pattern"])
        series.setdefault(key, []).append((int(row["weight"]), float(row["value"])))
    groups = sorted(series.items())
    width = 0.8 / len(groups)
    for index, ((n_text, gamma_text, pattern), points) in enumerate(groups):
        points.sort()
        offset = (index - (len(groups) - 1) / 2.0) * width
        xs = [w + offset for w, _ in points]
        ys = [p for _, p in points]
        ax.bar(xs, ys, width=width, label=f"n={n_text} γ={gamma_text} {pattern}")
    ax.set_xlabel("Pauli weight w")
    ax.set_ylabel("eigenmode weight probability")
    ax.legend(fontsize=8)


_RENDERERS = {
    "gap-sweep": _gap_sweep,
    "scaling": _scaling,
    "orbits": _orbits,
    "weights": _weights,
}
