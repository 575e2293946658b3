"""Figure renderers. Each function writes a PNG plus a JSON metadata
sidecar (<out>.meta.json) describing the figure's structure: series
counts, labels, axis ranges, histogram totals. Golden tests compare the
metadata, not pixels, so they hold across rendering backends.

All renderers are pure file -> file transforms and never modify inputs.
"""

from __future__ import annotations

import glob
import json
import os
import re

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import (SchemaError, labeled_csvs, load_aggregate, load_cross_section,
                 load_histogram, load_probes)


def _finish(fig, out, meta):
    fig.savefig(out, dpi=110)
    plt.close(fig)
    with open(str(out) + ".meta.json", "w") as f:
        json.dump(meta, f, indent=1, sort_keys=True)
    return meta


def _band_plot(in_dir, out, value_column, title, ylabel):
    """One mean line per aggregate CSV with a +-1 std band."""
    fig, ax = plt.subplots(figsize=(6, 4))
    series_meta = []
    x_min, x_max = np.inf, -np.inf
    for label, path in labeled_csvs(in_dir):
        steps, means, stds = load_aggregate(path, value_column)
        steps = np.array(steps)
        means = np.array(means)
        stds = np.array(stds)
        ax.plot(steps, means, label=label)
        ax.fill_between(steps, means - stds, means + stds, alpha=0.25)
        x_min = min(x_min, float(steps[0]))
        x_max = max(x_max, float(steps[-1]))
        series_meta.append({
            "label": label,
            "points": int(steps.size),
            "final_mean": float(means[-1]),
            "band_width_max": float(2.0 * stds.max()),
        })
    ax.set_xlabel("environment steps")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    meta = {
        "kind": value_column,
        "n_series": len(series_meta),
        "labels": [s["label"] for s in series_meta],
        "series": series_meta,
        "x_range": [x_min, x_max],
    }
    return _finish(fig, out, meta)


def plot_visitation(in_dir, out):
    """Cumulative unique-cell curves, one per algorithm aggregate."""
    return _band_plot(in_dir, out, "unique_cells",
                      "accumulated distinct visited cells", "unique 1x1 cells")


def plot_returns(in_dir, out):
    """Evaluation return curves, one per algorithm aggregate."""
    return _band_plot(in_dir, out, "mean_eval_return",
                      "deterministic evaluation return", "mean return")


def plot_histograms(in_dir, out):
    """Grid of state-visit heatmaps, one panel per histogram window, all
    sharing one color scale; each panel is annotated with its total."""
    paths = sorted(glob.glob(os.path.join(in_dir, "hist_*.csv")),
                   key=lambda p: int(re.search(r"hist_(\d+)", p).group(1)))
    if not paths:
        raise FileNotFoundError(f"no hist_*.csv under {in_dir}")
    grids = [load_histogram(p) for p in paths]
    starts = [int(re.search(r"hist_(\d+)", p).group(1)) for p in paths]
    vmax = max(float(g.max()) for g in grids) or 1.0
    fig, axes = plt.subplots(1, len(grids), figsize=(3.2 * len(grids), 3.4),
                             squeeze=False)
    totals = []
    for ax, grid, start in zip(axes[0], grids, starts):
        ax.imshow(grid.T, origin="lower", vmin=0.0, vmax=vmax, cmap="viridis")
        total = float(grid.sum())
        totals.append(total)
        ax.set_title(f"from step {start}\ntotal {total:.0f}", fontsize=9)
        ax.set_xticks([])
        ax.set_yticks([])
    meta = {
        "kind": "histograms",
        "n_panels": len(grids),
        "window_starts": starts,
        "totals": totals,
        "shared_vmax": vmax,
    }
    return _finish(fig, out, meta)


def plot_probes(in_dir, out):
    """Probe time-series for one run: critic action-gradient norm,
    per-region centered critic values, per-region entropies."""
    path = os.path.join(in_dir, "probes.csv")
    series = load_probes(path)
    panels = [("q_grad_norm", "|dQ/da|"),
              ("region_q_diff", "region value - mean"),
              ("region_entropy", "region entropy")]
    fig, axes = plt.subplots(1, 3, figsize=(13, 3.6))
    drawn = {}
    x_min, x_max = np.inf, -np.inf
    for ax, (probe, ylabel) in zip(axes, panels):
        keys = sorted(k for (p, k) in series if p == probe)
        for key in keys:
            pts = sorted(series[(probe, key)])
            steps = [s for s, _ in pts]
            vals = [v for _, v in pts]
            ax.plot(steps, vals, label=key)
            x_min = min(x_min, steps[0])
            x_max = max(x_max, steps[-1])
        drawn[probe] = len(keys)
        ax.set_xlabel("environment steps")
        ax.set_ylabel(ylabel)
        if len(keys) > 1:
            ax.legend(fontsize=7)
    if not np.isfinite(x_min):
        raise SchemaError(f"{path}: no probe series found")
    for ax in axes:
        ax.set_xlim(x_min, x_max)
    meta = {
        "kind": "probes",
        "series_per_panel": drawn,
        "x_range": [int(x_min), int(x_max)],
    }
    return _finish(fig, out, meta)


def plot_cross_sections(in_dir, out, step: int | None = None):
    """Critic and log-density cross-sections along the action diagonal,
    one column per probe region, critic on top, log-density below."""
    paths = sorted(glob.glob(os.path.join(in_dir, "xsec_*.csv")),
                   key=lambda p: int(re.search(r"xsec_(\d+)", p).group(1)))
    if not paths:
        raise FileNotFoundError(f"no xsec_*.csv under {in_dir}")
    if step is None:
        path = paths[-1]
    else:
        path = os.path.join(in_dir, f"xsec_{step}.csv")
    used_step = int(re.search(r"xsec_(\d+)", path).group(1))
    regions = load_cross_section(path)
    names = sorted(regions)
    fig, axes = plt.subplots(2, len(names), figsize=(2.6 * len(names), 5),
                             squeeze=False)
    n_points = None
    for col, name in enumerate(names):
        rows = sorted(regions[name])
        t = [r[0] for r in rows]
        q = [r[1] for r in rows]
        lp = [r[2] for r in rows]
        n_points = len(t)
        axes[0][col].plot(t, q)
        axes[0][col].set_title(name, fontsize=9)
        axes[1][col].plot(t, lp, color="tab:orange")
        axes[1][col].set_xlabel("t along diagonal")
    axes[0][0].set_ylabel("critic (centered)")
    axes[1][0].set_ylabel("log pi (centered)")
    meta = {
        "kind": "cross_sections",
        "step": used_step,
        "regions": names,
        "points_per_line": n_points,
    }
    return _finish(fig, out, meta)


KINDS = {
    "visitation": plot_visitation,
    "returns": plot_returns,
    "histograms": plot_histograms,
    "probes": plot_probes,
    "cross_sections": plot_cross_sections,
}
