"""The five figure kinds, rendered deterministically from CSV inputs.

kind          expected input schema (per file)
------------  -----------------------------------------------------
histogram     root_count,frequency        (one file per group size)
trajectories  t,x                         (one file per trajectory)
bifurcation   x,mu,side,is_critical
surface       mu,q,x                      (long-format grid)
regions       x,y,region                  (long-format grid)

Rendering is a pure function of the input files: fixed backend, fixed
DPI, pinned fonts and PNG metadata, no timestamps, no randomness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .csvio import SchemaError, read_columns  # noqa: E402

__all__ = ["FigureSpec", "render", "KINDS"]

_RC = {
    "figure.dpi": 125,
    "savefig.dpi": 125,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.autolayout": True,
}

_METADATA = {"Software": "pggplots"}

_COLORS = ["#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"]


@dataclass(frozen=True)
class FigureSpec:
    """What to draw, from which files, into which image."""

    kind: str
    inputs: tuple[str, ...]
    output: str
    style: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"kind={self.kind!r} not one of {sorted(KINDS)}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        object.__setattr__(self, "inputs", tuple(str(p) for p in self.inputs))


def _labels(ax, spec: FigureSpec, default_x: str, default_y: str) -> None:
    ax.set_xlabel(spec.style.get("xlabel", default_x))
    ax.set_ylabel(spec.style.get("ylabel", default_y))
    if "title" in spec.style:
        ax.set_title(spec.style["title"])
    if "xlim" in spec.style:
        ax.set_xlim(*spec.style["xlim"])
    if "ylim" in spec.style:
        ax.set_ylim(*spec.style["ylim"])


def _render_histogram(spec: FigureSpec, ax) -> None:
    width = 0.8 / len(spec.inputs)
    for i, path in enumerate(spec.inputs):
        data = read_columns(path, ("root_count", "frequency"))
        label = spec.style.get("labels", [Path(p).stem for p in spec.inputs])[i]
        ax.bar(data["root_count"] + (i - (len(spec.inputs) - 1) / 2) * width,
               data["frequency"], width=width, color=_COLORS[i % len(_COLORS)],
               label=str(label))
    ax.set_xticks(range(5))
    ax.legend()
    _labels(ax, spec, "number of equilibria", "draws")


def _render_trajectories(spec: FigureSpec, ax) -> None:
    for i, path in enumerate(spec.inputs):
        data = read_columns(path, ("t", "x"))
        ax.plot(data["t"], data["x"], color="#5e3c99", lw=1.2)
    ax.set_ylim(spec.style.get("ylim", (0.0, 1.0)))
    _labels(ax, spec, "t", "cooperator frequency")


def _render_bifurcation(spec: FigureSpec, ax) -> None:
    data = read_columns(spec.inputs[0], ("x", "mu", "side", "is_critical"),
                        text_columns=("side",))
    side = np.array(data["side"])
    crit = data["is_critical"] > 0.5
    for s in ("left", "right"):
        mask = (side == s) & ~crit
        order = np.argsort(data["x"][mask])
        ax.plot(data["x"][mask][order], data["mu"][mask][order],
                color="#4c72b0", lw=1.3)
    if np.any(crit):
        ax.plot(data["x"][crit], data["mu"][crit], "o", ms=5,
                color="#c44e52", zorder=5)
    ax.axvline(0.5, ls="--", color="0.4", lw=1.0)
    ax.set_xlim(0.0, 1.0)
    _labels(ax, spec, "x", "mu")


def _grid_from_long(x, y, z):
    xs = np.unique(x)
    ys = np.unique(y)
    grid = np.full((ys.size, xs.size), np.nan)
    xi = np.searchsorted(xs, x)
    yi = np.searchsorted(ys, y)
    grid[yi, xi] = z
    return xs, ys, grid


def _render_surface(spec: FigureSpec, ax) -> None:
    data = read_columns(spec.inputs[0], ("mu", "q", "x"))
    xs, ys, grid = _grid_from_long(data["mu"], data["q"], data["x"])
    mesh = ax.pcolormesh(xs, ys, grid, cmap="viridis", shading="nearest")
    plt.colorbar(mesh, ax=ax, label=spec.style.get("zlabel", "x1"))
    _labels(ax, spec, "mu", "q")


def _render_regions(spec: FigureSpec, ax) -> None:
    data = read_columns(spec.inputs[0], ("x", "y", "region"))
    xs, ys, grid = _grid_from_long(data["x"], data["y"], data["region"])
    n_regions = int(np.nanmax(grid)) + 1
    cmap = matplotlib.colors.ListedColormap(
        ["#7b3294", "#c2a5cf", "#fdb863", "#e66101"][:max(n_regions, 2)])
    ax.pcolormesh(xs, ys, grid, cmap=cmap, shading="nearest",
                  vmin=-0.5, vmax=max(n_regions, 2) - 0.5)
    _labels(ax, spec, "x", "y")


KINDS = {
    "histogram": _render_histogram,
    "trajectories": _render_trajectories,
    "bifurcation": _render_bifurcation,
    "surface": _render_surface,
    "regions": _render_regions,
}


def render(spec: FigureSpec) -> Path:
    """Draw the figure and write it to ``spec.output``; returns the path."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=spec.style.get("figsize", (5.0, 3.6)))
        try:
            KINDS[spec.kind](spec, ax)
            out = Path(spec.output)
            out.parent.mkdir(parents=True, exist_ok=True)
            fig.savefig(out, metadata=_METADATA)
        finally:
            plt.close(fig)
    return Path(spec.output)
