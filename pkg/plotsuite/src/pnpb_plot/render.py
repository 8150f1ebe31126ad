"""Figure rendering.  Pure function of the input CSVs: a pinned style and a
fixed renderer configuration make reruns byte-identical."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import Table
from .jobs import PlotJob

#: pinned output configuration; changing any of these changes the bytes
DPI = 150
FIGSIZE_GRID = (10.0, 6.0)
FIGSIZE_SINGLE = (6.0, 4.0)

#: the six standard profile panels
PROFILE_PANELS = ("C_1", "C_2", "C_3", "rho", "theta", "Gamma")
PANEL_TITLES = {
    "C_1": "cations $C_1$",
    "C_2": "anions $C_2$",
    "C_3": "water $C_3$",
    "rho": r"charge density $\rho$",
    "theta": r"occupancy $\theta$",
    "Gamma": r"void fraction $\Gamma$",
}


def _save(fig, path):
    # strip nondeterministic PNG metadata so identical inputs give
    # identical bytes
    fig.savefig(path, dpi=DPI, metadata={"Software": ""})
    plt.close(fig)


def render_profiles(job: PlotJob) -> None:
    tables = [(label, Table(path)) for label, path in job.curves]
    fig, axes = plt.subplots(2, 3, figsize=FIGSIZE_GRID, constrained_layout=True)
    for ax, column in zip(axes.flat, PROFILE_PANELS):
        for label, table in tables:
            ax.plot(table.col("x"), table.col(column), label=label, linewidth=1.2)
        ax.set_title(PANEL_TITLES[column])
        ax.set_xlabel("x")
        ax.grid(True, alpha=0.3)
    axes.flat[0].legend(fontsize=8)
    if job.title:
        fig.suptitle(job.title)
    _save(fig, job.output)


def render_trace(job: PlotJob) -> None:
    fig, ax = plt.subplots(figsize=FIGSIZE_SINGLE, constrained_layout=True)
    ax2 = ax.twinx()
    for label, path in job.curves:
        table = Table(path)
        t = table.col("time")
        ax.plot(t, table.col("E"), label=f"E {label}".strip(), linewidth=1.2)
        ax2.plot(t, table.col("D"), linestyle="--", alpha=0.6, linewidth=1.0)
    ax.set_xlabel("t")
    ax.set_ylabel("free energy E")
    ax2.set_ylabel("dissipation D (dashed)")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    if job.title:
        fig.suptitle(job.title)
    _save(fig, job.output)


def render_heatmap(job: PlotJob) -> None:
    column = f"C_{job.species}"
    tables = [(label, Table(path)) for label, path in job.curves]
    fig, axes = plt.subplots(1, len(tables), figsize=FIGSIZE_GRID,
                             constrained_layout=True, squeeze=False)
    for ax, (label, table) in zip(axes.flat, tables):
        x, y, c = table.col("x"), table.col("y"), table.col(column)
        xs = np.unique(x)
        ys = np.unique(y)
        grid = c.reshape(len(xs), len(ys))
        im = ax.pcolormesh(xs, ys, grid.T, shading="nearest")
        ax.set_title(f"{column}  {label}".strip())
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        ax.set_aspect("equal")
        fig.colorbar(im, ax=ax, shrink=0.8)
    if job.title:
        fig.suptitle(job.title)
    _save(fig, job.output)


def render_marginals(job: PlotJob) -> None:
    column = f"C_{job.species}"
    fig, ax = plt.subplots(figsize=FIGSIZE_SINGLE, constrained_layout=True)
    for label, path in job.curves:
        table = Table(path)
        ax.plot(table.col("x"), table.col(column), label=label, linewidth=1.2)
    ax.set_xlabel("x")
    ax.set_ylabel(rf"$\int {column.replace('_', '_{') + '}'}\,dy$")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    if job.title:
        fig.suptitle(job.title)
    _save(fig, job.output)


_RENDERERS = {
    "profiles": render_profiles,
    "trace": render_trace,
    "heatmap": render_heatmap,
    "marginals": render_marginals,
}


def render(job: PlotJob) -> None:
    """Render one job to its output image."""
    _RENDERERS[job.kind](job)
