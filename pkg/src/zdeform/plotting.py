"""Matplotlib figures for grids and boundaries.

Figures are written with the Agg backend and without timestamp metadata.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .grid import DeformationGrid  # noqa: E402

__all__ = ["plot_boundaries", "plot_grid", "savefig"]

STYLE = {
    "font.size": 9,
    "axes.labelsize": 10,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "lines.linewidth": 1.0,
    "figure.dpi": 100,
    "svg.hashsalt": "zdeform",
}

ISO_K_COLOR = "#1f5fa8"
ISO_B_COLOR = "#c23b22"


def savefig(fig, path):
    """Write `fig` to `path` and close it."""
    fig.savefig(path, dpi=150, bbox_inches="tight", metadata={"Software": None})
    plt.close(fig)


def plot_grid(g: DeformationGrid, path, reference: DeformationGrid | None = None,
              b_axis: str = "virtual"):
    shift = g.spec.form.params.get("b0", 0.0) if b_axis == "total" else 0.0
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        if reference is not None:
            for c in reference.iso_k + reference.iso_b:
                for seg in c.segments:
                    ax.plot([v[0] for v in seg], [v[1] + shift for v in seg],
                            color="0.6", lw=0.6, ls="--")
        for curves, color, lab in ((g.iso_k, ISO_K_COLOR, "iso-k"), (g.iso_b, ISO_B_COLOR, "iso-b")):
            first = True
            for c in curves:
                for seg in c.segments:
                    ax.plot([v[0] for v in seg], [v[1] + shift for v in seg], color=color,
                            label=lab if first else None)
                    first = False
        if g.boundary:
            ax.plot([p.K for p in g.boundary], [p.B + shift for p in g.boundary],
                    color="k", lw=2.2, label="b = 0 (stability limit)")
        xs = [v[0] for c in g.iso_k + g.iso_b for v in c.vertices()]
        ys = [v[1] + shift for c in g.iso_k + g.iso_b for v in c.vertices()]
        if xs:
            padx = 0.05 * (max(xs) - min(xs) or 1.0)
            pady = 0.05 * (max(ys) - min(ys) or 1.0)
            ax.set_xlim(min(xs + [0.0]) - padx, max(xs) + padx)
            ax.set_ylim(min(ys + [0.0]) - pady, max(ys) + pady)
        ax.axhline(0.0, color="0.5", lw=0.5)
        ax.axvline(0.0, color="0.5", lw=0.5)
        ax.set_xlabel("K (virtual stiffness, normalized)")
        ax.set_ylabel("B + b0 (total damping)" if b_axis == "total" else "B (virtual damping, normalized)")
        ax.set_title(g.spec.form.label())
        ax.legend(loc="best")
        savefig(fig, path)


def plot_boundaries(boundaries: dict, path):
    """Overlay zero-damping curves, `boundaries` maps label -> list of BoundaryPoint."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.4, 4.8))
        for label, pts in boundaries.items():
            ax.plot([p.K for p in pts], [p.B for p in pts], label=label)
        ax.axhline(0.0, color="0.5", lw=0.5)
        ax.axvline(0.0, color="0.5", lw=0.5)
        ax.set_xlabel("K (virtual stiffness, normalized)")
        ax.set_ylabel("B (virtual damping, normalized)")
        ax.legend(loc="best")
        savefig(fig, path)
