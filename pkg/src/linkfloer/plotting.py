"""Figures: a grid diagram with its link components, and tilde ranks by grading."""

from __future__ import annotations

from collections.abc import Mapping
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .grid import GridDiagram, component_rows  # noqa: E402


def _style(ax) -> None:
    for side in ("top", "right"):
        ax.spines[side].set_visible(False)
    ax.spines["left"].set_linewidth(0.5)
    ax.spines["bottom"].set_linewidth(0.5)
    ax.tick_params(width=0.5, labelsize=8)


def plot_grid(g: GridDiagram, path: str | Path | None = None, title: str = ""):
    """Draw O/X markers and the link; rows run O to X, columns X to O."""
    n = g.n
    fig, ax = plt.subplots(figsize=(0.5 * n + 1.5, 0.5 * n + 1.5))
    for k in range(n + 1):
        ax.plot([0, n], [k, k], color="0.85", lw=0.5)
        ax.plot([k, k], [0, n], color="0.85", lw=0.5)
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for ci, rows in enumerate(component_rows(g)):
        c = colors[ci % len(colors)]
        for r in rows:
            y = r + 0.5
            ax.plot([g.O[r] + 0.5, g.X[r] + 0.5], [y, y], color=c, lw=1.5, zorder=2)
        for col in {g.X[r] for r in rows}:
            ro = g.O.index(col)
            rx = g.X.index(col)
            # vertical strands pass over horizontal ones
            ax.plot([col + 0.5] * 2, [rx + 0.5, ro + 0.5], color="w", lw=4, zorder=3)
            ax.plot([col + 0.5] * 2, [rx + 0.5, ro + 0.5], color=c, lw=1.5, zorder=4)
    for r in range(n):
        ax.text(g.O[r] + 0.5, r + 0.5, "O", ha="center", va="center", fontsize=10, zorder=5,
                bbox=dict(boxstyle="circle,pad=0.1", fc="w", ec="none"))
        ax.text(g.X[r] + 0.5, r + 0.5, "X", ha="center", va="center", fontsize=10, zorder=5,
                bbox=dict(boxstyle="square,pad=0.1", fc="w", ec="none"))
    ax.set_xlim(0, n)
    ax.set_ylim(0, n)
    ax.set_aspect("equal")
    ax.set_xticks([])
    ax.set_yticks([])
    ax.set_title(title or f"grid of size {n}", fontsize=9)
    fig.tight_layout()
    if path is not None:
        fig.savefig(path, dpi=150)
        plt.close(fig)
    return fig


def plot_tilde_ranks(ranks: Mapping[tuple, int], path: str | Path | None = None, title: str = ""):
    """Dot chart of ranks over (Alexander, Maslov); dot area scales with rank.

    ``ranks`` maps (gr_w, alexander) to a rank, where alexander is the doubled
    per-component tuple; the total is plotted halved.
    """
    pts: dict[tuple[float, int], int] = {}
    for (m, alex), r in ranks.items():
        a = sum(v for _, v in alex) / 2
        pts[(a, m)] = pts.get((a, m), 0) + r
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    _style(ax)
    if pts:
        xs, ys, rs = zip(*[(a, m, r) for (a, m), r in sorted(pts.items())])
        ax.scatter(xs, ys, s=[30 * r for r in rs], color="0.25", zorder=3)
        for x, y, r in zip(xs, ys, rs):
            ax.annotate(str(r), (x, y), xytext=(6, 4), textcoords="offset points", fontsize=7)
        ax.set_xticks(sorted(set(xs)))
        ax.set_yticks(sorted(set(ys)))
    ax.set_xlabel("Alexander grading", fontsize=9)
    ax.set_ylabel("Maslov grading", fontsize=9)
    ax.grid(True, lw=0.3, color="0.9")
    total = sum(ranks.values())
    ax.set_title(title or f"tilde ranks, total {total}", fontsize=9)
    fig.tight_layout()
    if path is not None:
        fig.savefig(path, dpi=150)
        plt.close(fig)
    return fig
