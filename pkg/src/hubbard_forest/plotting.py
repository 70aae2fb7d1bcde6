"""Render forest layouts to image files with matplotlib."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def draw_forest(layouts: dict, trees: dict, path: str, critical=(), marked=()) -> None:
    """One panel per tree; critical vertices are filled black."""
    names = list(layouts)
    fig, axes = plt.subplots(1, len(names), figsize=(3.2 * len(names), 3.2), squeeze=False)
    for ax, u in zip(axes[0], names):
        pos, t = layouts[u], trees[u]
        for a, b in sorted(t.edges):
            ax.plot([pos[a][0], pos[b][0]], [pos[a][1], pos[b][1]], color="0.35", lw=1.2, zorder=1)
        for v, (x, y) in sorted(pos.items()):
            face = "black" if v in critical else "white"
            edge = "tab:red" if v in marked else "black"
            ax.scatter([x], [y], s=40, c=face, edgecolors=edge, zorder=2)
            ax.annotate(v, (x, y), textcoords="offset points", xytext=(4, 4), fontsize=8)
        ax.set_title(u, fontsize=10)
        ax.set_aspect("equal")
        ax.margins(0.15)
        ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
