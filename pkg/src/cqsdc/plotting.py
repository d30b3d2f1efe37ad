"""Figures for the ``report`` command.

Uses the object-oriented matplotlib API (no pyplot global state) so it
works headless and from threads.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .metrics import EfficiencyRow
from .protocol import ALL_MESSAGES, DecodeTable, Message2
from .security import SecurityReport

_DPI = 150


def _save(fig: Figure, path: str | Path) -> Path:
    path = Path(path)
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=_DPI, bbox_inches="tight")
    return path


def efficiency_figure(rows: list[EfficiencyRow], path: str | Path) -> Path:
    fig = Figure(figsize=(7, 3.6))
    ax = fig.add_subplot(1, 1, 1)
    x = np.arange(len(rows))
    width = 0.38
    colors = ["0.6" if r.source == "cited" else "C0" for r in rows]
    ax.bar(x - width / 2, [r.eta1 for r in rows], width, color=colors, label="eta1")
    ax.bar(x + width / 2, [r.eta2 for r in rows], width, color=colors, alpha=0.55, hatch="//", label="eta2")
    ax.scatter(x - width / 2, [r.published_eta1 for r in rows], marker="_", s=200, color="k", zorder=3)
    ax.scatter(x + width / 2, [r.published_eta2 for r in rows], marker="_", s=200, color="k", zorder=3,
               label="published")
    ax.set_xticks(x)
    ax.set_xticklabels([r.name for r in rows], rotation=20, ha="right", fontsize=8)
    ax.set_ylabel("efficiency")
    ax.set_ylim(0, 0.6)
    ax.legend(fontsize=8, frameon=False)
    ax.set_title("eta1 = m/(q+b), eta2 = m/q   (grey: cited values)", fontsize=9)
    return _save(fig, path)


def conditional_figure(report: SecurityReport, path: str | Path) -> Path:
    """Heat map of P(message | visible tuple) for one adversary view."""
    visible = sorted(report.conditionals)
    grid = np.array([[float(report.conditionals[v][m]) for m in ALL_MESSAGES] for v in visible])
    fig = Figure(figsize=(3.6, 0.28 * len(visible) + 1.4))
    ax = fig.add_subplot(1, 1, 1)
    im = ax.imshow(grid, vmin=0, vmax=1, cmap="Blues", aspect="auto")
    ax.set_xticks(range(len(ALL_MESSAGES)))
    ax.set_xticklabels([str(m) for m in ALL_MESSAGES])
    ax.set_yticks(range(len(visible)))
    ax.set_yticklabels([" ".join(v) for v in visible], fontsize=7)
    ax.set_xlabel("message")
    ax.set_title(
        f"{report.view.name}\nI = {report.mutual_information_bits:.3f} bit, "
        f"guess = {float(report.max_guess_probability):.2f}",
        fontsize=8,
    )
    fig.colorbar(im, ax=ax, fraction=0.08)
    return _save(fig, path)


def table_figure(derived: DecodeTable, published: DecodeTable, path: str | Path) -> Path:
    """Derived decode table as a grid, flagging rows that disagree with the published table."""
    rows = derived.rows()
    fig = Figure(figsize=(3.2, 0.25 * len(rows) + 1.2))
    ax = fig.add_subplot(1, 1, 1)
    values = np.array([[int(str(m), 2)] for _, m in rows])
    ax.imshow(values, cmap="Pastel1", vmin=0, vmax=8, aspect="auto")
    for i, (key, msg) in enumerate(rows):
        printed: Message2 | None = published.entries.get(key)
        label = str(msg) if printed == msg else f"{msg} (pub. {printed})"
        ok = printed == msg
        ax.text(0, i, label, ha="center", va="center", fontsize=7,
                color="k" if ok else "darkred", fontweight="normal" if ok else "bold")
    ax.set_xticks([])
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels([str(k) for k, _ in rows], fontsize=7)
    ax.set_title(f"{derived.protocol.value} decode table", fontsize=9)
    return _save(fig, path)
