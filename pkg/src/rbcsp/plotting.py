"""Render sweep results to an image file.

Uses matplotlib's object API (no pyplot, no GUI backend) so rendering works
in headless batch runs; the CSV stays the canonical output and the figure
is a convenience view of the same rows.
"""

from __future__ import annotations

from .montecarlo import SweepRow
from .theory import threshold


def plot_sweep(rows: list[SweepRow], path: str) -> None:
    """Write a two-panel figure: solvable fractions on top, mean counts
    (log scale, zeros omitted) below, with the predicted critical density
    marked on both."""
    if not rows:
        raise ValueError("no sweep rows to plot")
    from matplotlib.figure import Figure

    r = [row.r for row in rows]
    first = rows[0]
    crit = threshold(first.alpha, first.p)

    fig = Figure(figsize=(7.0, 7.5))
    ax_frac, ax_mean = fig.subplots(2, 1, sharex=True)

    ax_frac.plot(r, [row.frac_sat for row in rows], "o-", label="satisfiable")
    ax_frac.plot(
        r, [row.frac_super11 for row in rows], "s-", label="pair-repairable"
    )
    ax_frac.plot(
        r, [row.frac_super10 for row in rows], "^-", label="singly repairable"
    )
    ax_frac.set_ylabel("fraction of instances")
    ax_frac.set_ylim(-0.05, 1.05)
    ax_frac.legend(loc="best")
    ax_frac.set_title(
        f"n={first.n}, k={first.k}, alpha={first.alpha:g}, "
        f"p={first.p:g}, {first.trials} trials/point"
    )

    for label, means in (
        ("mean #solutions", [row.mean_solutions for row in rows]),
        ("mean #pair-repairable", [row.mean_super11 for row in rows]),
    ):
        pts = [(x, y) for x, y in zip(r, means) if y > 0.0]
        if pts:
            ax_mean.plot([x for x, _ in pts], [y for _, y in pts], "o-", label=label)
    ax_mean.set_yscale("log")
    ax_mean.set_xlabel("constraint density r")
    ax_mean.set_ylabel("mean count per instance")
    ax_mean.legend(loc="best")

    for ax in (ax_frac, ax_mean):
        ax.axvline(crit, color="grey", linestyle="--", linewidth=1.0)
        ax.grid(True, alpha=0.3)
    ax_frac.annotate(
        f"-alpha/ln p = {crit:.4f}",
        xy=(crit, 0.5),
        xytext=(5, 0),
        textcoords="offset points",
        rotation=90,
        va="center",
        fontsize=8,
        color="grey",
    )

    fig.tight_layout()
    fig.savefig(path, dpi=150)
