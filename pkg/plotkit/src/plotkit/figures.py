"""Render fairbandits CSVs as the two standard figure kinds.

``aggregate``  — one panel per input CSV: mean cumulative reward per policy
                 with the q10-q90 band shaded around each line.
``single-run`` — one panel per input CSV: cumulative reward per round
                 (cum_reward / t) for the master and each base learner, with
                 a vertical black line at the final min-exploration count.

Everything drawn comes straight from CSV columns; the only arithmetic applied
is the per-round division for single-run curves. Output is deterministic for
fixed inputs: SVG ids are salted with a constant and no timestamps are
embedded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .csvio import AggregateData, SingleRunData, panel_label

matplotlib.rcParams["svg.hashsalt"] = "plotkit"

_FIGURE_KINDS = ("aggregate", "single-run")


@dataclass(slots=True)
class FigureSpec:
    """A figure request: what to read, what to draw, where to write."""

    inputs: list[str]
    output: str
    kind: str  # "aggregate" or "single-run"
    title: str | None = None
    xlabel: str = "t"
    ylabel: str | None = None

    def validate(self) -> None:
        if self.kind not in _FIGURE_KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r} (known: {', '.join(_FIGURE_KINDS)})")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


def _panels(n: int):
    fig, axes = plt.subplots(1, n, figsize=(6.0 * n, 4.5), squeeze=False)
    return fig, axes[0]


def _save(fig, path: str | None) -> None:
    if path is None:
        return
    fig.savefig(path, metadata={"Date": None} if path.endswith(".svg") else None)


def plot_aggregate(
    paths: list[str], out: str | None = None, title: str | None = None, ylabel: str = "cumulative reward"
):
    """Mean cumulative reward with quantile bands, one panel per input CSV."""
    fig, axes = _panels(len(paths))
    for ax, path in zip(axes, paths):
        data = AggregateData.load(path)
        for label in data.policies:
            mean, q10, q90 = data.curves[label]
            (line,) = ax.plot(data.t, mean, label=label)
            ax.fill_between(data.t, q10, q90, color=line.get_color(), alpha=0.2, linewidth=0)
        ax.set_xlabel("t")
        ax.set_ylabel(ylabel)
        ax.set_title(panel_label(path))
        ax.legend()
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    _save(fig, out)
    return fig


def plot_single_run(
    paths: list[str], out: str | None = None, title: str | None = None, ylabel: str = "cumulative reward per round"
):
    """One run's per-round average reward curves plus the exploration marker."""
    fig, axes = _panels(len(paths))
    for ax, path in zip(axes, paths):
        data = SingleRunData.load(path)
        for label in data.policies:
            ax.plot(data.t, data.curves[label] / data.t, label=label)
        ax.axvline(data.marker, color="black")
        ax.set_xlabel("t")
        ax.set_ylabel(ylabel)
        ax.set_title(panel_label(path))
        ax.legend()
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    _save(fig, out)
    return fig


def render(spec: FigureSpec):
    """Render one FigureSpec and write its output file."""
    spec.validate()
    plot = plot_aggregate if spec.kind == "aggregate" else plot_single_run
    kwargs = {} if spec.ylabel is None else {"ylabel": spec.ylabel}
    return plot(spec.inputs, spec.output, spec.title, **kwargs)
