"""CSV loading for the two fairbandits output schemas.

plotkit renders columns exactly as written by the simulation harness — it
never recomputes statistics. The loaders here validate the schema, convert
columns to numpy arrays, and report missing columns by name.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass

import numpy as np


class SchemaError(ValueError):
    """An input CSV does not carry the columns a figure kind needs."""


def read_columns(path: str) -> dict[str, list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty") from None
        cols: dict[str, list[str]] = {name: [] for name in header}
        for row in reader:
            for name, value in zip(header, row):
                cols[name].append(value)
    return cols


@dataclass(slots=True)
class AggregateData:
    """One aggregate CSV: per-policy mean/q10/q90 cumulative-reward curves."""

    t: np.ndarray
    policies: list[str]
    curves: dict  # label -> (mean, q10, q90) arrays

    @classmethod
    def load(cls, path: str) -> "AggregateData":
        cols = read_columns(path)
        if "t" not in cols:
            raise SchemaError(f"{path}: missing column 't'")
        policies = [name[: -len("_mean")] for name in cols if name.endswith("_mean")]
        if not policies:
            raise SchemaError(f"{path}: no '<policy>_mean' columns found")
        curves = {}
        for label in policies:
            triple = []
            for stat in ("mean", "q10", "q90"):
                name = f"{label}_{stat}"
                if name not in cols:
                    raise SchemaError(f"{path}: missing column {name!r}")
                triple.append(np.array([float(v) for v in cols[name]]))
            curves[label] = tuple(triple)
        return cls(
            t=np.array([int(v) for v in cols["t"]]),
            policies=policies,
            curves=curves,
        )


@dataclass(slots=True)
class SingleRunData:
    """One run extracted from a trace CSV.

    ``curves`` maps each policy label to its cumulative-reward column over
    t = 1..T; ``marker`` is the final min-exploration count, read from the
    last master row's ``n_xplr_*`` columns.
    """

    t: np.ndarray
    policies: list[str]
    curves: dict  # label -> cum_reward array
    marker: int
    run_id: int

    @classmethod
    def load(cls, path: str) -> "SingleRunData":
        cols = read_columns(path)
        for name in ("run_id", "policy", "t", "cum_reward"):
            if name not in cols:
                raise SchemaError(f"{path}: missing column {name!r}")
        xplr_names = sorted(
            (n for n in cols if re.fullmatch(r"n_xplr_\d+", n)),
            key=lambda n: int(n.rsplit("_", 1)[1]),
        )
        if not xplr_names:
            raise SchemaError(f"{path}: missing column 'n_xplr_1'")
        if not cols["run_id"]:
            raise SchemaError(f"{path}: trace has no data rows")

        run_id = int(cols["run_id"][0])  # first run in the file
        keep = [i for i, v in enumerate(cols["run_id"]) if int(v) == run_id]
        policy = [cols["policy"][i] for i in keep]
        t = np.array([int(cols["t"][i]) for i in keep])
        cum = np.array([float(cols["cum_reward"][i]) for i in keep])

        policies: list[str] = []
        for label in policy:
            if label not in policies:
                policies.append(label)
        curves = {}
        for label in policies:
            mask = np.array([p == label for p in policy])
            order = np.argsort(t[mask], kind="stable")
            curves[label] = cum[mask][order]
        horizon = curves[policies[0]].size
        for label, curve in curves.items():
            if curve.size != horizon:
                raise SchemaError(f"{path}: policy {label!r} has {curve.size} rows, expected {horizon}")

        master_rows = [i for i in keep if cols["policy"][i] == "master"]
        if not master_rows:
            raise SchemaError(f"{path}: no 'master' rows in run {run_id}")
        last = max(master_rows, key=lambda i: int(cols["t"][i]))
        marker = min(int(cols[name][last]) for name in xplr_names)
        return cls(
            t=np.arange(1, horizon + 1),
            policies=policies,
            curves=curves,
            marker=marker,
            run_id=run_id,
        )


def panel_label(path: str) -> str:
    """Environment label for a panel, parsed from the input filename."""
    stem = re.split(r"[/\\]", path)[-1]
    stem = stem.rsplit(".", 1)[0]
    match = re.search(r"env\d+", stem)
    return match.group(0) if match else stem
