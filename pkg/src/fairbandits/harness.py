"""Experiment configuration, replication, aggregation, and CSV output.

The harness owns the experiment-level contract: run ids, seed derivation,
policy labels, the trace/aggregate CSV schemas, and deterministic replication
(serial or process-parallel, identical output either way).

CSV conventions: UTF-8, comma-separated, one header row, reals written with 17
significant digits (``%.17g``) so values round-trip exactly.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from .environments import Environment, LinearGaussianEnv, QuadrantBernoulliEnv, make_environment
from .learners import make_learner
from .master import MasterConfig
from .seeding import ACTION_STREAM, ENV_STREAM, MASTER_STREAM, stream_rng
from .simulate import RunTrace, run_master, run_standalone


@dataclass(slots=True)
class LearnerSpec:
    """Registry id plus constructor parameters for one base learner."""

    kind: str
    params: dict = field(default_factory=dict)


@dataclass(slots=True)
class EnvSpec:
    """Environment selection: a preset id or a custom family with parameters."""

    env_id: str = "env1"  # "env1", "env2", "quadrant", "linear"
    means: tuple | None = None  # custom quadrant: per-arm rows of 4 means
    coeffs: tuple | None = None  # custom linear: per-arm rows of d+1 coefficients
    noise_sd: float = 1.0
    d: int = 4

    def build(self) -> Environment:
        if self.env_id in ("env1", "env2"):
            return make_environment(self.env_id)
        if self.env_id == "quadrant":
            if self.means is None:
                raise ValueError("custom quadrant environment needs per-arm means")
            return QuadrantBernoulliEnv(self.means, d=self.d)
        if self.env_id == "linear":
            if self.coeffs is None:
                raise ValueError("custom linear environment needs per-arm coefficients")
            return LinearGaussianEnv(self.coeffs, noise_sd=self.noise_sd)
        raise ValueError(f"unknown environment {self.env_id!r} (known: env1, env2, quadrant, linear)")


@dataclass(slots=True)
class ExperimentConfig:
    """Everything needed to reproduce an experiment end to end."""

    env: EnvSpec = field(default_factory=EnvSpec)
    learners: list = field(default_factory=lambda: [LearnerSpec("linucb"), LearnerSpec("epsgreedy")])
    master: MasterConfig = field(default_factory=MasterConfig)
    name: str = "experiment"
    horizon: int = 10_000
    runs: int = 100
    seed: int = 0
    threads: int = 1
    trace: str = "aggregate"  # "aggregate" or "full"

    def validate(self) -> None:
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.trace not in ("aggregate", "full"):
            raise ValueError("trace must be 'aggregate' or 'full'")
        if not self.learners:
            raise ValueError("need at least one learner")
        self.master.validate()
        env = self.env.build()
        for spec in self.learners:
            make_learner(spec.kind, env.k, env.d, spec.params)  # fail fast on bad params

    def learner_labels(self) -> list[str]:
        """Unique per-learner labels: the kind, disambiguated by position on repeats."""
        kinds = [spec.kind for spec in self.learners]
        labels = []
        for i, kind in enumerate(kinds):
            labels.append(f"{kind}-{i + 1}" if kinds.count(kind) > 1 else kind)
        return labels

    def policy_labels(self) -> list[str]:
        return ["master"] + self.learner_labels()


def build_learners(cfg: ExperimentConfig, env: Environment) -> list:
    return [make_learner(spec.kind, env.k, env.d, spec.params) for spec in cfg.learners]


def run_one(cfg: ExperimentConfig, run_id: int) -> dict[str, RunTrace]:
    """One run: the master plus each learner standalone, on shared streams.

    The standalone simulations reuse the run's action/env stream seeds with
    fresh generators, so every policy faces the same contexts, reward noise,
    and action-sampling uniforms — differences in the traces are differences
    between policies, not between random draws.
    """
    env = cfg.env.build()
    master_rng = stream_rng(cfg.seed, run_id, MASTER_STREAM)
    action_rng = stream_rng(cfg.seed, run_id, ACTION_STREAM)
    env_rng = stream_rng(cfg.seed, run_id, ENV_STREAM)
    traces: dict[str, RunTrace] = {}
    traces["master"] = run_master(
        env, build_learners(cfg, env), cfg.master, cfg.horizon, master_rng, action_rng, env_rng
    )
    for spec, label in zip(cfg.learners, cfg.learner_labels()):
        learner = make_learner(spec.kind, env.k, env.d, spec.params)
        trace = run_standalone(
            env,
            learner,
            cfg.horizon,
            stream_rng(cfg.seed, run_id, ACTION_STREAM),
            stream_rng(cfg.seed, run_id, ENV_STREAM),
            label=label,
        )
        traces[label] = trace
    return traces


@dataclass(slots=True)
class ReplicateResult:
    """Replication output: per-policy cumulative-reward matrices plus master stats."""

    cfg: ExperimentConfig
    cum: dict  # label -> (runs, horizon) cumulative rewards
    xplr_final: np.ndarray  # (runs, J) final exploration counts
    counts_final: np.ndarray  # (runs, J) final internal times
    learner_rewards: list | None = None  # per run: per-learner reward sequences

    def policies(self) -> list[str]:
        return list(self.cum)

    def final_cum(self, label: str) -> np.ndarray:
        return self.cum[label][:, -1]

    def mean_cum(self, label: str) -> np.ndarray:
        return self.cum[label].mean(axis=0)

    def aggregate_table(self) -> dict:
        """label -> (mean, q10, q90) curves over t, linear-interpolation quantiles."""
        table = {}
        for label, mat in self.cum.items():
            table[label] = (
                mat.mean(axis=0),
                np.quantile(mat, 0.1, axis=0),
                np.quantile(mat, 0.9, axis=0),
            )
        return table


def _slim_run(cfg: ExperimentConfig, keep_learner_rewards: bool, run_id: int):
    traces = run_one(cfg, run_id)
    master = traces["master"]
    cum = {label: tr.cum_rewards for label, tr in traces.items()}
    rewards = master.learner_rewards if keep_learner_rewards else None
    return cum, master.xplr_counts[-1].copy(), master.counts[-1].copy(), rewards


def replicate(
    cfg: ExperimentConfig,
    keep_learner_rewards: bool = False,
    trace_path: str | None = None,
) -> ReplicateResult:
    """Run ``cfg.runs`` independent runs and collect them deterministically.

    Results are identical whatever ``cfg.threads`` is: run ``i`` always uses the
    streams derived from ``(seed, i)`` and reduction happens in run order. When
    ``trace_path`` is given, every run's full trace is appended to that CSV
    (header first), again in run order.
    """
    cfg.validate()
    j = len(cfg.learners)
    labels = cfg.policy_labels()
    cum = {label: np.empty((cfg.runs, cfg.horizon)) for label in labels}
    xplr_final = np.empty((cfg.runs, j), dtype=np.int64)
    counts_final = np.empty((cfg.runs, j), dtype=np.int64)
    learner_rewards: list | None = [] if keep_learner_rewards else None

    writer_ctx = _TraceWriter(trace_path, cfg) if trace_path else None
    if trace_path:
        # full traces must come back to the writer, so use the full runner
        runner = partial(run_one, cfg)
    else:
        runner = partial(_slim_run, cfg, keep_learner_rewards)

    run_ids = range(cfg.runs)
    if cfg.threads > 1:
        executor = ProcessPoolExecutor(max_workers=cfg.threads)
        results = executor.map(runner, run_ids)
    else:
        executor = None
        results = map(runner, run_ids)
    try:
        for run_id, res in zip(run_ids, results):
            if trace_path:
                traces = res
                writer_ctx.write_run(run_id, traces)
                master = traces["master"]
                run_cum = {label: tr.cum_rewards for label, tr in traces.items()}
                run_xplr, run_counts = master.xplr_counts[-1], master.counts[-1]
                run_rewards = master.learner_rewards if keep_learner_rewards else None
            else:
                run_cum, run_xplr, run_counts, run_rewards = res
            for label in labels:
                cum[label][run_id] = run_cum[label]
            xplr_final[run_id] = run_xplr
            counts_final[run_id] = run_counts
            if keep_learner_rewards:
                learner_rewards.append(run_rewards)
    finally:
        if executor is not None:
            executor.shutdown()
        if writer_ctx is not None:
            writer_ctx.close()
    return ReplicateResult(
        cfg=cfg,
        cum=cum,
        xplr_final=xplr_final,
        counts_final=counts_final,
        learner_rewards=learner_rewards,
    )


def _fmt(value) -> str:
    """CSV cell formatting: reals at 17 significant digits, ints verbatim."""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


class _TraceWriter:
    """Streams trace rows for many runs into one CSV, header written once."""

    def __init__(self, path: str, cfg: ExperimentConfig) -> None:
        self._fh = open(path, "w", encoding="utf-8", newline="")
        self._writer = csv.writer(self._fh)
        self._j = len(cfg.learners)
        self._writer.writerow(trace_header(self._j))

    def write_run(self, run_id: int, traces: dict[str, RunTrace]) -> None:
        for position, (label, tr) in enumerate(traces.items()):
            self._writer.writerows(trace_rows(run_id, label, position, tr, self._j))

    def close(self) -> None:
        self._fh.close()


def trace_header(j: int) -> list[str]:
    cols = ["run_id", "policy", "t", "explored", "selected", "comparison_n", "action", "reward", "cum_reward"]
    cols += [f"n_{i + 1}" for i in range(j)]
    cols += [f"n_xplr_{i + 1}" for i in range(j)]
    return cols


def trace_rows(run_id: int, label: str, position: int, tr: RunTrace, j: int):
    """Render one run's rows. ``position`` 0 is the master, i >= 1 learner i.

    Standalone rows carry their own 1-based learner index in ``selected``, a
    zero ``comparison_n``, and counters that put every round on that learner.
    """
    is_master = tr.explored is not None
    horizon = tr.horizon
    for i in range(horizon):
        t = i + 1
        if is_master:
            explored = int(tr.explored[i])
            selected = int(tr.selected[i]) + 1
            comparison_n = int(tr.comparison_n[i])
            n_cols = [int(v) for v in tr.counts[i]]
            x_cols = [int(v) for v in tr.xplr_counts[i]]
        else:
            explored = 0
            selected = position
            comparison_n = 0
            n_cols = [0] * j
            n_cols[position - 1] = t
            x_cols = [0] * j
        yield (
            [str(run_id), label, str(t), str(explored), str(selected), str(comparison_n), str(int(tr.actions[i]))]
            + [_fmt(tr.rewards[i]), _fmt(tr.cum_rewards[i])]
            + [str(v) for v in n_cols]
            + [str(v) for v in x_cols]
        )


def write_trace_csv(path: str, cfg: ExperimentConfig, runs: dict[int, dict[str, RunTrace]]) -> None:
    """Write trace rows for the given runs (keyed by run_id), in run order."""
    writer = _TraceWriter(path, cfg)
    try:
        for run_id in sorted(runs):
            writer.write_run(run_id, runs[run_id])
    finally:
        writer.close()


def write_aggregate_csv(path: str, result: ReplicateResult) -> None:
    """Write per-round mean/q10/q90 cumulative reward for every policy."""
    table = result.aggregate_table()
    for label, (mean, q10, q90) in table.items():
        bad = (q10 > mean) | (mean > q90)
        if bad.any():
            t_bad = int(np.flatnonzero(bad)[0]) + 1
            raise ValueError(f"aggregate invariant q10 <= mean <= q90 violated for {label!r} at t={t_bad}")
    labels = list(table)
    header = ["t"]
    for label in labels:
        header += [f"{label}_mean", f"{label}_q10", f"{label}_q90"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(result.cfg.horizon):
            row = [str(i + 1)]
            for label in labels:
                mean, q10, q90 = table[label]
                row += [_fmt(mean[i]), _fmt(q10[i]), _fmt(q90[i])]
            writer.writerow(row)


def write_deviation_csv(path: str, reports: list) -> None:
    """Write deviation-diagnostic reports (one block of rows per learner)."""
    if not reports:
        raise ValueError("no deviation reports to write")
    pairs = list(reports[0].exceed_freq)
    header = ["learner", "n", "runs", "r_star", "mean_excess", "se_excess"]
    header += [f"freq_c0_{c0:g}_beta_{beta:g}" for c0, beta in pairs]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for rep in reports:
            if list(rep.exceed_freq) != pairs:
                raise ValueError("all reports must use the same bound pairs")
            for i, n in enumerate(rep.grid):
                row = [rep.label, str(int(n)), str(rep.runs), _fmt(rep.r_star), _fmt(rep.mean_excess[i]), _fmt(rep.se_excess[i])]
                row += [_fmt(rep.exceed_freq[pair][i]) for pair in pairs]
                writer.writerow(row)


def write_selection_csv(path: str, report) -> None:
    """Write the suboptimal-selection frequencies over comparison times."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "runs", "freq_suboptimal"])
        for i, n in enumerate(report.grid):
            writer.writerow([str(int(n)), str(report.runs), _fmt(report.freq_suboptimal[i])])


def read_csv_columns(path: str) -> dict[str, list[str]]:
    """Read a CSV into {column -> list of raw strings} (test/CLI helper)."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols: dict[str, list[str]] = {name: [] for name in header}
        for row in reader:
            for name, cell in zip(header, row):
                cols[name].append(cell)
    return cols
