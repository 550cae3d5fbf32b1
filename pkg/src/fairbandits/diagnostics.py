"""Empirical rate and selection diagnostics.

These tools answer the questions the simulations are run for: how fast does
cumulative pseudo-regret grow (log-log slope over a dyadic grid), does a
learner's running risk approach its class optimum at the advertised rate, and
how often would the comparison rule pick a suboptimal learner at a given
comparison time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .learners import make_learner
from .master import select_candidate
from .seeding import ACTION_STREAM, ENV_STREAM, stream_rng
from .simulate import run_standalone

_ORACLE_SEED = 727272


def pseudo_regret_curve(rewards: np.ndarray, optimal_value: float) -> np.ndarray:
    """Cumulative pseudo-regret: cumsum of (optimal value - reward)."""
    return np.cumsum(optimal_value - np.asarray(rewards, dtype=float))


def dyadic_grid(lo: int, hi: int, include_hi: bool = True) -> np.ndarray:
    """Powers of two in [lo, hi], optionally closed by ``hi`` itself."""
    if lo < 1 or hi < lo:
        raise ValueError("need 1 <= lo <= hi")
    points = []
    p = 1
    while p < lo:
        p *= 2
    while p <= hi:
        points.append(p)
        p *= 2
    if include_hi and (not points or points[-1] != hi):
        points.append(hi)
    return np.asarray(points, dtype=np.int64)


@dataclass(slots=True)
class RateFit:
    """Least-squares fit of log(curve[t]/t) against log(t)."""

    slope: float
    intercept: float
    grid: np.ndarray
    excluded: int  # grid points dropped because the curve was <= 0 there


def loglog_slope(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    """Slope and intercept of log(y) on log(x) by ordinary least squares."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(intercept)


def fit_rate_exponent(curve: np.ndarray, burn_in: int = 64, grid: np.ndarray | None = None) -> RateFit:
    """Empirical decay exponent of per-round regret.

    ``curve`` is a cumulative regret curve; the per-round regret at time ``t``
    is taken as ``curve[t]/t`` and its log is regressed on ``log(t)`` over a
    dyadic grid starting at ``burn_in``. Nonpositive values (possible early on
    with lucky runs) are excluded and counted.
    """
    curve = np.asarray(curve, dtype=float)
    horizon = curve.size
    if horizon < burn_in:
        raise ValueError(f"curve length {horizon} shorter than burn-in {burn_in}")
    if grid is None:
        grid = dyadic_grid(burn_in, horizon)
    grid = np.asarray(grid, dtype=np.int64)
    per_round = curve[grid - 1] / grid
    keep = per_round > 0
    if keep.sum() < 2:
        raise ValueError("fewer than two positive grid points; cannot fit a rate")
    slope, intercept = loglog_slope(grid[keep], per_round[keep])
    return RateFit(slope=slope, intercept=intercept, grid=grid[keep], excluded=int((~keep).sum()))


@dataclass(slots=True)
class LinearRegretReport:
    """Flags learners whose per-round regret stopped shrinking."""

    last_decile_mean: float
    threshold: float
    detected: bool


def detect_linear_regret(curve: np.ndarray, threshold: float = 0.02) -> LinearRegretReport:
    """Mean per-round regret over the final 10% of rounds, against a floor."""
    curve = np.asarray(curve, dtype=float)
    horizon = curve.size
    start = max(1, (9 * horizon) // 10)
    mean = (curve[-1] - curve[start - 1]) / (horizon - start)
    return LinearRegretReport(last_decile_mean=float(mean), threshold=threshold, detected=bool(mean >= threshold))


# ---------------------------------------------------------------------------
# class-optimum oracles: the best achievable value within a learner's policy class


def best_quadrant_policy_value(env, samples: int = 1_000_000, seed: int = _ORACLE_SEED) -> float:
    """Value of the best policy that is constant on each (x1, x2) quadrant.

    Monte Carlo per quadrant: conditional mean rewards are averaged within each
    quadrant and the best arm taken; quadrants are equiprobable for the
    standard-normal contexts both environment families use.
    """
    rng = np.random.default_rng(seed)
    contexts = rng.standard_normal((samples, env.d))
    means = env.true_mean_matrix(contexts)
    quad = 2 * (contexts[:, 0] >= 0.0).astype(np.intp) + (contexts[:, 1] >= 0.0)
    total = 0.0
    for q in range(4):
        mask = quad == q
        total += means[mask].mean(axis=0).max()
    return float(total / 4.0)


def best_constant_action_value(env, samples: int = 1_000_000, seed: int = _ORACLE_SEED) -> float:
    """Value of the best single fixed action (the class a context-free learner fits)."""
    rng = np.random.default_rng(seed)
    contexts = rng.standard_normal((samples, env.d))
    return float(env.true_mean_matrix(contexts).mean(axis=0).max())


def best_linear_greedy_value(env, samples: int = 1_000_000, seed: int = _ORACLE_SEED) -> float:
    """Value of acting greedily on each arm's best linear approximation.

    Each arm's conditional mean is projected onto (1, x) by least squares on a
    Monte-Carlo design; a fresh batch then scores the greedy policy. For
    linear environments this recovers the optimal value; elsewhere it is the
    natural reference point for a linear-model learner.
    """
    rng = np.random.default_rng(seed)
    contexts = rng.standard_normal((samples, env.d))
    design = np.column_stack([np.ones(samples), contexts])
    means = env.true_mean_matrix(contexts)
    coef, *_ = np.linalg.lstsq(design, means, rcond=None)
    fresh = rng.standard_normal((samples, env.d))
    scores = np.column_stack([np.ones(samples), fresh]) @ coef
    chosen = scores.argmax(axis=1)
    return float(env.true_mean_matrix(fresh)[np.arange(samples), chosen].mean())


_REALIZABLE = {("epsgreedy", "QuadrantBernoulliEnv"), ("linucb", "LinearGaussianEnv")}


def class_optimal_risk(kind: str, env, samples: int = 1_000_000, seed: int = _ORACLE_SEED) -> float:
    """Risk (negative value) of the best policy in a learner's class on ``env``.

    Realizable pairs — a quadrant learner on a quadrant environment, a linear
    learner on a linear environment — use the environment's optimal value;
    everything else falls back to the class-specific Monte-Carlo oracle.
    """
    if (kind, type(env).__name__) in _REALIZABLE:
        return -env.optimal_value()
    if kind == "epsgreedy":
        return -best_quadrant_policy_value(env, samples, seed)
    if kind == "ucb1":
        return -best_constant_action_value(env, samples, seed)
    if kind == "linucb":
        return -best_linear_greedy_value(env, samples, seed)
    raise ValueError(f"no class optimum known for learner kind {kind!r}")


# ---------------------------------------------------------------------------
# deviation diagnostic: running risk vs class optimum over internal time


@dataclass(slots=True)
class DeviationReport:
    """How a learner's running risk deviates from its class optimum.

    ``mean_excess[i]`` is the across-run mean of ``running_risk(n) - r_star``
    at internal time ``grid[i]``; ``exceed_freq[(c0, beta)][i]`` is the
    fraction of runs where ``|running_risk(n) - r_star| > c0 * n**-beta``.
    """

    label: str
    r_star: float
    grid: np.ndarray
    mean_excess: np.ndarray
    se_excess: np.ndarray
    exceed_freq: dict
    runs: int


def deviation_diagnostic(
    learner_spec,
    env,
    r_star: float,
    horizon: int,
    runs: int,
    base_seed: int,
    grid: np.ndarray | None = None,
    bound_pairs: tuple = ((1.0, 0.5),),
    label: str | None = None,
) -> DeviationReport:
    """Replicate a standalone learner and track its running risk per round.

    The excess of the running risk over ``r_star`` at internal time ``n`` is
    measured through the per-round conditional regret ``max_a mu_a(x) -
    sum_a pi(a|x) mu_a(x)`` — the policy's exact shortfall given the realized
    context, free of reward noise.  Averaging it over the first ``n`` rounds
    and subtracting the gap between the environment's optimal value and
    ``-r_star`` gives an unbiased, variance-reduced estimate of
    ``running_risk(n) - r_star`` (the context-optimal value acts as a control
    variate; for a class containing the optimal policy the gap is zero and
    the estimate is nonnegative by construction).
    """
    if grid is None:
        grid = dyadic_grid(min(64, horizon), horizon)
    grid = np.asarray(grid, dtype=np.int64)
    if grid[-1] > horizon:
        raise ValueError("grid extends past the horizon")
    # running_risk(n) - r_star == avg conditional regret - (V_opt - (-r_star))
    # in expectation; the subtracted constant vanishes for realizable pairs.
    value_gap = env.optimal_value() + r_star
    excess = np.empty((runs, grid.size))
    for run_id in range(runs):
        learner = make_learner(learner_spec.kind, env.k, env.d, learner_spec.params)
        _, cond_regret = run_standalone(
            env,
            learner,
            horizon,
            stream_rng(base_seed, run_id, ACTION_STREAM),
            stream_rng(base_seed, run_id, ENV_STREAM),
            track_conditional_regret=True,
        )
        running_gap = np.cumsum(cond_regret)[grid - 1] / grid
        excess[run_id] = running_gap - value_gap
    exceed = {}
    for c0, beta in bound_pairs:
        bound = c0 * grid.astype(float) ** (-beta)
        exceed[(c0, beta)] = (np.abs(excess) > bound).mean(axis=0)
    return DeviationReport(
        label=label or learner_spec.kind,
        r_star=r_star,
        grid=grid,
        mean_excess=excess.mean(axis=0),
        se_excess=excess.std(axis=0, ddof=1) / math.sqrt(runs) if runs > 1 else np.full(grid.size, np.nan),
        exceed_freq=exceed,
        runs=runs,
    )


# ---------------------------------------------------------------------------
# suboptimal-selection diagnostic: replaying the comparison rule offline


@dataclass(slots=True)
class SelectionReport:
    """How often the comparison rule picks outside the optimal learner set."""

    grid: np.ndarray
    freq_suboptimal: np.ndarray
    runs: int


def suboptimal_selection_diagnostic(
    per_run_rewards: list,
    rate_exponents: list,
    c1: float,
    optimal_set: set,
    grid: np.ndarray | None = None,
) -> SelectionReport:
    """Replay the selection rule on recorded per-learner reward sequences.

    ``per_run_rewards[r][j]`` is learner ``j``'s reward sequence (internal-time
    order) from replication ``r``. For each comparison time ``n`` in the grid
    the rule ``argmin_j -mean(first n rewards) + c1 * n**-beta_j`` is evaluated
    per run; the report gives the fraction of runs where the winner is outside
    ``optimal_set`` (0-based indices).
    """
    if not per_run_rewards:
        raise ValueError("need at least one replication")
    n_max = min(min(len(r) for r in run) for run in per_run_rewards)
    if n_max < 1:
        raise ValueError("every learner needs at least one observed reward")
    if grid is None:
        grid = dyadic_grid(min(64, n_max), n_max, include_hi=False)
        if grid.size == 0:
            grid = np.array([n_max], dtype=np.int64)
    grid = np.asarray(grid, dtype=np.int64)
    if grid[-1] > n_max:
        raise ValueError(f"grid extends past the shortest reward sequence ({n_max})")
    bad = np.zeros(grid.size)
    for run in per_run_rewards:
        prefixes = [np.concatenate([[0.0], np.cumsum(np.asarray(r, dtype=float))]) for r in run]
        for i, n in enumerate(grid):
            risks = [-p[n] / n for p in prefixes]
            winner = select_candidate(int(n), risks, rate_exponents, c1)
            if winner not in optimal_set:
                bad[i] += 1.0
    return SelectionReport(grid=grid, freq_suboptimal=bad / len(per_run_rewards), runs=len(per_run_rewards))
