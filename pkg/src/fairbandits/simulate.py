"""Single-run simulation engines.

Both engines consume generator streams in an identical per-round order —
context (d normals), one action uniform, one reward variate — so a
single-learner master run and a standalone run with shared action/env streams
produce identical action and reward sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Observation, sample_from_probs
from .learners import BanditLearner
from .master import FairComparisonMaster, MasterConfig


@dataclass(slots=True)
class RunTrace:
    """Per-round record of one simulated run.

    ``actions`` are 1-based; ``selected`` is 1-based in I/O spirit but stored
    0-based here and converted at the CSV boundary. Master-only fields are
    ``None`` for standalone runs.
    """

    label: str
    actions: np.ndarray
    rewards: np.ndarray
    cum_rewards: np.ndarray
    explored: np.ndarray | None = None
    selected: np.ndarray | None = None
    comparison_n: np.ndarray | None = None
    counts: np.ndarray | None = None  # (T, J) internal times after each round
    xplr_counts: np.ndarray | None = None  # (T, J) exploration counts after each round
    learner_rewards: list | None = None  # per-learner rewards in internal-time order

    @property
    def horizon(self) -> int:
        return self.actions.size


def run_master(
    env,
    learners: list[BanditLearner],
    config: MasterConfig,
    horizon: int,
    master_rng: np.random.Generator,
    action_rng: np.random.Generator,
    env_rng: np.random.Generator,
) -> RunTrace:
    """Simulate the fair-comparison master for ``horizon`` rounds."""
    master = FairComparisonMaster(learners, config)
    j = len(learners)
    actions = np.empty(horizon, dtype=np.int64)
    rewards = np.empty(horizon)
    explored = np.empty(horizon, dtype=bool)
    selected = np.empty(horizon, dtype=np.int64)
    comparison_n = np.empty(horizon, dtype=np.int64)
    for i in range(horizon):
        decision, obs = master.step(env, master_rng, action_rng, env_rng)
        actions[i] = obs.action
        rewards[i] = obs.reward
        explored[i] = decision.explored
        selected[i] = decision.learner
        comparison_n[i] = decision.comparison_n
    counts = np.empty((horizon, j), dtype=np.int64)
    xplr_counts = np.empty((horizon, j), dtype=np.int64)
    for jj in range(j):
        picked = selected == jj
        counts[:, jj] = np.cumsum(picked)
        xplr_counts[:, jj] = np.cumsum(picked & explored)
    return RunTrace(
        label="master",
        actions=actions,
        rewards=rewards,
        cum_rewards=np.cumsum(rewards),
        explored=explored,
        selected=selected,
        comparison_n=comparison_n,
        counts=counts,
        xplr_counts=xplr_counts,
        learner_rewards=[master.learner_rewards(jj) for jj in range(j)],
    )


def run_standalone(
    env,
    learner: BanditLearner,
    horizon: int,
    action_rng: np.random.Generator,
    env_rng: np.random.Generator,
    label: str | None = None,
    track_conditional_regret: bool = False,
) -> RunTrace | tuple[RunTrace, np.ndarray]:
    """Simulate one learner alone for ``horizon`` rounds.

    With ``track_conditional_regret`` the per-round shortfall of the played
    policy at each realized context, ``max_a mu_a(x) - sum_a pi(a|x) mu_a(x)``,
    is returned alongside the trace.  Because the context-optimal value is
    subtracted pointwise, the tracked quantity is nonnegative by construction
    and has far lower variance than the raw conditional value (the common
    across-context variation cancels), while its average over rounds remains
    an unbiased estimate of the mean policy-value gap.
    """
    actions = np.empty(horizon, dtype=np.int64)
    rewards = np.empty(horizon)
    cond_regret = np.empty(horizon) if track_conditional_regret else None
    for i in range(horizon):
        policy = learner.propose()
        x = env.sample_context(env_rng)
        probs = policy.action_probabilities(x)
        action = sample_from_probs(probs, action_rng)
        reward = env.sample_reward(action, x, env_rng)
        learner.update(Observation(x, action, reward))
        actions[i] = action
        rewards[i] = reward
        if cond_regret is not None:
            means = env.true_mean_vector(x)
            cond_regret[i] = means.max() - probs @ means
    trace = RunTrace(
        label=label or learner.kind,
        actions=actions,
        rewards=rewards,
        cum_rewards=np.cumsum(rewards),
    )
    if track_conditional_regret:
        return trace, cond_regret
    return trace
