"""Fair-comparison master: decaying forced exploration over black-box learners.

Round ``t`` works as follows. With probability ``min(1, c2 * t**-beta_bar)``
(``beta_bar`` the largest advertised rate exponent among the learners) the
round is an *exploration* round and a learner is drawn uniformly; otherwise the
master *exploits*: it compares all learners at the shared comparison time
``n = min_j n_xplr(j)`` — the smallest exploration count — and picks the
minimizer of ``risk_estimate(j, n) + c1 * n**-beta_j``. Evaluating every
learner's risk at the same sample size is what keeps the comparison fair to
slow-but-eventually-better learners.

Only the selected learner observes the feedback triple, so each learner's
internal time advances exactly on the rounds it was chosen.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Observation, sample_from_probs
from .learners import BanditLearner


@dataclass(slots=True)
class MasterConfig:
    """Master hyperparameters.

    ``c1`` scales the comparison bonus, ``c2`` scales the exploration schedule.
    ``exploration_only_risks`` restricts risk estimates to rewards collected on
    exploration rounds (default: rewards from all rounds, in internal-time
    order).
    """

    c1: float = 0.5
    c2: float = 10.0
    exploration_only_risks: bool = False

    def validate(self) -> None:
        if not self.c1 > 0:
            raise ValueError("c1 must be > 0")
        if not self.c2 > 0:
            raise ValueError("c2 must be > 0")


@dataclass(slots=True)
class RoundDecision:
    """What the master decided on one round.

    ``learner`` is 0-based; ``explored`` says whether the round was a forced
    uniform draw; ``comparison_n`` is the shared comparison time used by the
    selection rule (0 on exploration rounds, where no comparison happens).
    """

    t: int
    explored: bool
    learner: int
    comparison_n: int


def exploration_probability(t: int, c2: float, beta_bar: float) -> float:
    """Forced-exploration probability at round ``t``: min(1, c2 * t**-beta_bar)."""
    if t < 1:
        raise ValueError("rounds are 1-based")
    return min(1.0, c2 * t ** (-beta_bar))


def expected_exploration_count(horizon: int, c2: float, beta_bar: float, num_learners: int) -> float:
    """Expected per-learner exploration count after ``horizon`` rounds.

    Exploration rounds arrive with probability min(1, c2 * t**-beta_bar) and
    split uniformly over the learners, so each expects the schedule's partial
    sum divided by the ensemble size.
    """
    t = np.arange(1, horizon + 1, dtype=float)
    return float(np.minimum(1.0, c2 * t ** (-beta_bar)).sum() / num_learners)


def select_candidate(n: int, risk_estimates: Sequence[float], rate_exponents: Sequence[float], c1: float) -> int:
    """Index (0-based) minimizing ``risk + c1 * n**-beta`` at comparison time ``n``.

    Ties go to the lowest index; with no data yet (``n == 0``) the first
    learner is returned.
    """
    if n == 0:
        return 0
    best = 0
    best_val = risk_estimates[0] + c1 * n ** (-rate_exponents[0])
    for j in range(1, len(risk_estimates)):
        val = risk_estimates[j] + c1 * n ** (-rate_exponents[j])
        if val < best_val:
            best, best_val = j, val
    return best


class FairComparisonMaster:
    """Sequential model selection over black-box learners with fair comparisons.

    Parameters
    ----------
    learners : sequence of BanditLearner
        Fresh learners (internal time 0) sharing the same action count.
    config : MasterConfig
        Hyperparameters; validated on construction.
    """

    def __init__(self, learners: Sequence[BanditLearner], config: MasterConfig | None = None) -> None:
        if len(learners) == 0:
            raise ValueError("need at least one learner")
        ks = {lrn.k for lrn in learners}
        if len(ks) != 1:
            raise ValueError("all learners must share the same action count")
        for lrn in learners:
            if lrn.n != 0:
                raise ValueError("learners must be fresh (internal time 0)")
        self.config = config or MasterConfig()
        self.config.validate()
        self.learners = list(learners)
        self.k = learners[0].k
        self.rate_exponents = [lrn.rate_exponent for lrn in learners]
        self.beta_bar = max(self.rate_exponents)
        self.t = 0
        j = len(self.learners)
        self._n_xplr = [0] * j
        self._n_xplt = [0] * j
        # per-learner prefix sums of observed rewards in internal-time order;
        # _reward_prefix[j][n] = sum of learner j's first n rewards
        self._reward_prefix = [[0.0] for _ in range(j)]
        self._xplr_prefix = [[0.0] for _ in range(j)]
        self._trace_t: list[int] = []
        self._trace_explored: list[bool] = []
        self._trace_learner: list[int] = []
        self._trace_n: list[int] = []

    @property
    def num_learners(self) -> int:
        return len(self.learners)

    def counts(self, j: int) -> int:
        """Total internal time of learner ``j`` (0-based): n_xplr + n_xplt."""
        return self._n_xplr[j] + self._n_xplt[j]

    def exploration_counts(self) -> list[int]:
        return list(self._n_xplr)

    def exploitation_counts(self) -> list[int]:
        return list(self._n_xplt)

    def min_exploration_time(self) -> int:
        """Shared comparison time: the smallest exploration count."""
        return min(self._n_xplr)

    def exploration_probability(self, t: int) -> float:
        return exploration_probability(t, self.config.c2, self.beta_bar)

    def risk_estimate(self, j: int, n: int) -> float:
        """Negative average of learner ``j``'s first ``n`` rewards (0 if n == 0)."""
        if n == 0:
            return 0.0
        prefix = self._xplr_prefix[j] if self.config.exploration_only_risks else self._reward_prefix[j]
        if n >= len(prefix):
            raise ValueError(f"learner {j} has only {len(prefix) - 1} rewards, asked for {n}")
        return -prefix[n] / n

    def _select(self, n: int) -> int:
        risks = [self.risk_estimate(j, n) for j in range(len(self.learners))]
        return select_candidate(n, risks, self.rate_exponents, self.config.c1)

    def step(
        self,
        env,
        master_rng: np.random.Generator,
        action_rng: np.random.Generator,
        env_rng: np.random.Generator,
    ) -> tuple[RoundDecision, Observation]:
        """Play one round against ``env`` and feed the triple to the chosen learner."""
        t = self.t + 1
        explored = master_rng.random() < self.exploration_probability(t)
        if explored:
            j = min(int(master_rng.random() * len(self.learners)), len(self.learners) - 1)
            n_cmp = 0
        else:
            n_cmp = self.min_exploration_time()
            j = self._select(n_cmp)

        learner = self.learners[j]
        policy = learner.propose()
        x = env.sample_context(env_rng)
        probs = policy.action_probabilities(x)
        action = sample_from_probs(probs, action_rng)
        reward = env.sample_reward(action, x, env_rng)
        obs = Observation(x, action, reward)
        learner.update(obs)

        if explored:
            self._n_xplr[j] += 1
            xp = self._xplr_prefix[j]
            xp.append(xp[-1] + reward)
        else:
            self._n_xplt[j] += 1
        rp = self._reward_prefix[j]
        rp.append(rp[-1] + reward)
        self.t = t
        self._trace_t.append(t)
        self._trace_explored.append(explored)
        self._trace_learner.append(j)
        self._trace_n.append(n_cmp)

        assert sum(self._n_xplr) + sum(self._n_xplt) == t
        assert all(self.learners[i].n == self.counts(i) for i in range(len(self.learners)))

        decision = RoundDecision(t=t, explored=explored, learner=j, comparison_n=n_cmp)
        return decision, obs

    def selection_trace(self) -> list[RoundDecision]:
        """Every RoundDecision so far, in round order."""
        return [
            RoundDecision(t=t, explored=d, learner=j, comparison_n=n)
            for t, d, j, n in zip(self._trace_t, self._trace_explored, self._trace_learner, self._trace_n)
        ]

    def learner_rewards(self, j: int) -> np.ndarray:
        """Learner ``j``'s observed rewards in internal-time order."""
        return np.diff(np.asarray(self._reward_prefix[j]))
