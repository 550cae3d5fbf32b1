"""Shared contextual-bandit domain types: observations, policies, and policy value/risk.

Conventions used across the package:

* contexts are 1-d float arrays of length ``d``
* actions are 1-based integers in ``{1, ..., K}`` at every public boundary
  (internal code that indexes arrays uses 0-based and converts at the edge)
* all randomness flows through explicitly passed ``numpy.random.Generator``
  instances — nothing in this module owns a seed
"""

from __future__ import annotations

import abc
from dataclasses import dataclass

import numpy as np


@dataclass(slots=True)
class Observation:
    """One (context, action, reward) feedback triple.

    ``action`` is 1-based. ``reward`` may be any finite real (environments with
    Gaussian noise produce unbounded rewards).
    """

    context: np.ndarray
    action: int
    reward: float


class Policy(abc.ABC):
    """A conditional distribution over ``k`` actions given a context.

    Subclasses implement :meth:`action_probabilities`; it must return a length-k
    vector of nonnegative reals summing to 1. Policies are immutable snapshots:
    a learner proposing a policy must not mutate it afterwards.
    """

    k: int

    @abc.abstractmethod
    def action_probabilities(self, x: np.ndarray) -> np.ndarray:
        """Return the probability vector over actions ``1..k`` for context ``x``."""

    def prob(self, action: int, x: np.ndarray) -> float:
        """Probability of 1-based ``action`` given context ``x``."""
        if not 1 <= action <= self.k:
            raise ValueError(f"action {action} out of range 1..{self.k}")
        return float(self.action_probabilities(x)[action - 1])

    def sample(self, x: np.ndarray, rng: np.random.Generator) -> int:
        """Draw a 1-based action, consuming exactly one uniform from ``rng``."""
        return sample_from_probs(self.action_probabilities(x), rng)


def sample_from_probs(probs: np.ndarray, rng: np.random.Generator) -> int:
    """Inverse-CDF draw of a 1-based index; consumes exactly one uniform.

    Using one uniform per draw (never ``rng.choice``) keeps generator state
    advancement identical across policies, which is what makes paired
    simulations comparable run-for-run.
    """
    u = rng.random()
    idx = int(np.searchsorted(np.cumsum(probs), u, side="right"))
    # guard the u ~ 1.0 / cumsum < 1.0 edge
    return min(idx, len(probs) - 1) + 1


class StaticPolicy(Policy):
    """Context-independent policy with a fixed probability vector."""

    def __init__(self, probs) -> None:
        p = np.asarray(probs, dtype=float)
        if p.ndim != 1 or p.size < 1:
            raise ValueError("probs must be a 1-d vector")
        if np.any(p < 0) or not np.isclose(p.sum(), 1.0, atol=1e-9):
            raise ValueError("probs must be a probability vector")
        self._probs = p
        self.k = p.size

    def action_probabilities(self, x: np.ndarray) -> np.ndarray:
        return self._probs


def uniform_policy(k: int) -> StaticPolicy:
    """The reference policy: uniform over ``k`` actions."""
    return StaticPolicy(np.full(k, 1.0 / k))


class GreedyScorePolicy(Policy):
    """Greedy-over-scores policy with optional epsilon-uniform smoothing.

    Parameters
    ----------
    k : int
        Number of actions.
    score_fn : callable
        Maps a context to a length-k score vector.
    epsilon : float
        Each action gets ``epsilon / k`` floor probability; the argmax of the
        scores (lowest index on ties) receives the remaining ``1 - epsilon``.
    """

    def __init__(self, k: int, score_fn, epsilon: float = 0.0) -> None:
        if not 0.0 <= epsilon <= 1.0:
            raise ValueError("epsilon must lie in [0, 1]")
        self.k = k
        self._score_fn = score_fn
        self._epsilon = epsilon

    def scores(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self._score_fn(x), dtype=float)

    def greedy_action(self, x: np.ndarray) -> int:
        """1-based argmax of the scores, lowest index on ties."""
        return int(np.argmax(self.scores(x))) + 1

    def action_probabilities(self, x: np.ndarray) -> np.ndarray:
        probs = np.full(self.k, self._epsilon / self.k)
        probs[int(np.argmax(self.scores(x)))] += 1.0 - self._epsilon
        return probs


def reference_policy_prob(action: int, x: np.ndarray, k: int) -> float:
    """Probability the uniform reference policy assigns to any action: 1/k."""
    if not 1 <= action <= k:
        raise ValueError(f"action {action} out of range 1..{k}")
    return 1.0 / k


def value_loss(policy: Policy, obs: Observation, k: int) -> float:
    """Importance-weighted value loss of a policy at one logged observation.

    For data logged under the uniform reference policy this is
    ``-reward * k * policy(action | context)``; its expectation is the negative
    policy value, so smaller is better.
    """
    return -obs.reward * k * policy.prob(obs.action, obs.context)


@dataclass(slots=True)
class ValueEstimate:
    """A Monte-Carlo estimate with its standard error and sample count."""

    value: float
    stderr: float
    samples: int


def policy_value(policy: Policy, env, m: int, rng: np.random.Generator) -> ValueEstimate:
    """Monte-Carlo estimate of E[mu_A(X)] under ``policy`` on ``env``.

    Contexts are sampled from the environment; rewards are replaced by their
    true conditional means, so the only Monte-Carlo error is over contexts.
    """
    if m < 1:
        raise ValueError("m must be positive")
    vals = np.empty(m)
    for i in range(m):
        x = env.sample_context(rng)
        vals[i] = policy.action_probabilities(x) @ env.true_mean_vector(x)
    se = float(vals.std(ddof=1) / np.sqrt(m)) if m > 1 else float("inf")
    return ValueEstimate(float(vals.mean()), se, m)


def policy_risk(policy: Policy, env, m: int, rng: np.random.Generator) -> ValueEstimate:
    """Negated policy value (the loss scale the master's risk estimates live on)."""
    est = policy_value(policy, env, m, rng)
    return ValueEstimate(-est.value, est.stderr, est.samples)
