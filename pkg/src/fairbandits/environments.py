"""Synthetic contextual-bandit environments.

Two families are provided and each ships a ready preset:

* :class:`QuadrantBernoulliEnv` (``env1``) — Bernoulli rewards whose success
  probability depends on the context only through the quadrant of
  ``(x1, x2)``; favours learners that model the quadrant structure.
* :class:`LinearGaussianEnv` (``env2``) — Gaussian rewards with linear
  conditional means; favours learners that model linear structure.

Environments are stateless reward/context samplers: all randomness comes from
generators passed in by the caller, and exactly one reward variate is consumed
per round regardless of the action taken, so paired simulations that share a
generator stay aligned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

import abc

_MC_SAMPLES_DEFAULT = 4_000_000
_MC_SEED = 424243  # fixed: optimal values are environment properties, not run properties


@dataclass(slots=True)
class OptimalValueInfo:
    """How an environment's optimal value was computed."""

    value: float
    method: str  # "exact" or "monte-carlo"
    samples: int  # 0 for exact
    seed: int | None  # None for exact
    stderr: float  # 0.0 for exact


class Environment(abc.ABC):
    """Contract every synthetic environment satisfies."""

    k: int
    d: int
    env_id: str

    @abc.abstractmethod
    def sample_context(self, rng: np.random.Generator) -> np.ndarray:
        """Draw one context vector."""

    @abc.abstractmethod
    def sample_reward(self, action: int, x: np.ndarray, rng: np.random.Generator) -> float:
        """Draw one reward for 1-based ``action`` at context ``x``.

        Must consume exactly one variate from ``rng`` whatever the action.
        """

    @abc.abstractmethod
    def true_mean(self, action: int, x: np.ndarray) -> float:
        """Exact conditional mean reward of 1-based ``action`` at ``x``."""

    @abc.abstractmethod
    def true_mean_vector(self, x: np.ndarray) -> np.ndarray:
        """Length-k vector of conditional mean rewards at ``x``."""

    @abc.abstractmethod
    def true_mean_matrix(self, contexts: np.ndarray) -> np.ndarray:
        """(n, k) conditional means for a batch of contexts (oracle helper)."""

    @abc.abstractmethod
    def optimal_value_info(self) -> OptimalValueInfo:
        """Value of the best measurable policy, with how the number was obtained."""

    def optimal_value(self) -> float:
        return self.optimal_value_info().value

    @abc.abstractmethod
    def uniform_policy_value(self) -> float:
        """Exact value of the uniform-over-actions reference policy."""


def quadrant_index(x: np.ndarray) -> int:
    """Quadrant of (x1, x2) in the fixed order (-,-), (-,+), (+,-), (+,+).

    The boundary convention is ``>= 0`` counts as the positive half-plane.
    """
    return 2 * (x[0] >= 0.0) + (x[1] >= 0.0)


def quadrant_indices(contexts: np.ndarray) -> np.ndarray:
    """Vectorized :func:`quadrant_index` over an (n, d) context batch."""
    return 2 * (contexts[:, 0] >= 0.0).astype(np.intp) + (contexts[:, 1] >= 0.0)


class QuadrantBernoulliEnv(Environment):
    """Bernoulli arms whose success probability is constant on each quadrant.

    Contexts are d-dimensional standard normal vectors (d >= 2); the reward of
    arm ``a`` is Bernoulli with parameter ``means[a-1][q]`` where ``q`` is the
    quadrant of (x1, x2). With independent standard-normal coordinates the four
    quadrants are equiprobable, which makes the optimal value exact:
    the average over quadrants of the best arm's mean.
    """

    def __init__(self, means, d: int = 4, env_id: str = "custom-quadrant") -> None:
        m = np.asarray(means, dtype=float)
        if m.ndim != 2 or m.shape[1] != 4:
            raise ValueError("means must have shape (k, 4), one column per quadrant")
        if np.any(m < 0.0) or np.any(m > 1.0):
            raise ValueError("Bernoulli means must lie in [0, 1]")
        if m.shape[0] < 2:
            raise ValueError("need at least two arms")
        if d < 2:
            raise ValueError("context dimension must be >= 2")
        self._means = m
        self.k = m.shape[0]
        self.d = int(d)
        self.env_id = env_id

    @property
    def means(self) -> np.ndarray:
        return self._means

    def sample_context(self, rng: np.random.Generator) -> np.ndarray:
        return rng.standard_normal(self.d)

    def sample_reward(self, action: int, x: np.ndarray, rng: np.random.Generator) -> float:
        p = self._means[action - 1, quadrant_index(x)]
        return float(rng.random() < p)

    def true_mean(self, action: int, x: np.ndarray) -> float:
        return float(self._means[action - 1, quadrant_index(x)])

    def true_mean_vector(self, x: np.ndarray) -> np.ndarray:
        return self._means[:, quadrant_index(x)]

    def true_mean_matrix(self, contexts: np.ndarray) -> np.ndarray:
        return self._means[:, quadrant_indices(contexts)].T

    def optimal_value_info(self) -> OptimalValueInfo:
        # quadrants are equiprobable, so the exact optimum is a 4-term average
        v = float(self._means.max(axis=0).mean())
        return OptimalValueInfo(value=v, method="exact", samples=0, seed=None, stderr=0.0)

    def uniform_policy_value(self) -> float:
        # equiprobable quadrants and a uniform arm draw: plain average of the table
        return float(self._means.mean())


class LinearGaussianEnv(Environment):
    """Gaussian arms with linear conditional means.

    ``coeffs`` has shape (k, d+1): column 0 is the intercept, the rest multiply
    the context. Rewards are ``mean + noise_sd * N(0, 1)`` and unbounded. The
    optimal value E[max_a mu_a(X)] has no elementary closed form for general
    coefficients, so it is estimated once by Monte Carlo with a fixed seed and
    cached; the sample size and seed are reported alongside the value.
    """

    def __init__(self, coeffs, noise_sd: float = 1.0, env_id: str = "custom-linear") -> None:
        c = np.asarray(coeffs, dtype=float)
        if c.ndim != 2 or c.shape[1] < 2:
            raise ValueError("coeffs must have shape (k, d+1) with d >= 1")
        if c.shape[0] < 2:
            raise ValueError("need at least two arms")
        if not noise_sd >= 0.0:
            raise ValueError("noise_sd must be nonnegative")
        self._intercepts = c[:, 0].copy()
        self._weights = c[:, 1:].copy()
        self.noise_sd = float(noise_sd)
        self.k = c.shape[0]
        self.d = c.shape[1] - 1
        self.env_id = env_id
        self._optimal: OptimalValueInfo | None = None

    @property
    def coeffs(self) -> np.ndarray:
        return np.column_stack([self._intercepts, self._weights])

    def sample_context(self, rng: np.random.Generator) -> np.ndarray:
        return rng.standard_normal(self.d)

    def sample_reward(self, action: int, x: np.ndarray, rng: np.random.Generator) -> float:
        a = action - 1
        mean = self._intercepts[a] + self._weights[a] @ x
        return float(mean + self.noise_sd * rng.standard_normal())

    def true_mean(self, action: int, x: np.ndarray) -> float:
        a = action - 1
        return float(self._intercepts[a] + self._weights[a] @ x)

    def true_mean_vector(self, x: np.ndarray) -> np.ndarray:
        return self._intercepts + self._weights @ x

    def true_mean_matrix(self, contexts: np.ndarray) -> np.ndarray:
        return contexts @ self._weights.T + self._intercepts

    def optimal_value_info(self, samples: int = _MC_SAMPLES_DEFAULT) -> OptimalValueInfo:
        if self._optimal is None:
            rng = np.random.default_rng(_MC_SEED)
            best = np.empty(samples)
            # chunked so the context batch stays small in memory
            chunk = 262_144
            lo = 0
            while lo < samples:
                n = min(chunk, samples - lo)
                contexts = rng.standard_normal((n, self.d))
                best[lo : lo + n] = self.true_mean_matrix(contexts).max(axis=1)
                lo += n
            self._optimal = OptimalValueInfo(
                value=float(best.mean()),
                method="monte-carlo",
                samples=samples,
                seed=_MC_SEED,
                stderr=float(best.std(ddof=1) / np.sqrt(samples)),
            )
        return self._optimal

    def uniform_policy_value(self) -> float:
        # E[x] = 0, so only the intercepts survive the uniform arm average
        return float(self._intercepts.mean())


# Preset 1: quadrant Bernoulli means, quadrant order (-,-), (-,+), (+,-), (+,+)
ENV1_ARM_MEANS = (
    (0.1, 0.5, 0.7, 0.45),  # arm 1
    (0.8, 0.1, 0.3, 0.6),  # arm 2
)

# Preset 2: (intercept, w1..w4) per arm; unit Gaussian reward noise
ENV2_COEFFS = (
    (0.9, 0.5, 0.3, -0.9, -0.2),  # arm 1
    (0.9, -0.5, 0.1, -0.7, 0.6),  # arm 2
)


def make_env1() -> QuadrantBernoulliEnv:
    return QuadrantBernoulliEnv(ENV1_ARM_MEANS, d=4, env_id="env1")


def make_env2() -> LinearGaussianEnv:
    return LinearGaussianEnv(ENV2_COEFFS, noise_sd=1.0, env_id="env2")


ENVIRONMENTS = {"env1": make_env1, "env2": make_env2}


def make_environment(env_id: str) -> Environment:
    """Build a preset environment by id ("env1" or "env2")."""
    try:
        factory = ENVIRONMENTS[env_id]
    except KeyError:
        known = ", ".join(sorted(ENVIRONMENTS))
        raise ValueError(f"unknown environment {env_id!r} (known: {known})") from None
    return factory()
