"""Base contextual-bandit learners exposed to the master through a black-box contract.

Each learner sees only its own feedback triples (its *internal time* ``n`` is
the number of updates it has received), proposes a policy deterministically
from that history, and advertises the exponent of its assumed excess-risk decay
``n ** -rate_exponent``. Randomized behaviour (epsilon smoothing) lives in the
proposed policy, never inside the learner, so proposals are replayable.

Updates rebind fresh parameter arrays instead of mutating in place: policies
proposed earlier keep valid snapshots of the parameters they were built from.
"""

from __future__ import annotations

import abc
import math

import numpy as np

from .core import GreedyScorePolicy, Observation, Policy, StaticPolicy
from .environments import quadrant_index


class BanditLearner(abc.ABC):
    """Black-box learner contract used by the master and the harness.

    Attributes
    ----------
    k : int
        Number of actions.
    rate_exponent : float
        Exponent of the learner's assumed excess-risk decay (in (0, 1]).
    kind : str
        Registry id of the learner family.
    """

    k: int
    rate_exponent: float
    kind: str

    @property
    def n(self) -> int:
        """Internal time: number of feedback triples consumed so far."""
        return self._n

    @abc.abstractmethod
    def propose(self) -> Policy:
        """Policy for internal round ``n + 1``; deterministic given history."""

    @abc.abstractmethod
    def update(self, obs: Observation) -> None:
        """Consume one feedback triple and advance internal time."""


class LinUcbLearner(BanditLearner):
    """Disjoint LinUCB with per-arm ridge regression on features (1, x).

    Scores each arm by ``theta_a . z + alpha * sqrt(z' A_a^-1 z)`` where
    ``A_a`` is the regularized Gram matrix of arm ``a`` and ``z = (1, x)``;
    the proposed policy is a point mass on the argmax (lowest index on ties).

    Parameters
    ----------
    k, d : int
        Action count and context dimension.
    alpha : float
        Width multiplier on the confidence bonus.
    ridge : float
        Ridge regularizer added to each arm's Gram matrix.
    """

    kind = "linucb"
    rate_exponent = 0.5

    def __init__(self, k: int, d: int, alpha: float = 1.0, ridge: float = 1.0) -> None:
        if k < 2:
            raise ValueError("need at least two arms")
        if alpha < 0 or ridge <= 0:
            raise ValueError("alpha must be >= 0 and ridge > 0")
        self.k = k
        self.d = d
        self.alpha = float(alpha)
        self.ridge = float(ridge)
        p = d + 1
        self._a_inv = [np.eye(p) / ridge for _ in range(k)]
        self._b = [np.zeros(p) for _ in range(k)]
        self._theta = [np.zeros(p) for _ in range(k)]
        self._n = 0

    def _features(self, x: np.ndarray) -> np.ndarray:
        z = np.empty(self.d + 1)
        z[0] = 1.0
        z[1:] = x
        return z

    def propose(self) -> Policy:
        a_inv = tuple(self._a_inv)  # snapshots: update() rebinds, never mutates
        theta = tuple(self._theta)
        alpha = self.alpha
        k = self.k
        features = self._features

        def score_fn(x: np.ndarray) -> np.ndarray:
            z = features(x)
            s = np.empty(k)
            for a in range(k):
                s[a] = theta[a] @ z + alpha * math.sqrt(z @ a_inv[a] @ z)
            return s

        return GreedyScorePolicy(k, score_fn)

    def update(self, obs: Observation) -> None:
        a = obs.action - 1
        z = self._features(obs.context)
        a_inv = self._a_inv[a]
        v = a_inv @ z
        # rank-1 Sherman-Morrison update of the inverse Gram matrix
        a_inv = a_inv - np.outer(v, v) / (1.0 + z @ v)
        b = self._b[a] + obs.reward * z
        self._a_inv[a] = a_inv
        self._b[a] = b
        self._theta[a] = a_inv @ b
        self._n += 1


class EpsGreedyLearner(BanditLearner):
    """Epsilon-greedy over per-arm least squares on quadrant indicator features.

    The regression features are ``(1, 1[q=0], 1[q=1], 1[q=3])`` where ``q`` is
    the quadrant of (x1, x2) in the order (-,-), (-,+), (+,-), (+,+) — a
    saturated model of any reward function that is constant on quadrants. The
    schedule ``eps = (n + 1) ** (-1/3)`` matches the advertised decay exponent
    of 1/3.

    Coefficients are refit by a direct (d+1) x (d+1) solve after every update;
    with the tiny default ridge this equals the batch least-squares fit to
    working precision, which rank-1 inverse updates would not guarantee.
    """

    kind = "epsgreedy"
    rate_exponent = 1.0 / 3.0

    def __init__(self, k: int, d: int = 4, ridge: float = 1e-6) -> None:
        if k < 2:
            raise ValueError("need at least two arms")
        if d < 2:
            raise ValueError("quadrant features need context dimension >= 2")
        if ridge <= 0:
            raise ValueError("ridge must be > 0")
        self.k = k
        self.d = d
        self.ridge = float(ridge)
        p = 4
        self._gram = [ridge * np.eye(p) for _ in range(k)]
        self._b = [np.zeros(p) for _ in range(k)]
        self._theta = [np.zeros(p) for _ in range(k)]
        self._n = 0

    @staticmethod
    def _features(x: np.ndarray) -> np.ndarray:
        q = quadrant_index(x)
        z = np.zeros(4)
        z[0] = 1.0
        if q == 0:
            z[1] = 1.0
        elif q == 1:
            z[2] = 1.0
        elif q == 3:
            z[3] = 1.0
        return z

    def epsilon(self) -> float:
        return (self._n + 1) ** (-1.0 / 3.0)

    def propose(self) -> Policy:
        theta = tuple(self._theta)
        k = self.k
        features = self._features

        def score_fn(x: np.ndarray) -> np.ndarray:
            z = features(x)
            s = np.empty(k)
            for a in range(k):
                s[a] = theta[a] @ z
            return s

        return GreedyScorePolicy(k, score_fn, epsilon=self.epsilon())

    def update(self, obs: Observation) -> None:
        a = obs.action - 1
        z = self._features(obs.context)
        gram = self._gram[a] + np.outer(z, z)
        b = self._b[a] + obs.reward * z
        self._gram[a] = gram
        self._b[a] = b
        self._theta[a] = np.linalg.solve(gram, b)
        self._n += 1


class Ucb1Learner(BanditLearner):
    """Context-free UCB1: plays every arm once, then argmax of mean + bonus.

    The bonus is ``sqrt(2 ln n / n_a)`` with ``n`` the learner's internal time
    and ``n_a`` the pull count of arm ``a``; an arm with no data has mean 0 and
    is owed a forced pull. Included as a deliberately context-blind baseline.
    """

    kind = "ucb1"
    rate_exponent = 0.5

    def __init__(self, k: int) -> None:
        if k < 2:
            raise ValueError("need at least two arms")
        self.k = k
        self._counts = [0] * k
        self._sums = [0.0] * k
        self._n = 0

    def propose(self) -> Policy:
        for a in range(self.k):
            if self._counts[a] == 0:
                return _point_mass(self.k, a)
        log_term = 2.0 * math.log(self._n)
        best, best_score = 0, -math.inf
        for a in range(self.k):
            score = self._sums[a] / self._counts[a] + math.sqrt(log_term / self._counts[a])
            if score > best_score:
                best, best_score = a, score
        return _point_mass(self.k, best)

    def update(self, obs: Observation) -> None:
        a = obs.action - 1
        self._counts[a] += 1
        self._sums[a] += obs.reward
        self._n += 1


def _point_mass(k: int, a: int) -> StaticPolicy:
    probs = np.zeros(k)
    probs[a] = 1.0
    return StaticPolicy(probs)


LEARNERS = {"linucb": LinUcbLearner, "epsgreedy": EpsGreedyLearner, "ucb1": Ucb1Learner}


def make_learner(kind: str, k: int, d: int, params: dict | None = None) -> BanditLearner:
    """Build a fresh learner by registry id; ``params`` are family-specific."""
    params = dict(params or {})
    try:
        cls = LEARNERS[kind]
    except KeyError:
        known = ", ".join(sorted(LEARNERS))
        raise ValueError(f"unknown learner {kind!r} (known: {known})") from None
    if cls is Ucb1Learner:
        return cls(k, **params)
    return cls(k, d, **params)
