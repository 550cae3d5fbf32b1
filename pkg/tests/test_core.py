"""Core types: policies, importance-weighted losses, and policy value/risk."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fairbandits.core import (
    GreedyScorePolicy,
    Observation,
    StaticPolicy,
    policy_risk,
    policy_value,
    reference_policy_prob,
    sample_from_probs,
    uniform_policy,
    value_loss,
)
from fairbandits.environments import make_env1


def quadrature_uniform_value_env1():
    """Independent oracle: uniform-policy value on the quadrant preset.

    Quadrants of (x1, x2) are equiprobable under independent standard normals,
    so the value is the plain average of the per-quadrant, per-arm mean table.
    """
    table = np.array([[0.1, 0.5, 0.7, 0.45], [0.8, 0.1, 0.3, 0.6]])
    per_quadrant = table.mean(axis=0)  # uniform over the two arms
    return float(per_quadrant.mean())  # equiprobable quadrants


class TestPolicies:
    def test_uniform_policy_probs(self):
        pol = uniform_policy(4)
        np.testing.assert_allclose(pol.action_probabilities(np.zeros(3)), 0.25)
        assert pol.prob(1, np.zeros(3)) == 0.25

    def test_reference_policy_prob(self):
        assert reference_policy_prob(2, np.zeros(4), k=2) == 0.5
        with pytest.raises(ValueError):
            reference_policy_prob(3, np.zeros(4), k=2)

    def test_static_policy_rejects_bad_vectors(self):
        with pytest.raises(ValueError):
            StaticPolicy([0.5, 0.6])
        with pytest.raises(ValueError):
            StaticPolicy([-0.1, 1.1])

    def test_greedy_policy_point_mass_and_tie_break(self):
        pol = GreedyScorePolicy(3, lambda x: np.array([1.0, 2.0, 2.0]))
        np.testing.assert_array_equal(pol.action_probabilities(np.zeros(2)), [0.0, 1.0, 0.0])
        assert pol.greedy_action(np.zeros(2)) == 2  # lowest index wins the tie

    def test_greedy_policy_epsilon_floor(self):
        pol = GreedyScorePolicy(2, lambda x: np.array([0.0, 1.0]), epsilon=0.5)
        np.testing.assert_allclose(pol.action_probabilities(np.zeros(2)), [0.25, 0.75])

    def test_sample_consumes_one_uniform(self):
        pol = uniform_policy(3)
        rng_a = np.random.default_rng(9)
        pol.sample(np.zeros(2), rng_a)
        rng_b = np.random.default_rng(9)
        rng_b.random()
        assert rng_a.random() == rng_b.random()

    def test_sample_matches_inverse_cdf(self):
        probs = np.array([0.2, 0.5, 0.3])
        rng = np.random.default_rng(0)
        draws = np.array([sample_from_probs(probs, rng) for _ in range(20000)])
        freq = np.bincount(draws, minlength=4)[1:] / draws.size
        np.testing.assert_allclose(freq, probs, atol=0.015)

    @given(st.lists(st.floats(min_value=-50, max_value=50), min_size=2, max_size=6),
           st.floats(min_value=0, max_value=1))
    def test_greedy_policy_probs_form_a_simplex(self, scores, eps):
        pol = GreedyScorePolicy(len(scores), lambda x: np.array(scores), epsilon=eps)
        probs = pol.action_probabilities(np.zeros(1))
        assert np.all(probs >= 0)
        assert abs(probs.sum() - 1.0) < 1e-12


class TestValueLoss:
    def test_uniform_policy_loss_is_negated_reward(self):
        # k * (1/k) telescopes away whatever k is
        for k in (2, 3, 5):
            pol = uniform_policy(k)
            obs = Observation(np.zeros(4), action=1, reward=0.7)
            assert value_loss(pol, obs, k) == pytest.approx(-0.7)

    def test_point_mass_two_arms(self):
        pol = StaticPolicy([1.0, 0.0])
        obs = Observation(np.zeros(4), action=1, reward=0.5)
        assert value_loss(pol, obs, k=2) == pytest.approx(-1.0)

    @given(st.floats(min_value=-10, max_value=10), st.integers(min_value=2, max_value=6))
    def test_uniform_identity_for_any_reward(self, reward, k):
        obs = Observation(np.zeros(2), action=k, reward=reward)
        assert value_loss(uniform_policy(k), obs, k) == pytest.approx(-reward)


class TestPolicyValue:
    def test_uniform_value_on_quadrant_preset(self):
        oracle = quadrature_uniform_value_env1()
        assert oracle == pytest.approx(0.44375, abs=1e-15)
        env = make_env1()
        est = policy_value(uniform_policy(env.k), env, m=40000, rng=np.random.default_rng(123))
        assert est.value == pytest.approx(0.44375, abs=4 * est.stderr)
        assert est.stderr < 0.002
        assert est.samples == 40000

    def test_risk_is_negated_value(self):
        env = make_env1()
        rng_v = np.random.default_rng(5)
        rng_r = np.random.default_rng(5)
        val = policy_value(uniform_policy(env.k), env, m=500, rng=rng_v)
        risk = policy_risk(uniform_policy(env.k), env, m=500, rng=rng_r)
        assert risk.value == pytest.approx(-val.value)
        assert risk.value == pytest.approx(-0.44375, abs=0.02)

    def test_rejects_nonpositive_sample_count(self):
        with pytest.raises(ValueError):
            policy_value(uniform_policy(2), make_env1(), m=0, rng=np.random.default_rng(0))
