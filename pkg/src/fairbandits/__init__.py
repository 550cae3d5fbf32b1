"""Fair-comparison model selection over black-box contextual-bandit learners.

A master algorithm forces a slowly decaying amount of uniform exploration over
an ensemble of base learners and, on exploiting rounds, picks the learner whose
penalized risk estimate — evaluated for every learner at the same comparison
sample size — is smallest. The package bundles the master, three base
learners, two synthetic environments, a deterministic Monte-Carlo replication
harness with CSV output, and rate/selection diagnostics, all driven by the
``fairbandits`` command-line tool.
"""

from .core import (
    GreedyScorePolicy,
    Observation,
    Policy,
    StaticPolicy,
    ValueEstimate,
    policy_risk,
    policy_value,
    reference_policy_prob,
    uniform_policy,
    value_loss,
)
from .environments import (
    Environment,
    LinearGaussianEnv,
    OptimalValueInfo,
    QuadrantBernoulliEnv,
    make_env1,
    make_env2,
    make_environment,
)
from .harness import EnvSpec, ExperimentConfig, LearnerSpec, ReplicateResult, replicate, run_one
from .learners import BanditLearner, EpsGreedyLearner, LinUcbLearner, Ucb1Learner, make_learner
from .master import (
    FairComparisonMaster,
    MasterConfig,
    RoundDecision,
    expected_exploration_count,
    exploration_probability,
    select_candidate,
)
from .simulate import RunTrace, run_master, run_standalone

__version__ = "0.1.0"

__all__ = [
    "BanditLearner",
    "EnvSpec",
    "Environment",
    "EpsGreedyLearner",
    "ExperimentConfig",
    "FairComparisonMaster",
    "GreedyScorePolicy",
    "LearnerSpec",
    "LinUcbLearner",
    "LinearGaussianEnv",
    "MasterConfig",
    "Observation",
    "OptimalValueInfo",
    "Policy",
    "QuadrantBernoulliEnv",
    "ReplicateResult",
    "RoundDecision",
    "RunTrace",
    "StaticPolicy",
    "Ucb1Learner",
    "ValueEstimate",
    "expected_exploration_count",
    "exploration_probability",
    "make_env1",
    "make_env2",
    "make_environment",
    "make_learner",
    "policy_risk",
    "policy_value",
    "reference_policy_prob",
    "replicate",
    "run_master",
    "run_one",
    "run_standalone",
    "select_candidate",
    "uniform_policy",
    "value_loss",
]
