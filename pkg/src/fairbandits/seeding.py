"""Deterministic RNG stream derivation for simulations.

Every run uses three independent generators derived from (base_seed, run_id):

* ``MASTER_STREAM`` — the master's explore coin and uniform learner draw
* ``ACTION_STREAM`` — one uniform per round to sample an action from a policy
* ``ENV_STREAM``    — context draws and one reward variate per round

Master and standalone simulations of the same run share the action/env streams
(fresh generator instances, identical consumption pattern), which yields common
random numbers across compared policies and makes a single-learner master
reproduce its standalone run exactly.
"""

from __future__ import annotations

import numpy as np

MASTER_STREAM = 0
ACTION_STREAM = 1
ENV_STREAM = 2


def stream_rng(base_seed: int, run_id: int, stream: int) -> np.random.Generator:
    """Generator for one (run, stream) pair; stable across processes."""
    seq = np.random.SeedSequence(entropy=base_seed, spawn_key=(run_id, stream))
    return np.random.default_rng(seq)


def run_streams(base_seed: int, run_id: int) -> tuple[np.random.Generator, np.random.Generator, np.random.Generator]:
    """(master, action, env) generators for one run."""
    return (
        stream_rng(base_seed, run_id, MASTER_STREAM),
        stream_rng(base_seed, run_id, ACTION_STREAM),
        stream_rng(base_seed, run_id, ENV_STREAM),
    )
