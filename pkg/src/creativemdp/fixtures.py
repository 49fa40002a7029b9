"""Canonical and randomized MDP fixtures.

CHAIN2 is the two-state reference problem used throughout the docs and tests:
from ``s0``, action ``a0`` mostly stays put while ``a1`` mostly moves to the
absorbing state ``s1``; every arrival in ``s1`` pays reward 1.
"""

from __future__ import annotations

import numpy as np

from .mdp import StochasticPolicy, TabularMdp, ValueEstimate


def chain2() -> TabularMdp:
    """The CHAIN2 fixture: states (s0, s1), actions (a0, a1), absorbing s1."""
    transition = np.array(
        [
            [[0.9, 0.1], [0.0, 1.0]],  # a0
            [[0.2, 0.8], [0.0, 1.0]],  # a1
        ]
    )
    reward = np.zeros((2, 2, 2))
    reward[:, :, 1] = 1.0
    return TabularMdp(("s0", "s1"), ("a0", "a1"), transition, reward)


def chain2_reference_policy() -> StochasticPolicy:
    """The reference policy: (a0: 0.25, a1: 0.75) at s0, pure a0 at s1."""
    return StochasticPolicy(np.array([[0.25, 0.75], [1.0, 0.0]]))


def chain2_values() -> ValueEstimate:
    """A simple estimate that prefers the rewarded absorbing state."""
    return ValueEstimate(np.array([0.0, 10.0]))


def deterministic_policy(mdp: TabularMdp, action: str | int) -> StochasticPolicy:
    """Policy that plays one fixed action in every state."""
    ai = mdp.action_index(action) if isinstance(action, str) else action
    dist = np.zeros((mdp.n_states, mdp.n_actions))
    dist[:, ai] = 1.0
    return StochasticPolicy(dist)


def uniform_policy(mdp: TabularMdp) -> StochasticPolicy:
    return StochasticPolicy(np.full((mdp.n_states, mdp.n_actions), 1.0 / mdp.n_actions))


def random_mdp(
    rng: np.random.Generator,
    n_states: int,
    n_actions: int,
    sparse: bool = True,
    reward_scale: float = 1.0,
) -> TabularMdp:
    """Draw a random valid MDP; with ``sparse`` some transitions get zero mass.

    Sparsity matters for exercising support propagation: fully dense chains
    make every concept reachable, which hides reachability bugs.
    """
    states = tuple(f"s{i}" for i in range(n_states))
    actions = tuple(f"a{i}" for i in range(n_actions))
    transition = rng.random((n_actions, n_states, n_states))
    if sparse and n_states > 1:
        mask = rng.random(transition.shape) < 0.4
        transition = np.where(mask, 0.0, transition)
    # Guarantee at least one positive entry per row before normalizing.
    for ai in range(n_actions):
        for si in range(n_states):
            if transition[ai, si].sum() == 0:
                transition[ai, si, rng.integers(n_states)] = 1.0
    transition /= transition.sum(axis=-1, keepdims=True)
    reward = rng.uniform(-reward_scale, reward_scale, (n_states, n_actions, n_states))
    return TabularMdp(states, actions, transition, reward)


def random_policy(
    rng: np.random.Generator, mdp: TabularMdp, sparse: bool = True
) -> StochasticPolicy:
    dist = rng.random((mdp.n_states, mdp.n_actions))
    if sparse and mdp.n_actions > 1:
        mask = rng.random(dist.shape) < 0.3
        dist = np.where(mask, 0.0, dist)
    for si in range(mdp.n_states):
        if dist[si].sum() == 0:
            dist[si, rng.integers(mdp.n_actions)] = 1.0
    dist /= dist.sum(axis=-1, keepdims=True)
    return StochasticPolicy(dist)


def random_values(rng: np.random.Generator, mdp: TabularMdp, scale: float = 1.0) -> ValueEstimate:
    return ValueEstimate(rng.uniform(-scale, scale, mdp.n_states))
