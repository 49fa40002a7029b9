"""The transition mapping: concepts are (state, action, next_state) triples.

Acceptability of a triple is its occurrence probability under the policy,
``T_a(s, s') * pi(a|s)``; at any fixed state these probabilities form a
distribution over (action, next_state). Evaluation is the normalized expected
reward. Traversal advances a triple to the next triple out of its landing
state. Any policy change is a Q-transformation; it is additionally an
N-transformation when the alpha-cut of the occurrence probabilities changes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..csf import (
    ConceptDomain,
    EcsInstance,
    TransformationKind,
    TransitionConcept,
    transformation_valued,
)
from ..mdp import StochasticPolicy, TabularMdp, sample_step
from ..normalize import MinMax, NormalizationTag, normalize


@dataclass(frozen=True)
class TransitionMappingConfig:
    alpha: float
    beta: float
    normalization: NormalizationTag = MinMax()

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")


def transition_occurrence_probability(
    mdp: TabularMdp, policy: StochasticPolicy, state: int, action: int, next_state: int
) -> float:
    """Probability that the triple occurs out of ``state`` under the policy."""
    if not (0 <= state < mdp.n_states and 0 <= next_state < mdp.n_states):
        raise IndexError("state index out of range")
    if not 0 <= action < mdp.n_actions:
        raise IndexError("action index out of range")
    return float(mdp.transition[action, state, next_state] * policy.action_dist[state, action])


def _occurrence_tensor(mdp: TabularMdp, policy: StochasticPolicy) -> np.ndarray:
    # [state, action, next_state]
    return policy.action_dist[:, :, None] * np.transpose(mdp.transition, (1, 0, 2))


def build_transition_ecs(
    mdp: TabularMdp, policy: StochasticPolicy, cfg: TransitionMappingConfig
) -> EcsInstance:
    """Instantiate the transition mapping for one MDP/policy pair."""
    if policy.action_dist.shape != (mdp.n_states, mdp.n_actions):
        raise ValueError("policy shape does not match MDP")
    ns, na = mdp.n_states, mdp.n_actions
    occurrence = _occurrence_tensor(mdp, policy)
    normalized = normalize(mdp.reward_mean, cfg.normalization)

    def enumerate_domain():
        for s in range(ns):
            for a in range(na):
                for s2 in range(ns):
                    yield TransitionConcept(s, a, s2)

    def acceptability(c) -> float:
        return float(occurrence[c.state, c.action, c.next_state])

    def evaluation(c) -> float:
        return float(normalized[c.state, c.action, c.next_state])

    def support(c) -> frozenset:
        origin = c.next_state
        out = np.nonzero(occurrence[origin])
        return frozenset(
            TransitionConcept(origin, int(a), int(s2)) for a, s2 in zip(*out)
        )

    def traversal(_n, _v, concepts, rng):
        out = []
        for c in concepts:
            a, s2, _ = sample_step(mdp, policy, c.next_state, rng)
            out.append(TransitionConcept(c.next_state, a, s2))
        return tuple(out)

    domain = ConceptDomain(
        variant="transition",
        concepts=enumerate_domain,
        covers_evaluation=True,
    )
    return EcsInstance(
        domain=domain,
        acceptability=acceptability,
        evaluation=evaluation,
        traversal=traversal,
        support=support,
        alpha=cfg.alpha,
        beta=cfg.beta,
    )


def initial_transition_concepts(
    mdp: TabularMdp, policy: StochasticPolicy, starts: tuple[int, ...]
) -> tuple[TransitionConcept, ...]:
    """Seed concepts for reachability: supported first triples out of starts."""
    occurrence = _occurrence_tensor(mdp, policy)
    out = []
    for s in starts:
        if not 0 <= s < mdp.n_states:
            raise IndexError(f"start state index {s} out of range")
        for a, s2 in zip(*np.nonzero(occurrence[s])):
            out.append(TransitionConcept(s, int(a), int(s2)))
    return tuple(out)


def transition_transformation_kind(
    mdp: TabularMdp,
    old: StochasticPolicy,
    new: StochasticPolicy,
    cfg: TransitionMappingConfig,
) -> TransformationKind:
    """none if the policies are identical; N-and-Q exactly when the alpha-cut
    of occurrence probabilities changes; otherwise Q-only.

    An acceptability change forces a traversal change here (both live in the
    policy), so N-and-Q subsumes Q by construction.
    """
    if old.action_dist.shape != new.action_dist.shape:
        raise ValueError("policies have different shapes")
    if np.array_equal(old.action_dist, new.action_dist):
        return TransformationKind.NONE
    old_cut = _occurrence_tensor(mdp, old) > cfg.alpha
    new_cut = _occurrence_tensor(mdp, new) > cfg.alpha
    if not np.array_equal(old_cut, new_cut):
        return TransformationKind.N_AND_Q
    return TransformationKind.Q_ONLY


def transition_transformation_valued(
    mdp: TabularMdp,
    old: StochasticPolicy,
    new: StochasticPolicy,
    cfg: TransitionMappingConfig,
    initial: tuple[TransitionConcept, ...],
) -> bool:
    """Whether the policy change admits new triples valued past beta.

    Requires an actual transformation. Evaluation (normalized reward) does
    not depend on the policy, so it is automatically fixed across the
    comparison. The same initial concepts seed both reachability closures.
    """
    kind = transition_transformation_kind(mdp, old, new, cfg)
    if kind is TransformationKind.NONE:
        raise ValueError("policies are identical; no transformation to value")
    old_ecs = build_transition_ecs(mdp, old, cfg)
    new_ecs = build_transition_ecs(mdp, new, cfg)
    return transformation_valued(old_ecs, new_ecs, initial, initial)
