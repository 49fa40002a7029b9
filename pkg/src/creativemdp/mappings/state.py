"""The state mapping: concepts are states.

Acceptability is the binary membership function of the state space, so the
conceptual space equals the state space whenever alpha < 1 and is empty at
alpha = 1. Evaluation is the normalized value estimate. Traversal is a
one-step policy rollout per input state. Aberrations cannot occur (everything
reachable is a state), and changing the policy is always a pure
Q-transformation: the conceptual space is out of the agent's hands.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..csf import ConceptDomain, EcsInstance, StateConcept, TransformationKind
from ..mdp import StochasticPolicy, TabularMdp, ValueEstimate, sample_step
from ..normalize import MinMax, NormalizationTag, normalize


@dataclass(frozen=True)
class StateMappingConfig:
    alpha: float
    beta: float
    normalization: NormalizationTag = MinMax()

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")


def build_state_ecs(
    mdp: TabularMdp,
    policy: StochasticPolicy,
    values: ValueEstimate,
    cfg: StateMappingConfig,
) -> EcsInstance:
    """Instantiate the state mapping for one MDP/policy/value triple."""
    if policy.action_dist.shape != (mdp.n_states, mdp.n_actions):
        raise ValueError("policy shape does not match MDP")
    if values.value.shape != (mdp.n_states,):
        raise ValueError("value estimate indexing does not match MDP")
    n = mdp.n_states
    normalized = normalize(values.value, cfg.normalization)
    # State occupancy one step after s: sum_a pi(a|s) T_a(s, .)
    step_dist = np.einsum("sa,ast->st", policy.action_dist, mdp.transition)

    def acceptability(c) -> float:
        if isinstance(c, StateConcept) and 0 <= c.state < n:
            return 1.0
        return 0.0

    def evaluation(c) -> float:
        return float(normalized[c.state])

    def support(c) -> frozenset:
        return frozenset(StateConcept(int(s2)) for s2 in np.nonzero(step_dist[c.state])[0])

    def traversal(_n, _v, concepts, rng):
        out = []
        for c in concepts:
            _, s2, _ = sample_step(mdp, policy, c.state, rng)
            out.append(StateConcept(s2))
        return tuple(out)

    domain = ConceptDomain(
        variant="state",
        concepts=lambda: (StateConcept(s) for s in range(n)),
        # The sub-universe is every conceivable state space, of which only
        # this MDP's states can be enumerated; hopeless stays indeterminate.
        covers_evaluation=False,
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


def initial_state_concepts(mdp: TabularMdp, starts: tuple[int, ...]) -> tuple[StateConcept, ...]:
    for s in starts:
        if not 0 <= s < mdp.n_states:
            raise IndexError(f"start state index {s} out of range")
    return tuple(StateConcept(s) for s in starts)


def state_transformation_kind(
    old: StochasticPolicy, new: StochasticPolicy
) -> TransformationKind:
    """Classify a policy change: identical -> none, otherwise Q-only.

    An acceptability transformation is structurally impossible here; the
    conceptual space is the state space, which the policy cannot touch.
    """
    if old.action_dist.shape != new.action_dist.shape:
        raise ValueError("policies have different shapes")
    if np.array_equal(old.action_dist, new.action_dist):
        return TransformationKind.NONE
    return TransformationKind.Q_ONLY
