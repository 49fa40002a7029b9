"""The trajectory mapping: concepts are finite trajectories.

Acceptability of a trajectory is its probability conditioned on the start
state: the product of ``pi(a|s) * T_a(s, s')`` over its steps, 1 for the
empty trajectory. Evaluation is the normalized value estimate of the final
state (the start state for the empty trajectory). Traversal appends one
(action, next_state) step, so concepts grow without bound; enumeration and
reachability are bounded by an explicit horizon.

The domain enumerates every index-valid trajectory up to the horizon,
including zero-probability ones: the sub-universe is all finite tuples, not
just the supported ones. Support propagation, by contrast, only follows
positive-probability extensions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..csf import (
    ConceptDomain,
    EcsInstance,
    TrajectoryConcept,
    TransformationKind,
    UninspirationFlags,
    strong_alpha_cut,
)
from ..mdp import StochasticPolicy, TabularMdp, Trajectory, ValueEstimate, sample_step
from ..normalize import MinMax, NormalizationTag, normalize

# Enumerating tuples(S x A) up to a horizon is geometric in the horizon;
# refuse rather than hang when the candidate count explodes.
MAX_TRAJECTORY_CANDIDATES = 1_000_000


@dataclass(frozen=True)
class TrajectoryMappingConfig:
    alpha: float
    beta: float
    horizon: int
    normalization: NormalizationTag = MinMax()

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")
        if self.horizon is None:
            raise ValueError("horizon required: the trajectory domain is unbounded")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")


def trajectory_probability(mdp: TabularMdp, policy: StochasticPolicy, traj: Trajectory) -> float:
    """Occurrence probability of the trajectory given its start state."""
    p = 1.0
    state = traj.start
    if not 0 <= state < mdp.n_states:
        raise IndexError(f"state index {state} out of range")
    for action, next_state in traj.steps:
        if not 0 <= action < mdp.n_actions:
            raise IndexError(f"action index {action} out of range")
        if not 0 <= next_state < mdp.n_states:
            raise IndexError(f"state index {next_state} out of range")
        p *= float(policy.action_dist[state, action]) * float(
            mdp.transition[action, state, next_state]
        )
        state = next_state
    return p


def trajectory_probability_factors(
    mdp: TabularMdp, policy: StochasticPolicy, traj: Trajectory
) -> tuple[float, float]:
    """Split the trajectory probability into (policy, transition) factors.

    The product of the two factors equals the trajectory probability; a low
    value can then be attributed to an improbable action choice, an
    improbable environment transition, or both.
    """
    p_policy = 1.0
    p_transition = 1.0
    state = traj.start
    for action, next_state in traj.steps:
        p_policy *= float(policy.action_dist[state, action])
        p_transition *= float(mdp.transition[action, state, next_state])
        state = next_state
    return p_policy, p_transition


def candidate_count(mdp: TabularMdp, horizon: int) -> int:
    """Number of index-valid trajectories of length <= horizon per start."""
    branch = mdp.n_states * mdp.n_actions
    return sum(branch**k for k in range(horizon + 1))


def enumerate_bounded_trajectories(mdp: TabularMdp, start: int, horizon: int):
    """Yield every index-valid trajectory from ``start`` with length <= horizon.

    Order: ascending length, then lexicographic in (action, next_state)
    indices. Zero-probability trajectories are included.
    """
    if not 0 <= start < mdp.n_states:
        raise IndexError(f"start state index {start} out of range")
    if candidate_count(mdp, horizon) > MAX_TRAJECTORY_CANDIDATES:
        raise ValueError(
            f"trajectory domain exceeds {MAX_TRAJECTORY_CANDIDATES} candidates; "
            "lower the horizon"
        )
    step_space = [
        (a, s) for a in range(mdp.n_actions) for s in range(mdp.n_states)
    ]
    for length in range(horizon + 1):
        for seq in itertools.product(step_space, repeat=length):
            yield Trajectory(start, seq)


def build_trajectory_ecs(
    mdp: TabularMdp,
    policy: StochasticPolicy,
    values: ValueEstimate,
    cfg: TrajectoryMappingConfig,
    starts: tuple[int, ...],
) -> EcsInstance:
    """Instantiate the trajectory mapping for declared start states."""
    if policy.action_dist.shape != (mdp.n_states, mdp.n_actions):
        raise ValueError("policy shape does not match MDP")
    if values.value.shape != (mdp.n_states,):
        raise ValueError("value estimate indexing does not match MDP")
    if not starts:
        raise ValueError("at least one start state required")
    for s in starts:
        if not 0 <= s < mdp.n_states:
            raise IndexError(f"start state index {s} out of range")
    normalized = normalize(values.value, cfg.normalization)
    occurrence = policy.action_dist[:, :, None] * np.transpose(mdp.transition, (1, 0, 2))

    def enumerate_domain():
        for s in starts:
            for traj in enumerate_bounded_trajectories(mdp, s, cfg.horizon):
                yield TrajectoryConcept(traj)

    def acceptability(c) -> float:
        return trajectory_probability(mdp, policy, c.trajectory)

    def evaluation(c) -> float:
        return float(normalized[c.trajectory.last_state])

    def support(c) -> frozenset:
        last = c.trajectory.last_state
        return frozenset(
            TrajectoryConcept(c.trajectory.extend(int(a), int(s2)))
            for a, s2 in zip(*np.nonzero(occurrence[last]))
        )

    def traversal(_n, _v, concepts, rng):
        out = []
        for c in concepts:
            a, s2, _ = sample_step(mdp, policy, c.trajectory.last_state, rng)
            out.append(TrajectoryConcept(c.trajectory.extend(a, s2)))
        return tuple(out)

    domain = ConceptDomain(
        variant="trajectory",
        concepts=enumerate_domain,
        covers_evaluation=True,  # every state occurs as a final state within the bound
        growing=True,
        horizon=cfg.horizon,
    )
    return EcsInstance(
        domain=domain,
        acceptability=acceptability,
        evaluation=evaluation,
        traversal=traversal,
        support=support,
        alpha=cfg.alpha,
        beta=cfg.beta,
        resolve_empty=lambda: tuple(TrajectoryConcept(Trajectory(s)) for s in starts),
    )


def initial_trajectory_concepts(
    mdp: TabularMdp, starts: tuple[int, ...]
) -> tuple[TrajectoryConcept, ...]:
    """Blank-canvas seeds: the empty trajectory at each start state."""
    for s in starts:
        if not 0 <= s < mdp.n_states:
            raise IndexError(f"start state index {s} out of range")
    return tuple(TrajectoryConcept(Trajectory(s)) for s in starts)


def trajectory_transformation_kind(
    mdp: TabularMdp,
    old: StochasticPolicy,
    new: StochasticPolicy,
    values: ValueEstimate,
    cfg: TrajectoryMappingConfig,
    starts: tuple[int, ...],
) -> TransformationKind:
    """none if policies are identical; N-and-Q exactly when the horizon-bounded
    trajectory alpha-cuts differ; otherwise Q-only."""
    if old.action_dist.shape != new.action_dist.shape:
        raise ValueError("policies have different shapes")
    if np.array_equal(old.action_dist, new.action_dist):
        return TransformationKind.NONE
    old_ecs = build_trajectory_ecs(mdp, old, values, cfg, starts)
    new_ecs = build_trajectory_ecs(mdp, new, values, cfg, starts)
    old_cut = strong_alpha_cut(old_ecs.acceptability, old_ecs.domain.concepts(), cfg.alpha)
    new_cut = strong_alpha_cut(new_ecs.acceptability, new_ecs.domain.concepts(), cfg.alpha)
    if old_cut != new_cut:
        return TransformationKind.N_AND_Q
    return TransformationKind.Q_ONLY


def trajectory_uninspiration(
    mdp: TabularMdp,
    policy: StochasticPolicy,
    values: ValueEstimate,
    cfg: TrajectoryMappingConfig,
    starts: tuple[int, ...],
) -> UninspirationFlags:
    """Uninspiration diagnosis specialized to trajectories.

    Generative: no trajectory supported by the policy within the horizon ends
    in a state valued past beta. Conceptual: no trajectory in the alpha-cut
    does. Hopeless: no state at all is valued past beta; because evaluation
    depends only on the final state, this finite check covers the unbounded
    trajectory sub-universe.
    """
    from ..csf import classify_uninspiration

    ecs = build_trajectory_ecs(mdp, policy, values, cfg, starts)
    flags = classify_uninspiration(
        ecs, initial_trajectory_concepts(mdp, starts), cfg.horizon
    )
    normalized = normalize(values.value, cfg.normalization)
    hopeless = not np.any(normalized > cfg.beta)
    return UninspirationFlags(flags.generative, flags.conceptual, bool(hopeless))
