"""Solvers that produce evolving policies for creativity analysis.

Two algorithms: exact value iteration (for ground-truth optimal policies and
synthetic snapshot sequences) and tabular TD control with an epsilon-greedy
behavior policy (for sampled runs). Returns are discounted sums of rewards;
analysis elsewhere is agnostic to this choice.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .mdp import StochasticPolicy, TabularMdp, ValueEstimate, sample_step
from .run import ExperienceStep, PolicySnapshot, RunRecord


@dataclass(frozen=True)
class LearnerConfig:
    algorithm: str = "tabular_td"  # "tabular_td" | "value_iteration"
    gamma: float = 0.9
    tolerance: float = 1e-8
    episodes: int = 500
    steps_per_episode: int = 20
    epsilon: float = 0.1
    learning_rate: float = 0.1
    snapshot_every: int = 50  # episodes between snapshots
    seed: int = 0
    max_iterations: int = 10_000

    def __post_init__(self):
        if self.algorithm not in ("tabular_td", "value_iteration"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must be in [0, 1), got {self.gamma}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in [0, 1], got {self.epsilon}")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError(f"learning_rate must be in (0, 1], got {self.learning_rate}")
        if self.episodes < 0 or self.steps_per_episode < 1:
            raise ValueError("episodes must be >= 0 and steps_per_episode >= 1")
        if self.snapshot_every < 1:
            raise ValueError("snapshot_every must be >= 1")


def _expected_q(mdp: TabularMdp, gamma: float, v: np.ndarray) -> np.ndarray:
    # Q[s, a] = sum_s' T_a(s, s') * (R(s, a, s') + gamma * V(s'))
    t_sas = np.transpose(mdp.transition, (1, 0, 2))
    return np.einsum("sat,sat->sa", t_sas, mdp.reward_mean + gamma * v[None, None, :])


def greedy_policy(q: np.ndarray) -> StochasticPolicy:
    """Deterministic greedy policy with lowest-index tie breaking."""
    n_states, n_actions = q.shape
    dist = np.zeros((n_states, n_actions))
    dist[np.arange(n_states), np.argmax(q, axis=1)] = 1.0
    return StochasticPolicy(dist)


def epsilon_greedy_policy(q: np.ndarray, epsilon: float) -> StochasticPolicy:
    """Greedy with probability 1 - epsilon, uniform otherwise."""
    n_states, n_actions = q.shape
    dist = np.full((n_states, n_actions), epsilon / n_actions)
    dist[np.arange(n_states), np.argmax(q, axis=1)] += 1.0 - epsilon
    return StochasticPolicy(dist)


def value_iteration(
    mdp: TabularMdp, cfg: LearnerConfig
) -> tuple[ValueEstimate, StochasticPolicy, int]:
    """Solve the MDP to within the configured sup-norm Bellman residual.

    Returns (optimal value estimate, deterministic greedy policy, iteration
    count). Raises RuntimeError if the residual does not drop below tolerance
    within ``max_iterations`` sweeps.
    """
    v = np.zeros(mdp.n_states)
    for iteration in range(1, cfg.max_iterations + 1):
        q = _expected_q(mdp, cfg.gamma, v)
        v_new = q.max(axis=1)
        residual = float(np.max(np.abs(v_new - v)))
        v = v_new
        if residual < cfg.tolerance:
            return ValueEstimate(v), greedy_policy(q), iteration
    raise RuntimeError(
        f"value iteration did not converge within {cfg.max_iterations} iterations"
    )


def value_iteration_run(
    mdp: TabularMdp, cfg: LearnerConfig, start_states: tuple[int, ...] | None = None
) -> RunRecord:
    """Record value-iteration sweeps as a run: uniform start, greedy snapshots.

    Useful for analyzing how successive policy improvements transform the
    conceptual space; the experience list is empty since nothing is sampled.
    """
    starts = tuple(range(mdp.n_states)) if start_states is None else tuple(start_states)
    uniform = StochasticPolicy(
        np.full((mdp.n_states, mdp.n_actions), 1.0 / mdp.n_actions)
    )
    snapshots = [PolicySnapshot(0, uniform, ValueEstimate(np.zeros(mdp.n_states)))]
    v = np.zeros(mdp.n_states)
    for iteration in range(1, cfg.max_iterations + 1):
        q = _expected_q(mdp, cfg.gamma, v)
        v_new = q.max(axis=1)
        residual = float(np.max(np.abs(v_new - v)))
        v = v_new
        snapshot = PolicySnapshot(iteration, greedy_policy(q), ValueEstimate(v))
        # Only record sweeps that changed the policy or finished the solve,
        # to keep run files proportional to interesting events.
        if snapshot.policy != snapshots[-1].policy or residual < cfg.tolerance:
            snapshots.append(snapshot)
        if residual < cfg.tolerance:
            break
    else:
        raise RuntimeError(
            f"value iteration did not converge within {cfg.max_iterations} iterations"
        )
    return RunRecord(
        mdp=mdp,
        start_states=starts,
        snapshots=tuple(snapshots),
        experience=(),
        learner={"config": {**asdict(cfg), "algorithm": "value_iteration"}},
    )


def td_learn(
    mdp: TabularMdp, cfg: LearnerConfig, start_states: tuple[int, ...] | None = None
) -> RunRecord:
    """Tabular TD control (Q-learning) with an epsilon-greedy behavior policy.

    Episodes start round-robin from ``start_states`` (default: every state)
    and last ``steps_per_episode`` steps; there are no terminal states in
    this formulation. Snapshots capture the epsilon-greedy policy and the
    state values implied by the running action-value table, every
    ``snapshot_every`` episodes plus once before and once after learning.
    The record is a pure function of (mdp, cfg, start_states).
    """
    rng = np.random.default_rng(cfg.seed)
    starts = tuple(range(mdp.n_states)) if start_states is None else tuple(start_states)
    if not starts:
        raise ValueError("at least one start state required")
    q = np.zeros((mdp.n_states, mdp.n_actions))

    def snapshot(step: int) -> PolicySnapshot:
        return PolicySnapshot(
            step=step,
            policy=epsilon_greedy_policy(q, cfg.epsilon),
            values=ValueEstimate(q.max(axis=1)),
        )

    snapshots = [snapshot(0)]
    experience: list[ExperienceStep] = []
    step = 0
    for episode in range(cfg.episodes):
        state = starts[episode % len(starts)]
        for _ in range(cfg.steps_per_episode):
            behavior = epsilon_greedy_policy(q, cfg.epsilon)
            action, next_state, reward = sample_step(mdp, behavior, state, rng)
            target = reward + cfg.gamma * float(q[next_state].max())
            q[state, action] += cfg.learning_rate * (target - float(q[state, action]))
            experience.append(
                ExperienceStep(
                    episode=episode,
                    step=step,
                    snapshot=len(snapshots) - 1,
                    state=state,
                    action=action,
                    next_state=next_state,
                    reward=reward,
                )
            )
            step += 1
            state = next_state
        if (episode + 1) % cfg.snapshot_every == 0 and episode + 1 < cfg.episodes:
            snapshots.append(snapshot(step))
    if cfg.episodes > 0:
        snapshots.append(snapshot(step))
    return RunRecord(
        mdp=mdp,
        start_states=starts,
        snapshots=tuple(snapshots),
        experience=tuple(experience),
        learner={"config": {**asdict(cfg), "algorithm": "tabular_td"}},
    )
