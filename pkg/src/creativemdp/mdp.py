"""Finite discrete-time tabular MDPs: representation, validation, sampling.

States and actions carry string labels externally and dense integer indices
internally. The transition tensor is indexed ``[action][state][next_state]``
(one transition matrix per action); expected rewards are indexed
``[state][action][next_state]``. Rewards are modeled as a mean plus optional
Gaussian noise; sampling uses the noise, analysis always uses the mean.

All types are immutable after construction and safe to share across threads.
Random sources are caller-owned ``numpy.random.Generator`` instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ROW_SUM_TOL = 1e-9


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _renormalize_rows(arr: np.ndarray) -> np.ndarray:
    """Divide rows by their sum when the sum is within ROW_SUM_TOL of 1.

    Rows outside tolerance are left untouched so that validation can report
    them; rows inside tolerance become exact distributions, which keeps
    text-format round trips stable.
    """
    sums = arr.sum(axis=-1, keepdims=True)
    near = np.abs(sums - 1.0) <= ROW_SUM_TOL
    return np.where(near & (sums != 0), arr / np.where(sums == 0, 1.0, sums), arr)


@dataclass(frozen=True, eq=False)
class TabularMdp:
    """A finite MDP with labeled states/actions and dense probability tensors.

    Attributes:
        states: ordered state labels, size >= 1.
        actions: ordered action labels, size >= 1.
        transition: float tensor [action, state, next_state]; each row a
            probability distribution over next states.
        reward_mean: float tensor [state, action, next_state] of expected
            rewards.
        reward_noise: optional tensor of per-entry standard deviations with
            the same shape as reward_mean.
    """

    states: tuple[str, ...]
    actions: tuple[str, ...]
    transition: np.ndarray
    reward_mean: np.ndarray
    reward_noise: np.ndarray | None = None
    _state_index: dict[str, int] = field(init=False, repr=False)
    _action_index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        states = tuple(str(s) for s in self.states)
        actions = tuple(str(a) for a in self.actions)
        if not states or not actions:
            raise ValueError("states and actions must be non-empty")
        if len(set(states)) != len(states) or len(set(actions)) != len(actions):
            raise ValueError("state and action labels must be unique")
        ns, na = len(states), len(actions)
        transition = np.array(self.transition, dtype=float)
        reward = np.array(self.reward_mean, dtype=float)
        if transition.shape != (na, ns, ns):
            raise ValueError(
                f"transition shape {transition.shape} != (|A|, |S|, |S|) = {(na, ns, ns)}"
            )
        if reward.shape != (ns, na, ns):
            raise ValueError(
                f"reward_mean shape {reward.shape} != (|S|, |A|, |S|) = {(ns, na, ns)}"
            )
        noise = self.reward_noise
        if noise is not None:
            noise = np.array(noise, dtype=float)
            if noise.shape != reward.shape:
                raise ValueError(
                    f"reward_noise shape {noise.shape} != reward_mean shape {reward.shape}"
                )
            noise = _freeze(noise)
        transition = _freeze(_renormalize_rows(transition))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "transition", transition)
        object.__setattr__(self, "reward_mean", _freeze(reward))
        object.__setattr__(self, "reward_noise", noise)
        object.__setattr__(self, "_state_index", {s: i for i, s in enumerate(states)})
        object.__setattr__(self, "_action_index", {a: i for i, a in enumerate(actions)})

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    def state_index(self, label: str) -> int:
        try:
            return self._state_index[label]
        except KeyError:
            raise KeyError(f"unknown state label {label!r}") from None

    def action_index(self, label: str) -> int:
        try:
            return self._action_index[label]
        except KeyError:
            raise KeyError(f"unknown action label {label!r}") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, TabularMdp):
            return NotImplemented
        noise_eq = (self.reward_noise is None) == (other.reward_noise is None) and (
            self.reward_noise is None
            or np.array_equal(self.reward_noise, other.reward_noise)
        )
        return (
            self.states == other.states
            and self.actions == other.actions
            and np.array_equal(self.transition, other.transition)
            and np.array_equal(self.reward_mean, other.reward_mean)
            and noise_eq
        )

    __hash__ = None  # mutable-array payload; identity hashing would mislead

    def to_dict(self) -> dict:
        d = {
            "states": list(self.states),
            "actions": list(self.actions),
            "transitions": {
                a: {
                    s: [float(p) for p in self.transition[ai, si]]
                    for si, s in enumerate(self.states)
                }
                for ai, a in enumerate(self.actions)
            },
            "rewards": {
                s: {
                    a: [float(r) for r in self.reward_mean[si, ai]]
                    for ai, a in enumerate(self.actions)
                }
                for si, s in enumerate(self.states)
            },
        }
        if self.reward_noise is not None:
            d["reward_noise"] = {
                s: {
                    a: [float(r) for r in self.reward_noise[si, ai]]
                    for ai, a in enumerate(self.actions)
                }
                for si, s in enumerate(self.states)
            }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TabularMdp":
        try:
            states = [str(s) for s in d["states"]]
            actions = [str(a) for a in d["actions"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"MDP description missing key: {exc}") from None
        ns, na = len(states), len(actions)
        if ns == 0 or na == 0:
            raise ValueError("states and actions must be non-empty")

        def rows(table: dict, outer: list[str], inner: list[str], kind: str) -> np.ndarray:
            out = np.zeros((len(outer), len(inner), ns))
            for i, o in enumerate(outer):
                if o not in table:
                    raise ValueError(f"{kind} missing entry for {o!r}")
                for j, k in enumerate(inner):
                    if k not in table[o]:
                        raise ValueError(f"{kind}[{o!r}] missing entry for {k!r}")
                    row = table[o][k]
                    if len(row) != ns:
                        raise ValueError(
                            f"{kind}[{o!r}][{k!r}] has {len(row)} entries, expected {ns}"
                        )
                    out[i, j] = row
            return out

        for key in ("transitions", "rewards"):
            if key not in d:
                raise ValueError(f"MDP description missing key: '{key}'")
        transition = rows(d["transitions"], actions, states, "transitions")
        reward = rows(d["rewards"], states, actions, "rewards")
        noise = None
        if d.get("reward_noise") is not None:
            noise = rows(d["reward_noise"], states, actions, "reward_noise")
        return cls(tuple(states), tuple(actions), transition, reward, noise)


@dataclass(frozen=True, eq=False)
class StochasticPolicy:
    """Per-state action distribution, indexed [state, action]."""

    action_dist: np.ndarray

    def __post_init__(self):
        dist = np.array(self.action_dist, dtype=float)
        if dist.ndim != 2:
            raise ValueError(f"policy must be 2-D [state, action], got shape {dist.shape}")
        object.__setattr__(self, "action_dist", _freeze(_renormalize_rows(dist)))

    @property
    def n_states(self) -> int:
        return self.action_dist.shape[0]

    @property
    def n_actions(self) -> int:
        return self.action_dist.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, StochasticPolicy):
            return NotImplemented
        return np.array_equal(self.action_dist, other.action_dist)

    __hash__ = None

    def to_dict(self, mdp: TabularMdp) -> dict:
        return {
            "policy": {
                s: [float(p) for p in self.action_dist[si]]
                for si, s in enumerate(mdp.states)
            }
        }

    @classmethod
    def from_dict(cls, d: dict, mdp: TabularMdp) -> "StochasticPolicy":
        if "policy" not in d:
            raise ValueError("policy description missing key: 'policy'")
        table = d["policy"]
        dist = np.zeros((mdp.n_states, mdp.n_actions))
        for si, s in enumerate(mdp.states):
            if s not in table:
                raise ValueError(f"policy missing entry for state {s!r}")
            row = table[s]
            if len(row) != mdp.n_actions:
                raise ValueError(
                    f"policy[{s!r}] has {len(row)} entries, expected {mdp.n_actions}"
                )
            dist[si] = row
        return cls(dist)


@dataclass(frozen=True, eq=False)
class ValueEstimate:
    """Per-state scalar value estimate. Entries must be finite."""

    value: np.ndarray

    def __post_init__(self):
        v = np.array(self.value, dtype=float)
        if v.ndim != 1:
            raise ValueError(f"value estimate must be 1-D, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("value estimate entries must be finite")
        object.__setattr__(self, "value", _freeze(v))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ValueEstimate):
            return NotImplemented
        return np.array_equal(self.value, other.value)

    __hash__ = None

    def to_dict(self, mdp: TabularMdp) -> dict:
        return {"values": {s: float(self.value[si]) for si, s in enumerate(mdp.states)}}

    @classmethod
    def from_dict(cls, d: dict, mdp: TabularMdp) -> "ValueEstimate":
        if "values" not in d:
            raise ValueError("value description missing key: 'values'")
        table = d["values"]
        v = np.zeros(mdp.n_states)
        for si, s in enumerate(mdp.states):
            if s not in table:
                raise ValueError(f"values missing entry for state {s!r}")
            v[si] = table[s]
        return cls(v)


@dataclass(frozen=True)
class Trajectory:
    """A finite path: a start state plus (action, next_state) steps.

    Length 0 is the empty trajectory, the blank-canvas concept of the
    trajectory mapping.
    """

    start: int
    steps: tuple[tuple[int, int], ...] = ()

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def last_state(self) -> int:
        return self.steps[-1][1] if self.steps else self.start

    def extend(self, action: int, next_state: int) -> "Trajectory":
        return Trajectory(self.start, self.steps + ((action, next_state),))

    def visited_states(self) -> tuple[int, ...]:
        return (self.start,) + tuple(s for _, s in self.steps)

    def label(self, mdp: TabularMdp) -> str:
        parts = [mdp.states[self.start]]
        for a, s in self.steps:
            parts.append(mdp.actions[a])
            parts.append(mdp.states[s])
        return "/".join(parts)


def validate_mdp(mdp: TabularMdp) -> list[str]:
    """Check every MDP invariant; return a list of violations (empty = ok).

    Violations are data, not faults: each message names the offending index
    by label.
    """
    violations = []
    for ai, a in enumerate(mdp.actions):
        for si, s in enumerate(mdp.states):
            row = mdp.transition[ai, si]
            total = float(row.sum())
            if abs(total - 1.0) > ROW_SUM_TOL:
                violations.append(f"transition row ({a},{s}) sums to {total:.6g}")
            for sj, s2 in enumerate(mdp.states):
                p = float(row[sj])
                if p < 0:
                    violations.append(
                        f"negative probability {p:.6g} at transition[{a}][{s}][{s2}]"
                    )
                elif p > 1:
                    violations.append(
                        f"probability {p:.6g} > 1 at transition[{a}][{s}][{s2}]"
                    )
    if not np.all(np.isfinite(mdp.reward_mean)):
        for si, s in enumerate(mdp.states):
            for ai, a in enumerate(mdp.actions):
                for sj, s2 in enumerate(mdp.states):
                    if not np.isfinite(mdp.reward_mean[si, ai, sj]):
                        violations.append(f"non-finite reward at rewards[{s}][{a}][{s2}]")
    if mdp.reward_noise is not None:
        for si, s in enumerate(mdp.states):
            for ai, a in enumerate(mdp.actions):
                for sj, s2 in enumerate(mdp.states):
                    sd = float(mdp.reward_noise[si, ai, sj])
                    if not (sd >= 0) or not np.isfinite(sd):
                        violations.append(
                            f"negative or non-finite reward_noise at [{s}][{a}][{s2}]"
                        )
    return violations


def validate_policy(policy: StochasticPolicy, mdp: TabularMdp) -> list[str]:
    """Check policy invariants against an MDP; return violations (empty = ok)."""
    violations = []
    if policy.action_dist.shape != (mdp.n_states, mdp.n_actions):
        return [
            f"policy shape {policy.action_dist.shape} != "
            f"(|S|, |A|) = {(mdp.n_states, mdp.n_actions)}"
        ]
    for si, s in enumerate(mdp.states):
        row = policy.action_dist[si]
        total = float(row.sum())
        if abs(total - 1.0) > ROW_SUM_TOL:
            violations.append(f"policy row ({s}) sums to {total:.6g}")
        for ai, a in enumerate(mdp.actions):
            p = float(row[ai])
            if p < 0:
                violations.append(f"negative probability {p:.6g} at policy[{s}][{a}]")
            elif p > 1:
                violations.append(f"probability {p:.6g} > 1 at policy[{s}][{a}]")
    return violations


def validate_values(values: ValueEstimate, mdp: TabularMdp) -> list[str]:
    if values.value.shape != (mdp.n_states,):
        return [
            f"value estimate has {values.value.shape[0]} entries, "
            f"expected {mdp.n_states}"
        ]
    return []


def _sample_index(probs: np.ndarray, rng: np.random.Generator) -> int:
    # Inverse-CDF sampling; scaling by the row total tolerates 1e-9 drift.
    cum = np.cumsum(probs)
    u = rng.random() * cum[-1]
    return min(int(np.searchsorted(cum, u, side="right")), len(probs) - 1)


def sample_step(
    mdp: TabularMdp,
    policy: StochasticPolicy,
    state: int,
    rng: np.random.Generator,
) -> tuple[int, int, float]:
    """Sample one (action, next_state, reward) step from ``state``.

    Deterministic given the generator state. The reward is the expected
    reward plus Gaussian noise scaled by ``reward_noise`` when present; one
    normal draw is consumed per step whenever noise is configured.
    """
    if not 0 <= state < mdp.n_states:
        raise IndexError(f"state index {state} out of range [0, {mdp.n_states})")
    action = _sample_index(policy.action_dist[state], rng)
    next_state = _sample_index(mdp.transition[action, state], rng)
    reward = float(mdp.reward_mean[state, action, next_state])
    if mdp.reward_noise is not None:
        reward += float(mdp.reward_noise[state, action, next_state]) * rng.standard_normal()
    return action, next_state, reward


def rollout(
    mdp: TabularMdp,
    policy: StochasticPolicy,
    start: int,
    horizon: int,
    rng: np.random.Generator,
) -> Trajectory:
    """Sample a trajectory of exactly ``horizon`` steps starting at ``start``."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if not 0 <= start < mdp.n_states:
        raise IndexError(f"state index {start} out of range [0, {mdp.n_states})")
    traj = Trajectory(start)
    state = start
    for _ in range(horizon):
        action, state, _ = sample_step(mdp, policy, state, rng)
        traj = traj.extend(action, state)
    return traj
