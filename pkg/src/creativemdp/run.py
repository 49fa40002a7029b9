"""Run records: the unit of analysis for learning agents.

A run pairs an MDP with an ordered sequence of policy snapshots (the agent's
traversal strategy as it evolves) and the sampled experience generated
between snapshots. Records serialize to versioned JSON and round-trip
exactly; float fidelity relies on repr-based JSON encoding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .mdp import StochasticPolicy, TabularMdp, ValueEstimate

RUN_SCHEMA = "creativemdp.run/1"


@dataclass(frozen=True)
class PolicySnapshot:
    """The agent's policy (and optional value estimate) at a global step."""

    step: int
    policy: StochasticPolicy
    values: ValueEstimate | None = None

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolicySnapshot):
            return NotImplemented
        return (
            self.step == other.step
            and self.policy == other.policy
            and self.values == other.values
        )

    __hash__ = None


@dataclass(frozen=True)
class ExperienceStep:
    """One sampled (s, a, s', r) tuple, attributed to a snapshot."""

    episode: int
    step: int
    snapshot: int
    state: int
    action: int
    next_state: int
    reward: float


@dataclass(frozen=True, eq=False)
class RunRecord:
    mdp: TabularMdp
    start_states: tuple[int, ...]
    snapshots: tuple[PolicySnapshot, ...]
    experience: tuple[ExperienceStep, ...]
    learner: dict | None = None

    def __post_init__(self):
        if not self.snapshots:
            raise ValueError("a run needs at least one policy snapshot")
        steps = [s.step for s in self.snapshots]
        if any(b <= a for a, b in zip(steps, steps[1:])):
            raise ValueError("snapshot steps must be strictly increasing")
        ns, na = self.mdp.n_states, self.mdp.n_actions
        for s in self.start_states:
            if not 0 <= s < ns:
                raise ValueError(f"start state index {s} out of range")
        for snap in self.snapshots:
            if snap.policy.action_dist.shape != (ns, na):
                raise ValueError("snapshot policy shape does not match MDP")
            if snap.values is not None and snap.values.value.shape != (ns,):
                raise ValueError("snapshot value shape does not match MDP")
        for e in self.experience:
            if not (0 <= e.state < ns and 0 <= e.next_state < ns):
                raise ValueError(f"experience step {e.step}: state index out of range")
            if not 0 <= e.action < na:
                raise ValueError(f"experience step {e.step}: action index out of range")
            if not 0 <= e.snapshot < len(self.snapshots):
                raise ValueError(f"experience step {e.step}: snapshot index out of range")

    def __eq__(self, other) -> bool:
        if not isinstance(other, RunRecord):
            return NotImplemented
        return (
            self.mdp == other.mdp
            and self.start_states == other.start_states
            and self.snapshots == other.snapshots
            and self.experience == other.experience
            and self.learner == other.learner
        )

    __hash__ = None

    def to_dict(self) -> dict:
        mdp = self.mdp
        return {
            "schema": RUN_SCHEMA,
            "mdp": mdp.to_dict(),
            "start_states": [mdp.states[s] for s in self.start_states],
            "snapshots": [
                {
                    "step": snap.step,
                    "policy": snap.policy.to_dict(mdp)["policy"],
                    "values": (
                        snap.values.to_dict(mdp)["values"] if snap.values is not None else None
                    ),
                }
                for snap in self.snapshots
            ],
            "experience": [
                {
                    "episode": e.episode,
                    "step": e.step,
                    "snapshot": e.snapshot,
                    "state": mdp.states[e.state],
                    "action": mdp.actions[e.action],
                    "next_state": mdp.states[e.next_state],
                    "reward": e.reward,
                }
                for e in self.experience
            ],
            "learner": self.learner,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        if d.get("schema") != RUN_SCHEMA:
            raise ValueError(f"unsupported run schema: {d.get('schema')!r}")
        mdp = TabularMdp.from_dict(d["mdp"])
        snapshots = []
        for snap in d["snapshots"]:
            values = None
            if snap.get("values") is not None:
                values = ValueEstimate.from_dict({"values": snap["values"]}, mdp)
            snapshots.append(
                PolicySnapshot(
                    step=int(snap["step"]),
                    policy=StochasticPolicy.from_dict({"policy": snap["policy"]}, mdp),
                    values=values,
                )
            )
        experience = tuple(
            ExperienceStep(
                episode=int(e["episode"]),
                step=int(e["step"]),
                snapshot=int(e["snapshot"]),
                state=mdp.state_index(e["state"]),
                action=mdp.action_index(e["action"]),
                next_state=mdp.state_index(e["next_state"]),
                reward=float(e["reward"]),
            )
            for e in d["experience"]
        )
        return cls(
            mdp=mdp,
            start_states=tuple(mdp.state_index(s) for s in d["start_states"]),
            snapshots=tuple(snapshots),
            experience=experience,
            learner=d.get("learner"),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls.from_dict(json.loads(text))


def single_snapshot_run(
    mdp: TabularMdp,
    policy: StochasticPolicy,
    values: ValueEstimate | None,
    start_states: tuple[int, ...],
) -> RunRecord:
    """Wrap a static MDP/policy pair as a one-snapshot run with no experience."""
    return RunRecord(
        mdp=mdp,
        start_states=start_states,
        snapshots=(PolicySnapshot(step=0, policy=policy, values=values),),
        experience=(),
    )
