"""Brute-force reference implementations for differential testing.

Everything here is intentionally naive: plain loops over raw integer indices,
written straight from the definitions, sharing no logic with the production
modules. Property tests compare production outputs against these on small
instances; expected values quoted in tests were computed with these
functions.

Outputs use raw indices and plain tuples, never the production concept
wrappers, so a bug in those wrappers cannot hide here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .mdp import StochasticPolicy, TabularMdp, Trajectory

MAX_ENUMERATION = 1_000_000


def bfs_reachable(
    mdp: TabularMdp, policy: StochasticPolicy, starts: tuple[int, ...]
) -> frozenset:
    """States reachable via edges with pi(a|s) * T_a(s, s') > 0."""
    seen = set(starts)
    queue = list(starts)
    while queue:
        s = queue.pop(0)
        for a in range(mdp.n_actions):
            pa = float(policy.action_dist[s, a])
            if pa <= 0:
                continue
            for s2 in range(mdp.n_states):
                if pa * float(mdp.transition[a, s, s2]) > 0 and s2 not in seen:
                    seen.add(s2)
                    queue.append(s2)
    return frozenset(seen)


def enumerate_trajectories(
    mdp: TabularMdp, policy: StochasticPolicy, start: int, horizon: int
) -> list[tuple[Trajectory, float]]:
    """Every trajectory of exactly ``horizon`` steps with its probability.

    Depth-first over all (action, next_state) index combinations, including
    zero-probability ones; probabilities are exact products. The
    probabilities over all trajectories of one length sum to 1.
    """
    if (mdp.n_states * mdp.n_actions) ** horizon > MAX_ENUMERATION:
        raise ValueError("enumeration would exceed the size cap")
    out: list[tuple[Trajectory, float]] = []

    def recurse(traj: Trajectory, state: int, prob: float, depth: int):
        if depth == horizon:
            out.append((traj, prob))
            return
        for a in range(mdp.n_actions):
            for s2 in range(mdp.n_states):
                p = prob * float(policy.action_dist[state, a]) * float(
                    mdp.transition[a, state, s2]
                )
                recurse(traj.extend(a, s2), s2, p, depth + 1)

    recurse(Trajectory(start), start, 1.0, 0)
    return out


def enumerate_trajectories_upto(
    mdp: TabularMdp, policy: StochasticPolicy, start: int, horizon: int
) -> list[tuple[Trajectory, float]]:
    """All trajectories of length 0..horizon with their probabilities."""
    out = []
    for k in range(horizon + 1):
        out.extend(enumerate_trajectories(mdp, policy, start, k))
    return out


def _minmax(values) -> list[float]:
    lo = min(values)
    hi = max(values)
    if lo == hi:
        return [0.5 for _ in values]
    return [(v - lo) / (hi - lo) for v in values]


def _occurrence(mdp, policy, s, a, s2) -> float:
    return float(policy.action_dist[s, a]) * float(mdp.transition[a, s, s2])


def reachable_transitions(
    mdp: TabularMdp,
    policy: StochasticPolicy,
    initial: tuple[tuple[int, int, int], ...],
) -> frozenset:
    """Closure of triples under "next triple leaves from the landing state"."""
    seen = set(initial)
    queue = list(initial)
    while queue:
        (_, _, s2) = queue.pop(0)
        for a in range(mdp.n_actions):
            for s3 in range(mdp.n_states):
                if _occurrence(mdp, policy, s2, a, s3) > 0:
                    triple = (s2, a, s3)
                    if triple not in seen:
                        seen.add(triple)
                        queue.append(triple)
    return frozenset(seen)


def transitions_from_starts(
    mdp: TabularMdp, policy: StochasticPolicy, starts: tuple[int, ...]
) -> tuple[tuple[int, int, int], ...]:
    out = []
    for s in starts:
        for a in range(mdp.n_actions):
            for s2 in range(mdp.n_states):
                if _occurrence(mdp, policy, s, a, s2) > 0:
                    out.append((s, a, s2))
    return tuple(out)


def reachable_trajectories(
    mdp: TabularMdp, policy: StochasticPolicy, starts: tuple[int, ...], horizon: int
) -> frozenset:
    """Supported trajectories (probability > 0) of length <= horizon."""
    out = set()
    for start in starts:
        for traj, p in enumerate_trajectories_upto(mdp, policy, start, horizon):
            if p > 0:
                out.add(traj)
    return frozenset(out)


def _classify(members: list, valued: list) -> str:
    if not members:
        return "none"
    if len(valued) == len(members):
        return "perfect"
    if not valued:
        return "pointless"
    return "productive"


@dataclass(frozen=True)
class OracleVerdict:
    """Ground-truth analysis bundle for one mapping instance."""

    conceptual_space: frozenset
    reachable: frozenset
    aberration: frozenset
    aberration_class: str
    generative: bool
    conceptual: bool
    hopeless: bool | None


def classify_state_mapping(
    mdp: TabularMdp,
    policy: StochasticPolicy,
    values,
    alpha: float,
    beta: float,
    starts: tuple[int, ...],
) -> OracleVerdict:
    space = frozenset(s for s in range(mdp.n_states) if 1.0 > alpha)
    reach = bfs_reachable(mdp, policy, starts)
    aberration = reach - space
    norm = _minmax([float(v) for v in values.value])
    valued_in = lambda group: [s for s in group if norm[s] > beta]
    return OracleVerdict(
        conceptual_space=space,
        reachable=reach,
        aberration=aberration,
        aberration_class=_classify(sorted(aberration), valued_in(sorted(aberration))),
        generative=not valued_in(reach),
        conceptual=not valued_in(space),
        hopeless=None,
    )


def classify_transition_mapping(
    mdp: TabularMdp,
    policy: StochasticPolicy,
    alpha: float,
    beta: float,
    starts: tuple[int, ...],
) -> OracleVerdict:
    triples = [
        (s, a, s2)
        for s in range(mdp.n_states)
        for a in range(mdp.n_actions)
        for s2 in range(mdp.n_states)
    ]
    rewards = [float(mdp.reward_mean[s, a, s2]) for (s, a, s2) in triples]
    norm = dict(zip(triples, _minmax(rewards)))
    space = frozenset(t for t in triples if _occurrence(mdp, policy, *t) > alpha)
    reach = reachable_transitions(mdp, policy, transitions_from_starts(mdp, policy, starts))
    aberration = reach - space
    valued_in = lambda group: [t for t in group if norm[t] > beta]
    return OracleVerdict(
        conceptual_space=space,
        reachable=reach,
        aberration=aberration,
        aberration_class=_classify(sorted(aberration), valued_in(sorted(aberration))),
        generative=not valued_in(reach),
        conceptual=not valued_in(space),
        hopeless=not valued_in(triples),
    )


def classify_trajectory_mapping(
    mdp: TabularMdp,
    policy: StochasticPolicy,
    values,
    alpha: float,
    beta: float,
    starts: tuple[int, ...],
    horizon: int,
) -> OracleVerdict:
    norm = _minmax([float(v) for v in values.value])
    with_probs: list[tuple[Trajectory, float]] = []
    for start in starts:
        with_probs.extend(enumerate_trajectories_upto(mdp, policy, start, horizon))
    space = frozenset(t for t, p in with_probs if p > alpha)
    reach = reachable_trajectories(mdp, policy, starts, horizon)
    aberration = reach - space
    valued_in = lambda group: [t for t in group if norm[t.last_state] > beta]
    return OracleVerdict(
        conceptual_space=space,
        reachable=reach,
        aberration=aberration,
        aberration_class=_classify(list(aberration), valued_in(aberration)),
        generative=not valued_in(reach),
        conceptual=not valued_in(space),
        hopeless=not [s for s in range(mdp.n_states) if norm[s] > beta],
    )


def classify_by_definition(
    mapping: str,
    mdp: TabularMdp,
    policy: StochasticPolicy,
    values,
    alpha: float,
    beta: float,
    starts: tuple[int, ...],
    horizon: int | None = None,
) -> OracleVerdict:
    """Dispatch to the literal per-mapping classifier."""
    if mapping == "s":
        return classify_state_mapping(mdp, policy, values, alpha, beta, starts)
    if mapping == "sas":
        return classify_transition_mapping(mdp, policy, alpha, beta, starts)
    if mapping == "tau":
        if horizon is None:
            raise ValueError("horizon required for the trajectory mapping")
        return classify_trajectory_mapping(mdp, policy, values, alpha, beta, starts, horizon)
    raise ValueError(f"unknown mapping tag {mapping!r}")
