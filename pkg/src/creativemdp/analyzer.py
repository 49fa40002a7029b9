"""Run-level creativity analysis.

Applies one mapping to a recorded run and emits a deterministic report:
per-snapshot conceptual-space statistics, aberration class, and
uninspiration flags; per-snapshot-pair transformation kind and whether the
transformation was valued (judged under the earlier snapshot's evaluation);
exploratory-creativity events (first run-local discovery of a valued
concept); and experienced aberrations (sampled steps whose occurrence
probability fell at or below alpha).

Novelty is run-local first occurrence: the weakest defensible reading, since
nothing stronger is operationally available. A concept whose first occurrence
was not valued does not produce an event on later revisits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import csf
from .csf import (
    AberrationClass,
    Concept,
    EcsInstance,
    StateConcept,
    TrajectoryConcept,
    TransformationKind,
    TransitionConcept,
    UninspirationFlags,
    concept_set_hash,
)
from .mappings import (
    StateMappingConfig,
    TrajectoryMappingConfig,
    TransitionMappingConfig,
    build_state_ecs,
    build_trajectory_ecs,
    build_transition_ecs,
    initial_state_concepts,
    initial_trajectory_concepts,
    initial_transition_concepts,
    state_transformation_kind,
    trajectory_probability,
    trajectory_probability_factors,
    trajectory_transformation_kind,
    transition_occurrence_probability,
    transition_transformation_kind,
)
from .mdp import (
    StochasticPolicy,
    TabularMdp,
    Trajectory,
    ValueEstimate,
    validate_mdp,
    validate_policy,
)
from .normalize import normalize, tag_to_string
from .run import RunRecord

REPORT_SCHEMA = "creativemdp.report/1"

MappingConfig = StateMappingConfig | TransitionMappingConfig | TrajectoryMappingConfig

_TAG_FOR_CONFIG = {
    StateMappingConfig: "s",
    TransitionMappingConfig: "sas",
    TrajectoryMappingConfig: "tau",
}


def concept_label(concept: Concept, mdp: TabularMdp) -> str:
    """Canonical string form of a concept, used in reports and hashes."""
    if isinstance(concept, StateConcept):
        return mdp.states[concept.state]
    if isinstance(concept, TransitionConcept):
        return "/".join(
            (
                mdp.states[concept.state],
                mdp.actions[concept.action],
                mdp.states[concept.next_state],
            )
        )
    if isinstance(concept, TrajectoryConcept):
        return concept.trajectory.label(mdp)
    raise TypeError(f"cannot label {concept!r}")


@dataclass(frozen=True)
class SnapshotAnalysis:
    step: int
    conceptual_space_size: int
    conceptual_space_hash: str
    aberration_class: AberrationClass
    aberration_size: int
    aberration_exact: bool
    aberration_bound: int | None
    uninspiration: UninspirationFlags


@dataclass(frozen=True)
class TransformationEvent:
    pair: int  # index of the earlier snapshot
    kind: TransformationKind
    valued: bool


@dataclass(frozen=True)
class ExploratoryEvent:
    step: int
    concept: str


@dataclass(frozen=True)
class ExperiencedAberration:
    step: int
    concept: str
    probability: float
    policy_factor: float | None = None
    transition_factor: float | None = None


@dataclass(frozen=True)
class CreativityReport:
    mapping: str
    config: dict
    snapshots: tuple[SnapshotAnalysis, ...]
    transformations: tuple[TransformationEvent, ...]
    exploratory_events: tuple[ExploratoryEvent, ...]
    experienced_aberrations: tuple[ExperiencedAberration, ...]

    def to_dict(self) -> dict:
        def flags(u: UninspirationFlags):
            return {
                "generative": u.generative,
                "conceptual": u.conceptual,
                "hopeless": "indeterminate" if u.hopeless is None else u.hopeless,
            }

        return {
            "schema": REPORT_SCHEMA,
            "mapping": self.mapping,
            "config": self.config,
            "snapshots": [
                {
                    "step": s.step,
                    "conceptual_space_size": s.conceptual_space_size,
                    "conceptual_space_hash": s.conceptual_space_hash,
                    "aberration": {
                        "class": s.aberration_class.value,
                        "size": s.aberration_size,
                        "exact": s.aberration_exact,
                        "bound": s.aberration_bound,
                    },
                    "uninspiration": flags(s.uninspiration),
                }
                for s in self.snapshots
            ],
            "transformations": [
                {"pair": t.pair, "kind": t.kind.value, "valued": t.valued}
                for t in self.transformations
            ],
            "exploratory_events": [
                {"step": e.step, "concept": e.concept} for e in self.exploratory_events
            ],
            "experienced_aberrations": [
                {
                    "step": e.step,
                    "concept": e.concept,
                    "probability": e.probability,
                    **(
                        {
                            "policy_factor": e.policy_factor,
                            "transition_factor": e.transition_factor,
                        }
                        if e.policy_factor is not None
                        else {}
                    ),
                }
                for e in self.experienced_aberrations
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CreativityReport":
        if d.get("schema") != REPORT_SCHEMA:
            raise ValueError(f"unsupported report schema: {d.get('schema')!r}")
        snapshots = tuple(
            SnapshotAnalysis(
                step=int(s["step"]),
                conceptual_space_size=int(s["conceptual_space_size"]),
                conceptual_space_hash=s["conceptual_space_hash"],
                aberration_class=AberrationClass(s["aberration"]["class"]),
                aberration_size=int(s["aberration"]["size"]),
                aberration_exact=bool(s["aberration"]["exact"]),
                aberration_bound=s["aberration"]["bound"],
                uninspiration=UninspirationFlags(
                    generative=s["uninspiration"]["generative"],
                    conceptual=s["uninspiration"]["conceptual"],
                    hopeless=(
                        None
                        if s["uninspiration"]["hopeless"] == "indeterminate"
                        else s["uninspiration"]["hopeless"]
                    ),
                ),
            )
            for s in d["snapshots"]
        )
        return cls(
            mapping=d["mapping"],
            config=d["config"],
            snapshots=snapshots,
            transformations=tuple(
                TransformationEvent(
                    pair=int(t["pair"]),
                    kind=TransformationKind(t["kind"]),
                    valued=bool(t["valued"]),
                )
                for t in d["transformations"]
            ),
            exploratory_events=tuple(
                ExploratoryEvent(step=int(e["step"]), concept=e["concept"])
                for e in d["exploratory_events"]
            ),
            experienced_aberrations=tuple(
                ExperiencedAberration(
                    step=int(e["step"]),
                    concept=e["concept"],
                    probability=float(e["probability"]),
                    policy_factor=e.get("policy_factor"),
                    transition_factor=e.get("transition_factor"),
                )
                for e in d["experienced_aberrations"]
            ),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CreativityReport":
        return cls.from_dict(json.loads(text))


def _expect_tag(mapping: str, cfg: MappingConfig) -> None:
    expected = _TAG_FOR_CONFIG.get(type(cfg))
    if expected != mapping:
        raise ValueError(
            f"config type {type(cfg).__name__} does not match mapping {mapping!r}"
        )


def _require_values(run: RunRecord, mapping: str) -> None:
    if mapping in ("s", "tau"):
        for i, snap in enumerate(run.snapshots):
            if snap.values is None:
                raise ValueError(
                    f"mapping {mapping!r} evaluates value estimates, but snapshot {i} "
                    "has none"
                )


def _build_ecs(
    mapping: str,
    mdp: TabularMdp,
    policy: StochasticPolicy,
    values: ValueEstimate | None,
    cfg: MappingConfig,
    starts: tuple[int, ...],
) -> EcsInstance:
    if mapping == "s":
        return build_state_ecs(mdp, policy, values, cfg)
    if mapping == "sas":
        return build_transition_ecs(mdp, policy, cfg)
    return build_trajectory_ecs(mdp, policy, values, cfg, starts)


def _initial_concepts(
    mapping: str, mdp: TabularMdp, policy: StochasticPolicy, starts: tuple[int, ...]
):
    if mapping == "s":
        return initial_state_concepts(mdp, starts)
    if mapping == "sas":
        return initial_transition_concepts(mdp, policy, starts)
    return initial_trajectory_concepts(mdp, starts)


def _snapshot_evaluations(run: RunRecord, mapping: str, cfg: MappingConfig):
    """Per-snapshot evaluation lookup for experience concepts."""
    mdp = run.mdp
    if mapping == "sas":
        rhat = normalize(mdp.reward_mean, cfg.normalization)

        def evaluate(_snapshot: int, concept) -> float:
            return float(rhat[concept.state, concept.action, concept.next_state])

        return evaluate
    tables = [normalize(s.values.value, cfg.normalization) for s in run.snapshots]
    if mapping == "s":
        return lambda snapshot, concept: float(tables[snapshot][concept.state])
    return lambda snapshot, concept: float(
        tables[snapshot][concept.trajectory.last_state]
    )


def _concept_stream(run: RunRecord, mapping: str):
    """Yield (is_seed, experience_index, concept) in run order.

    Seeds are the givens of each episode (its start state, or the empty
    trajectory there); they enter the novelty baseline without producing
    events. For the transition mapping nothing precedes the first sampled
    triple, so there are no seeds.
    """
    if mapping == "s":
        episode = None
        for i, e in enumerate(run.experience):
            if e.episode != episode:
                episode = e.episode
                yield True, i, StateConcept(e.state)
            yield False, i, StateConcept(e.next_state)
    elif mapping == "sas":
        for i, e in enumerate(run.experience):
            yield False, i, TransitionConcept(e.state, e.action, e.next_state)
    else:
        episode = None
        prefix = None
        for i, e in enumerate(run.experience):
            if e.episode != episode:
                episode = e.episode
                prefix = Trajectory(e.state)
                yield True, i, TrajectoryConcept(prefix)
            prefix = prefix.extend(e.action, e.next_state)
            yield False, i, TrajectoryConcept(prefix)


def detect_exploratory_events(
    run: RunRecord, mapping: str, cfg: MappingConfig
) -> tuple[ExploratoryEvent, ...]:
    """First run-local occurrences of concepts valued past beta.

    The value is taken under the attributed snapshot's evaluation function.
    Truncating a run never changes events before the truncation point.
    """
    _expect_tag(mapping, cfg)
    _require_values(run, mapping)
    evaluate = _snapshot_evaluations(run, mapping, cfg)
    seen: set = set()
    events = []
    for is_seed, index, concept in _concept_stream(run, mapping):
        if concept in seen:
            continue
        seen.add(concept)
        if is_seed:
            continue
        e = run.experience[index]
        if evaluate(e.snapshot, concept) > cfg.beta:
            events.append(ExploratoryEvent(step=e.step, concept=concept_label(concept, run.mdp)))
    return tuple(events)


def detect_transformations(
    run: RunRecord, mapping: str, cfg: MappingConfig
) -> tuple[TransformationEvent, ...]:
    """Classify consecutive snapshot pairs and flag valued transformations.

    The valued flag holds the evaluation function fixed at the earlier
    snapshot; it is True when the pair admits a newly reachable or newly
    acceptable concept valued past beta under that fixed evaluation.
    """
    _expect_tag(mapping, cfg)
    _require_values(run, mapping)
    mdp = run.mdp
    starts = run.start_states
    events = []
    for i in range(len(run.snapshots) - 1):
        old = run.snapshots[i]
        new = run.snapshots[i + 1]
        if mapping == "s":
            kind = state_transformation_kind(old.policy, new.policy)
        elif mapping == "sas":
            kind = transition_transformation_kind(mdp, old.policy, new.policy, cfg)
        else:
            kind = trajectory_transformation_kind(
                mdp, old.policy, new.policy, old.values, cfg, starts
            )
        valued = False
        if kind is not TransformationKind.NONE:
            # Evaluation fixed at the earlier snapshot: the old ECS supplies
            # it, and csf.transformation_valued only evaluates through that.
            old_ecs = _build_ecs(mapping, mdp, old.policy, old.values, cfg, starts)
            new_ecs = _build_ecs(mapping, mdp, new.policy, old.values, cfg, starts)
            valued = csf.transformation_valued(
                old_ecs,
                new_ecs,
                _initial_concepts(mapping, mdp, old.policy, starts),
                _initial_concepts(mapping, mdp, new.policy, starts),
            )
        events.append(TransformationEvent(pair=i, kind=kind, valued=valued))
    return tuple(events)


def _experienced_aberrations(
    run: RunRecord, mapping: str, cfg: MappingConfig
) -> tuple[ExperiencedAberration, ...]:
    """Sampled steps whose occurrence probability is <= alpha.

    Probabilities are judged under the attributed snapshot's policy. For the
    trajectory mapping the logged probability decomposes into policy and
    transition factors, a diagnostic extension for attributing unlikeliness.
    """
    mdp = run.mdp
    out = []
    if mapping == "s":
        return ()
    if mapping == "sas":
        for e in run.experience:
            policy = run.snapshots[e.snapshot].policy
            p = transition_occurrence_probability(
                mdp, policy, e.state, e.action, e.next_state
            )
            if p <= cfg.alpha:
                concept = TransitionConcept(e.state, e.action, e.next_state)
                out.append(
                    ExperiencedAberration(
                        step=e.step,
                        concept=concept_label(concept, mdp),
                        probability=p,
                    )
                )
        return tuple(out)
    episode = None
    prefix = None
    for e in run.experience:
        if e.episode != episode:
            episode = e.episode
            prefix = Trajectory(e.state)
        prefix = prefix.extend(e.action, e.next_state)
        policy = run.snapshots[e.snapshot].policy
        p = trajectory_probability(mdp, policy, prefix)
        if p <= cfg.alpha:
            pf, tf = trajectory_probability_factors(mdp, policy, prefix)
            out.append(
                ExperiencedAberration(
                    step=e.step,
                    concept=prefix.label(mdp),
                    probability=p,
                    policy_factor=pf,
                    transition_factor=tf,
                )
            )
    return tuple(out)


def analyze(run: RunRecord, mapping: str, cfg: MappingConfig) -> CreativityReport:
    """Produce the full creativity report for a run under one mapping.

    Deterministic given (run, mapping, cfg): equal inputs yield equal
    reports, byte-for-byte after JSON encoding.
    """
    _expect_tag(mapping, cfg)
    _require_values(run, mapping)
    mdp = run.mdp
    problems = validate_mdp(mdp)
    for i, snap in enumerate(run.snapshots):
        problems.extend(
            f"snapshot {i}: {v}" for v in validate_policy(snap.policy, mdp)
        )
    if problems:
        raise ValueError("invalid run inputs: " + "; ".join(problems[:5]))
    if not run.start_states:
        raise ValueError("run has no start states to seed reachability")

    snapshots = []
    for snap in run.snapshots:
        ecs = _build_ecs(mapping, mdp, snap.policy, snap.values, cfg, run.start_states)
        space = csf.conceptual_space(ecs)
        initial = _initial_concepts(mapping, mdp, snap.policy, run.start_states)
        m = cfg.horizon if mapping == "tau" else None
        reach = csf.reachable_set(ecs, initial, m)
        aberration = csf.aberration_set(ecs, initial, reachable=reach, space=space)
        flags = csf.classify_uninspiration(ecs, initial, reachable=reach, space=space)
        snapshots.append(
            SnapshotAnalysis(
                step=snap.step,
                conceptual_space_size=len(space),
                conceptual_space_hash=concept_set_hash(
                    space, lambda c: concept_label(c, mdp)
                ),
                aberration_class=csf.classify_aberration(ecs, aberration.concepts),
                aberration_size=len(aberration.concepts),
                aberration_exact=aberration.exact,
                aberration_bound=aberration.bound,
                uninspiration=flags,
            )
        )

    config_echo = {
        "alpha": cfg.alpha,
        "beta": cfg.beta,
        "horizon": cfg.horizon if mapping == "tau" else None,
        "normalization": tag_to_string(cfg.normalization),
        "start_states": [mdp.states[s] for s in run.start_states],
        "seed": (run.learner or {}).get("config", {}).get("seed"),
    }
    return CreativityReport(
        mapping=mapping,
        config=config_echo,
        snapshots=tuple(snapshots),
        transformations=detect_transformations(run, mapping, cfg),
        exploratory_events=detect_exploratory_events(run, mapping, cfg),
        experienced_aberrations=_experienced_aberrations(run, mapping, cfg),
    )


def summarize(report: CreativityReport) -> str:
    """One-line summary of the final snapshot plus run-wide event counts."""
    final = report.snapshots[-1]
    u = final.uninspiration
    active = [
        name
        for name, flag in (
            ("generative", u.generative),
            ("conceptual", u.conceptual),
            ("hopeless", u.hopeless),
        )
        if flag
    ]
    uninspiration = "+".join(active) if active else "none"
    transformed = sum(
        1 for t in report.transformations if t.kind is not TransformationKind.NONE
    )
    return (
        f"mapping={report.mapping} C={final.conceptual_space_size} "
        f"aberration={final.aberration_class.value} "
        f"uninspiration={uninspiration} "
        f"transformations={transformed} "
        f"events={len(report.exploratory_events)}"
    )
