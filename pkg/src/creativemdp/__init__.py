"""Creativity analysis of finite MDP agents.

Treats an MDP/policy pair as an exploratory creative system under one of
three mappings (states, transitions, trajectories) and makes creativity
attributions mechanically checkable: conceptual spaces via strict alpha-cuts,
reachable-concept sets via support propagation, aberration and uninspiration
diagnoses, and transformation / exploratory-creativity events over recorded
learning runs.
"""

from .analyzer import (
    CreativityReport,
    analyze,
    detect_exploratory_events,
    detect_transformations,
    summarize,
)
from .csf import (
    EMPTY,
    AberrationClass,
    AberrationResult,
    Concept,
    ConceptDomain,
    EcsInstance,
    ReachableSet,
    StateConcept,
    TrajectoryConcept,
    TransformationKind,
    TransitionConcept,
    UninspirationFlags,
    aberration_set,
    classify_aberration,
    classify_uninspiration,
    conceptual_space,
    reachable_set,
    strong_alpha_cut,
    transformation_valued,
)
from .fixtures import chain2, chain2_reference_policy, chain2_values
from .learner import (
    LearnerConfig,
    td_learn,
    value_iteration,
    value_iteration_run,
)
from .mappings import (
    StateMappingConfig,
    TrajectoryMappingConfig,
    TransitionMappingConfig,
    build_state_ecs,
    build_trajectory_ecs,
    build_transition_ecs,
    state_transformation_kind,
    trajectory_probability,
    trajectory_transformation_kind,
    trajectory_uninspiration,
    transition_occurrence_probability,
    transition_transformation_kind,
    transition_transformation_valued,
)
from .mdp import (
    StochasticPolicy,
    TabularMdp,
    Trajectory,
    ValueEstimate,
    rollout,
    sample_step,
    validate_mdp,
    validate_policy,
    validate_values,
)
from .normalize import Affine, Logistic, MinMax, NormalizationTag, normalize
from .run import ExperienceStep, PolicySnapshot, RunRecord, single_snapshot_run

__version__ = "0.1.0"

__all__ = [
    "AberrationClass",
    "AberrationResult",
    "Affine",
    "Concept",
    "ConceptDomain",
    "CreativityReport",
    "EMPTY",
    "EcsInstance",
    "ExperienceStep",
    "LearnerConfig",
    "Logistic",
    "MinMax",
    "NormalizationTag",
    "PolicySnapshot",
    "ReachableSet",
    "RunRecord",
    "StateConcept",
    "StateMappingConfig",
    "StochasticPolicy",
    "TabularMdp",
    "Trajectory",
    "TrajectoryConcept",
    "TrajectoryMappingConfig",
    "TransformationKind",
    "TransitionConcept",
    "TransitionMappingConfig",
    "UninspirationFlags",
    "ValueEstimate",
    "aberration_set",
    "analyze",
    "build_state_ecs",
    "build_trajectory_ecs",
    "build_transition_ecs",
    "chain2",
    "chain2_reference_policy",
    "chain2_values",
    "classify_aberration",
    "classify_uninspiration",
    "conceptual_space",
    "detect_exploratory_events",
    "detect_transformations",
    "normalize",
    "reachable_set",
    "rollout",
    "sample_step",
    "single_snapshot_run",
    "state_transformation_kind",
    "strong_alpha_cut",
    "summarize",
    "td_learn",
    "trajectory_probability",
    "trajectory_transformation_kind",
    "trajectory_uninspiration",
    "transformation_valued",
    "transition_occurrence_probability",
    "transition_transformation_kind",
    "transition_transformation_valued",
    "validate_mdp",
    "validate_policy",
    "validate_values",
    "value_iteration",
    "value_iteration_run",
]
