"""Instantiations of the creative-system machinery for MDP/policy pairs.

Three mappings are provided, named by what counts as a concept:

* ``state``: concepts are states; acceptability is state-space membership.
* ``transition``: concepts are (state, action, next_state) triples;
  acceptability is the occurrence probability under the policy.
* ``trajectory``: concepts are finite trajectories; acceptability is the
  start-conditioned path probability.

CLI tags: ``s``, ``sas``, ``tau``.
"""

from .state import StateMappingConfig, build_state_ecs, initial_state_concepts, state_transformation_kind
from .transition import (
    TransitionMappingConfig,
    build_transition_ecs,
    initial_transition_concepts,
    transition_occurrence_probability,
    transition_transformation_kind,
    transition_transformation_valued,
)
from .trajectory import (
    TrajectoryMappingConfig,
    build_trajectory_ecs,
    enumerate_bounded_trajectories,
    initial_trajectory_concepts,
    trajectory_probability,
    trajectory_probability_factors,
    trajectory_transformation_kind,
    trajectory_uninspiration,
)

MAPPING_TAGS = ("s", "sas", "tau")

__all__ = [
    "MAPPING_TAGS",
    "StateMappingConfig",
    "TransitionMappingConfig",
    "TrajectoryMappingConfig",
    "build_state_ecs",
    "build_transition_ecs",
    "build_trajectory_ecs",
    "enumerate_bounded_trajectories",
    "initial_state_concepts",
    "initial_transition_concepts",
    "initial_trajectory_concepts",
    "state_transformation_kind",
    "transition_occurrence_probability",
    "transition_transformation_kind",
    "transition_transformation_valued",
    "trajectory_probability",
    "trajectory_probability_factors",
    "trajectory_transformation_kind",
    "trajectory_uninspiration",
]
