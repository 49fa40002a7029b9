"""Mapping-agnostic creative-system machinery.

An exploratory creative system over a finite concept domain bundles four
pieces: an enumerable sub-universe of concepts, an acceptability function N
into [0, 1], an evaluation function V into [0, 1], and a traversal strategy Q
that advances tuples of concepts. Two thresholds parameterize the analysis:
``alpha`` carves the conceptual space out of the sub-universe via a strong
(strict) alpha-cut of N, and ``beta`` decides which concepts count as valued
under V.

Derived notions implemented here:

* conceptual space: ``{c in P | N(c) > alpha}``
* reachable set: concepts reachable from an initial tuple by repeated
  traversal, computed by exact support propagation (every positive-probability
  successor), not by sampling
* aberrations: reachable concepts outside the conceptual space, classified
  perfect / productive / pointless by how the beta-cut of the aberrant set
  relates to the whole set
* uninspiration: absence of valued concepts in the reachable set (generative),
  the conceptual space (conceptual), or the sub-universe (hopeless)
* transformation value: whether swapping one system for another admits new
  valued concepts, judged under a fixed evaluation function

Thresholds are compared strictly and exactly (no epsilon): a value equal to
``alpha`` or ``beta`` is excluded.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator

import numpy as np

from .mdp import Trajectory


@dataclass(frozen=True)
class StateConcept:
    state: int


@dataclass(frozen=True)
class TransitionConcept:
    state: int
    action: int
    next_state: int


@dataclass(frozen=True)
class TrajectoryConcept:
    trajectory: Trajectory


class _EmptyConcept:
    """The distinguished blank-canvas concept (a singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EMPTY"


EMPTY = _EmptyConcept()

Concept = StateConcept | TransitionConcept | TrajectoryConcept | _EmptyConcept

# Concept sets are plain frozensets; membership, union, difference and
# cardinality come for free and duplicates are impossible.
ConceptSet = frozenset


def concept_sort_key(concept: Concept) -> tuple:
    """Deterministic ordering for concepts of a single variant."""
    if isinstance(concept, StateConcept):
        return (concept.state,)
    if isinstance(concept, TransitionConcept):
        return (concept.state, concept.action, concept.next_state)
    if isinstance(concept, TrajectoryConcept):
        t = concept.trajectory
        return (t.length, t.start) + tuple(x for step in t.steps for x in step)
    return ()


@dataclass(frozen=True)
class ConceptDomain:
    """Enumerable description of the sub-universe for one mapping.

    Attributes:
        variant: "state" | "transition" | "trajectory".
        concepts: zero-argument callable yielding the enumerable part of the
            sub-universe in a deterministic order.
        hopeless_witnesses: when not None, a callable yielding concepts whose
            beta-cut is empty exactly when the whole sub-universe's beta-cut
            is empty (an evaluation-range cover), so hopeless uninspiration
            is decidable even when the sub-universe itself is unbounded.
            None means the sub-universe is not enumerable and hopeless stays
            indeterminate, as for the state mapping.
        growing: True when traversal makes concepts grow without bound
            (trajectories); fixpoint reachability is undefined there.
        horizon: enumeration bound for growing domains.
    """

    variant: str
    concepts: Callable[[], Iterator[Concept]]
    hopeless_witnesses: Callable[[], Iterator[Concept]] | None
    growing: bool = False
    horizon: int | None = None


@dataclass(frozen=True)
class EcsInstance:
    """One mapping applied to one MDP/policy pair, plus thresholds.

    ``traversal`` is the sampling form of the strategy (one stochastic
    successor per input concept); ``support`` is its exact form, returning
    every positive-probability successor, and is what reachability uses.
    """

    domain: ConceptDomain
    acceptability: Callable[[Concept], float]
    evaluation: Callable[[Concept], float]
    traversal: Callable[
        [Callable, Callable, tuple[Concept, ...], np.random.Generator],
        tuple[Concept, ...],
    ]
    support: Callable[[Concept], frozenset]
    alpha: float
    beta: float
    resolve_empty: Callable[[], tuple[Concept, ...]] | None = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must be in [0, 1], got {self.beta}")


def strong_alpha_cut(
    f: Callable[[Concept], float], concepts: Iterable[Concept], alpha: float
) -> frozenset:
    """Return ``{c | f(c) > alpha}`` with strict inequality.

    Raises ValueError if ``alpha`` is outside [0, 1] or ``f`` leaves [0, 1]
    on any member (a contract fault of the supplied function).
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    out = set()
    for c in concepts:
        v = f(c)
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"membership function returned {v} outside [0, 1] for {c!r}")
        if v > alpha:
            out.add(c)
    return frozenset(out)


def conceptual_space(ecs: EcsInstance) -> frozenset:
    """The strong alpha-cut of the sub-universe under acceptability."""
    if ecs.domain.growing and ecs.domain.horizon is None:
        raise ValueError("horizon required to enumerate an unbounded concept domain")
    return strong_alpha_cut(ecs.acceptability, ecs.domain.concepts(), ecs.alpha)


@dataclass(frozen=True)
class ReachableSet:
    """Result of support-propagation reachability.

    ``converged`` is True when the set stopped growing before the step bound
    (always eventually true on finite, non-growing domains); ``steps`` is the
    number of traversal applications actually performed.
    """

    concepts: frozenset
    converged: bool
    steps: int


def _resolve_initial(ecs: EcsInstance, initial: tuple[Concept, ...]) -> set:
    resolved: set = set()
    for c in initial:
        if c is EMPTY:
            if ecs.resolve_empty is None:
                raise ValueError(
                    "the empty concept has no interpretation under this mapping; "
                    "supply explicit start concepts"
                )
            resolved.update(ecs.resolve_empty())
        else:
            resolved.add(c)
    return resolved


def reachable_set(
    ecs: EcsInstance, initial: tuple[Concept, ...], m: int | None = None
) -> ReachableSet:
    """Concepts reachable from ``initial`` in at most ``m`` traversal steps.

    ``m=None`` means fixpoint mode: iterate until the set stops growing.
    Fixpoint mode is rejected on growing domains, where concepts lengthen
    forever; supply a horizon instead.
    """
    if not initial:
        raise ValueError("initial must be non-empty")
    if m is None and ecs.domain.growing:
        raise ValueError("fixpoint undefined on growing concepts; supply horizon")
    if m is not None and m < 0:
        raise ValueError("step bound must be >= 0")
    reached = _resolve_initial(ecs, initial)
    frontier = set(reached)
    steps = 0
    converged = False
    while m is None or steps < m:
        new = set()
        for c in frontier:
            new.update(ecs.support(c))
        new -= reached
        steps += 1
        if not new:
            converged = True
            steps -= 1  # the empty expansion is not a productive step
            break
        reached |= new
        frontier = new
    return ReachableSet(frozenset(reached), converged, steps)


@dataclass(frozen=True)
class AberrationResult:
    """Aberrant concepts plus how the reachable closure was realized.

    ``exact`` is True when the closure is a true fixpoint; otherwise ``bound``
    records the step bound that stood in for infinity.
    """

    concepts: frozenset
    exact: bool
    bound: int | None


def aberration_set(
    ecs: EcsInstance,
    initial: tuple[Concept, ...],
    m: int | None = None,
    *,
    reachable: ReachableSet | None = None,
    space: frozenset | None = None,
) -> AberrationResult:
    """Reachable concepts outside the conceptual space.

    On growing domains the closure is bounded by ``m`` (defaulting to the
    domain horizon) and the bound is recorded; elsewhere ``m=None`` computes
    the exact fixpoint. Precomputed ``reachable``/``space`` may be passed to
    avoid repeating enumeration.
    """
    if reachable is None:
        if ecs.domain.growing and m is None:
            m = ecs.domain.horizon
        reachable = reachable_set(ecs, initial, m)
    if space is None:
        space = conceptual_space(ecs)
    return AberrationResult(
        reachable.concepts - space,
        exact=reachable.converged,
        bound=None if reachable.converged else reachable.steps,
    )


class AberrationClass(str, Enum):
    NONE = "none"
    PERFECT = "perfect"
    PRODUCTIVE = "productive"
    POINTLESS = "pointless"


def classify_aberration(ecs: EcsInstance, aberrant: frozenset) -> AberrationClass:
    """Classify an aberrant set by how its beta-cut relates to the whole set.

    Empty set: none. Every member valued: perfect. No member valued:
    pointless. A proper nonempty subset valued: productive.
    """
    if not aberrant:
        return AberrationClass.NONE
    valued = strong_alpha_cut(ecs.evaluation, aberrant, ecs.beta)
    if valued == aberrant:
        return AberrationClass.PERFECT
    if not valued:
        return AberrationClass.POINTLESS
    return AberrationClass.PRODUCTIVE


@dataclass(frozen=True)
class UninspirationFlags:
    """Per-scope absence of valued concepts.

    ``hopeless`` is None (indeterminate) when the sub-universe is not
    enumerable, as for the state mapping.
    """

    generative: bool
    conceptual: bool
    hopeless: bool | None


def classify_uninspiration(
    ecs: EcsInstance,
    initial: tuple[Concept, ...],
    m: int | None = None,
    *,
    reachable: ReachableSet | None = None,
    space: frozenset | None = None,
) -> UninspirationFlags:
    """Diagnose generative / conceptual / hopeless uninspiration.

    Generative: the beta-cut of the reachable set is empty. Conceptual: the
    beta-cut of the conceptual space is empty. Hopeless: the beta-cut of the
    enumerated sub-universe is empty, or indeterminate (None) when the
    sub-universe cannot be enumerated.
    """
    if reachable is None:
        if ecs.domain.growing and m is None:
            m = ecs.domain.horizon
        reachable = reachable_set(ecs, initial, m)
    if space is None:
        space = conceptual_space(ecs)
    generative = not strong_alpha_cut(ecs.evaluation, reachable.concepts, ecs.beta)
    conceptual = not strong_alpha_cut(ecs.evaluation, space, ecs.beta)
    if ecs.domain.covers_evaluation:
        hopeless = not strong_alpha_cut(ecs.evaluation, ecs.domain.concepts(), ecs.beta)
    else:
        hopeless = None
    return UninspirationFlags(generative, conceptual, hopeless)


class TransformationKind(str, Enum):
    NONE = "none"
    Q_ONLY = "q_only"
    N_AND_Q = "n_and_q"


def transformation_valued(
    old_ecs: EcsInstance,
    new_ecs: EcsInstance,
    old_initial: tuple[Concept, ...],
    new_initial: tuple[Concept, ...],
    m: int | None = None,
) -> bool:
    """Whether swapping systems admits new valued concepts.

    Computes ``(reachable' | C') \\ (reachable | C)`` and checks the strict
    beta-cut of the gained concepts under the OLD evaluation function, per the
    fixed-evaluation reading of transformational creativity.
    """
    if ecs_growing := old_ecs.domain.growing:
        assert new_ecs.domain.growing == ecs_growing
        if m is None:
            m = old_ecs.domain.horizon
    old_reach = reachable_set(old_ecs, old_initial, m)
    new_reach = reachable_set(new_ecs, new_initial, m)
    old_all = old_reach.concepts | conceptual_space(old_ecs)
    new_all = new_reach.concepts | conceptual_space(new_ecs)
    gained = new_all - old_all
    return bool(strong_alpha_cut(old_ecs.evaluation, gained, old_ecs.beta))


def concept_set_hash(concepts: Iterable[Concept], label: Callable[[Concept], str]) -> str:
    """Order-independent digest of a concept set, for report cross-checks."""
    lines = "\n".join(sorted(label(c) for c in concepts))
    return hashlib.sha256(lines.encode("utf-8")).hexdigest()[:16]
