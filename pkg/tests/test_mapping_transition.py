import numpy as np
import pytest

from creativemdp.csf import TransformationKind, TransitionConcept, conceptual_space
from creativemdp.fixtures import chain2
from creativemdp.mappings import (
    TransitionMappingConfig,
    build_transition_ecs,
    initial_transition_concepts,
    transition_occurrence_probability,
    transition_transformation_kind,
    transition_transformation_valued,
)
from creativemdp.mdp import StochasticPolicy, TabularMdp

from conftest import random_instances


def triples(concepts):
    return sorted((c.state, c.action, c.next_state) for c in concepts)


class TestOccurrenceProbability:
    def test_product_of_probabilities(self, mdp, pi_ref):
        assert transition_occurrence_probability(mdp, pi_ref, 0, 1, 1) == pytest.approx(
            0.8 * 0.75
        )

    def test_zero_policy_mass(self, mdp, pi_ref):
        assert transition_occurrence_probability(mdp, pi_ref, 1, 1, 1) == 0.0

    def test_sums_to_one_at_each_state(self):
        for m, p, _ in random_instances(30, seed=2, with_values=False):
            for s in range(m.n_states):
                total = sum(
                    transition_occurrence_probability(m, p, s, a, s2)
                    for a in range(m.n_actions)
                    for s2 in range(m.n_states)
                )
                assert total == pytest.approx(1.0, abs=1e-9)

    def test_invalid_index_rejected(self, mdp, pi_ref):
        with pytest.raises(IndexError):
            transition_occurrence_probability(mdp, pi_ref, 0, 9, 1)


class TestBuild:
    def test_domain_size_is_cardinality_product(self, mdp, pi_ref):
        ecs = build_transition_ecs(mdp, pi_ref, TransitionMappingConfig(0.5, 0.5))
        assert len(list(ecs.domain.concepts())) == 2 * 2 * 2

    def test_reward_normalization_endpoints(self, mdp, pi_ref):
        ecs = build_transition_ecs(mdp, pi_ref, TransitionMappingConfig(0.5, 0.5))
        for c in ecs.domain.concepts():
            expected = 1.0 if c.next_state == 1 else 0.0
            assert ecs.evaluation(c) == expected

    def test_conceptual_space_chain2(self, mdp, pi_ref):
        ecs = build_transition_ecs(mdp, pi_ref, TransitionMappingConfig(0.5, 0.5))
        assert triples(conceptual_space(ecs)) == [(0, 1, 1), (1, 0, 1)]

    def test_aberrant_members_have_low_acceptability(self):
        from creativemdp.csf import aberration_set

        for m, p, _ in random_instances(20, seed=31, with_values=False):
            for alpha in (0.0, 0.25, 0.5):
                ecs = build_transition_ecs(m, p, TransitionMappingConfig(alpha, 0.5))
                init = initial_transition_concepts(m, p, (0,))
                for c in aberration_set(ecs, init).concepts:
                    assert ecs.acceptability(c) <= alpha


class TestTransformationKind:
    def test_identity_none(self, mdp, pi_ref):
        cfg = TransitionMappingConfig(0.5, 0.5)
        assert (
            transition_transformation_kind(mdp, pi_ref, pi_ref, cfg)
            is TransformationKind.NONE
        )

    def test_cut_change_is_n_and_q(self, mdp, pi_a0, pi_ref):
        # alpha-cut under always-a0 is {(s0,a0,s0), (s1,a0,s1)}, under the
        # reference policy {(s0,a1,s1), (s1,a0,s1)}.
        cfg = TransitionMappingConfig(0.5, 0.5)
        assert (
            transition_transformation_kind(mdp, pi_a0, pi_ref, cfg)
            is TransformationKind.N_AND_Q
        )

    def test_same_cut_is_q_only(self, mdp, pi_ref):
        # Raising pi(a1|s0) to 0.9 moves (s0,a1,s1) to 0.72: still in the cut,
        # and nothing else passes 0.5, so the conceptual space is unchanged.
        cfg = TransitionMappingConfig(0.5, 0.5)
        shifted = StochasticPolicy(np.array([[0.1, 0.9], [1.0, 0.0]]))
        assert (
            transition_transformation_kind(mdp, pi_ref, shifted, cfg)
            is TransformationKind.Q_ONLY
        )
        # At alpha = 0.1 the same change drops (s0,a0,s0) out of the cut.
        assert (
            transition_transformation_kind(mdp, pi_ref, shifted, TransitionMappingConfig(0.1, 0.5))
            is TransformationKind.N_AND_Q
        )

    def test_high_alpha_q_only(self, mdp, pi_ref):
        cfg = TransitionMappingConfig(0.99, 0.5)
        shifted = StochasticPolicy(np.array([[0.2, 0.8], [1.0, 0.0]]))
        assert (
            transition_transformation_kind(mdp, pi_ref, shifted, cfg)
            is TransformationKind.Q_ONLY
        )

    def test_shape_mismatch_rejected(self, mdp, pi_ref):
        with pytest.raises(ValueError):
            transition_transformation_kind(
                mdp, pi_ref, StochasticPolicy(np.array([[1.0, 0.0]])), TransitionMappingConfig(0.5, 0.5)
            )


class TestTransformationValued:
    def test_identity_violates_precondition(self, mdp, pi_ref):
        cfg = TransitionMappingConfig(0.5, 0.5)
        init = initial_transition_concepts(mdp, pi_ref, (0,))
        with pytest.raises(ValueError):
            transition_transformation_valued(mdp, pi_ref, pi_ref, cfg, init)

    def test_newly_acceptable_rewarded_transition_is_valued(self, mdp, pi_a0, pi_ref):
        # (s0,a1,s1) enters the conceptual space with normalized reward 1.
        cfg = TransitionMappingConfig(0.5, 0.5)
        init = initial_transition_concepts(mdp, pi_a0, (0,))
        assert transition_transformation_valued(mdp, pi_a0, pi_ref, cfg, init)

    def test_unrewarded_gain_is_not_valued(self, pi_ref):
        # Same dynamics, but only arrivals from s0 are rewarded: swapping the
        # s1 row admits (s1,a1,s1), whose normalized reward is 0.
        base = chain2()
        reward = np.zeros((2, 2, 2))
        reward[0, :, 1] = 1.0
        mdp = TabularMdp(base.states, base.actions, base.transition, reward)
        swapped = StochasticPolicy(np.array([[0.25, 0.75], [0.0, 1.0]]))
        cfg = TransitionMappingConfig(0.5, 0.5)
        init = initial_transition_concepts(mdp, pi_ref, (0,))
        assert not transition_transformation_valued(mdp, pi_ref, swapped, cfg, init)

    def test_valued_is_monotone_in_decreasing_beta(self, mdp, pi_a0, pi_ref):
        init = initial_transition_concepts(mdp, pi_a0, (0,))
        betas = (0.9, 0.5, 0.25, 0.0)
        valued = [
            transition_transformation_valued(
                mdp, pi_a0, pi_ref, TransitionMappingConfig(0.5, b), init
            )
            for b in betas
        ]
        # Once valued at some beta, also valued at every smaller beta.
        for earlier, later in zip(valued, valued[1:]):
            assert later or not earlier
