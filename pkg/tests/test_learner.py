import numpy as np
import pytest

from creativemdp.fixtures import chain2, random_mdp
from creativemdp.learner import (
    LearnerConfig,
    epsilon_greedy_policy,
    greedy_policy,
    td_learn,
    value_iteration,
    value_iteration_run,
)
from creativemdp.mdp import TabularMdp


class TestValueIteration:
    def test_chain2_closed_form(self, mdp):
        # Absorbing rewarded state: V(s1) = 1 / (1 - gamma) = 10.
        v, greedy, iterations = value_iteration(mdp, LearnerConfig(gamma=0.9))
        assert v.value[1] == pytest.approx(10.0, abs=1e-6)
        assert int(np.argmax(greedy.action_dist[0])) == 1  # a1 at s0
        assert iterations > 0

    def test_gamma_zero_is_one_step_reward(self, mdp):
        v, _, _ = value_iteration(mdp, LearnerConfig(gamma=0.0))
        # max_a E[r | s0, a]: a0 -> 0.1, a1 -> 0.8; at s1 every action pays 1.
        assert v.value[0] == pytest.approx(0.8)
        assert v.value[1] == pytest.approx(1.0)

    def test_zero_rewards_zero_values(self, mdp):
        flat = TabularMdp(mdp.states, mdp.actions, mdp.transition, np.zeros((2, 2, 2)))
        v, _, _ = value_iteration(flat, LearnerConfig(gamma=0.9))
        assert np.all(v.value == 0.0)

    def test_bellman_fixpoint(self, mdp):
        cfg = LearnerConfig(gamma=0.9, tolerance=1e-10)
        v, _, _ = value_iteration(mdp, cfg)
        t_sas = np.transpose(mdp.transition, (1, 0, 2))
        q = np.einsum("sat,sat->sa", t_sas, mdp.reward_mean + 0.9 * v.value[None, None, :])
        assert np.max(np.abs(q.max(axis=1) - v.value)) < 1e-8

    def test_iteration_cap_reported(self, mdp):
        with pytest.raises(RuntimeError, match="did not converge"):
            value_iteration(mdp, LearnerConfig(gamma=0.9, max_iterations=2))

    def test_greedy_tie_breaks_to_lowest_index(self):
        pol = greedy_policy(np.array([[1.0, 1.0], [0.0, 2.0]]))
        assert int(np.argmax(pol.action_dist[0])) == 0
        assert int(np.argmax(pol.action_dist[1])) == 1


class TestEpsilonGreedy:
    def test_distribution_shape(self):
        pol = epsilon_greedy_policy(np.array([[1.0, 0.0]]), 0.2)
        assert pol.action_dist[0].tolist() == [0.9, 0.1]


class TestTdLearn:
    def test_zero_episodes_initial_snapshot_only(self, mdp):
        run = td_learn(mdp, LearnerConfig(episodes=0))
        assert len(run.snapshots) == 1
        assert run.experience == ()

    def test_fixed_seed_reproducible(self, mdp):
        cfg = LearnerConfig(episodes=50, seed=7)
        assert td_learn(mdp, cfg) == td_learn(mdp, cfg)
        assert td_learn(mdp, cfg).to_json() == td_learn(mdp, cfg).to_json()

    def test_chain2_converges_to_optimal_greedy(self, mdp):
        run = td_learn(mdp, LearnerConfig(episodes=500, gamma=0.9, epsilon=0.1, seed=0), (0,))
        final = run.snapshots[-1]
        assert int(np.argmax(final.policy.action_dist[0])) == 1

    def test_snapshot_cadence_and_attribution(self, mdp):
        cfg = LearnerConfig(episodes=100, snapshot_every=25, steps_per_episode=5, seed=1)
        run = td_learn(mdp, cfg)
        # initial + 3 intermediate (25, 50, 75) + final
        assert len(run.snapshots) == 5
        assert [s.step for s in run.snapshots] == [0, 125, 250, 375, 500]
        for e in run.experience:
            later = [s for s in run.snapshots if s.step <= e.step]
            assert e.snapshot == len(later) - 1

    def test_matches_value_iteration_on_gap_fixtures(self):
        # 3-state fixtures whose optimal action gap exceeds 0.1 at every
        # state; TD control must recover the unique optimal greedy policy.
        found = 0
        seed = 0
        while found < 3 and seed < 60:
            rng = np.random.default_rng(seed)
            seed += 1
            m = random_mdp(rng, 3, 2, sparse=False)
            cfg = LearnerConfig(gamma=0.9, tolerance=1e-10)
            v, greedy, _ = value_iteration(m, cfg)
            t_sas = np.transpose(m.transition, (1, 0, 2))
            q = np.einsum(
                "sat,sat->sa", t_sas, m.reward_mean + cfg.gamma * v.value[None, None, :]
            )
            gaps = np.sort(q, axis=1)
            gap = float(np.min(gaps[:, -1] - gaps[:, -2]))
            if gap <= 0.1:
                continue
            found += 1
            run = td_learn(
                m,
                LearnerConfig(
                    gamma=0.9, episodes=800, epsilon=0.2, learning_rate=0.1, seed=42
                ),
            )
            learned = np.argmax(run.snapshots[-1].policy.action_dist, axis=1)
            optimal = np.argmax(greedy.action_dist, axis=1)
            assert np.array_equal(learned, optimal)
        assert found == 3


class TestValueIterationRun:
    def test_snapshots_progress_from_uniform_to_greedy(self, mdp):
        run = value_iteration_run(mdp, LearnerConfig(gamma=0.9), (0,))
        assert len(run.snapshots) >= 2
        first = run.snapshots[0].policy.action_dist
        assert np.allclose(first, 0.5)
        final = run.snapshots[-1].policy
        _, greedy, _ = value_iteration(mdp, LearnerConfig(gamma=0.9))
        assert final == greedy
        assert run.experience == ()
