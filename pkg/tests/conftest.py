import numpy as np
import pytest

from creativemdp.fixtures import (
    chain2,
    chain2_reference_policy,
    chain2_values,
    deterministic_policy,
    random_mdp,
    random_policy,
    random_values,
)


@pytest.fixture
def mdp():
    return chain2()


@pytest.fixture
def pi_ref():
    return chain2_reference_policy()


@pytest.fixture
def values():
    return chain2_values()


@pytest.fixture
def pi_a0(mdp):
    return deterministic_policy(mdp, "a0")


@pytest.fixture
def pi_a1(mdp):
    return deterministic_policy(mdp, "a1")


def random_instances(n, seed=0, max_states=4, max_actions=3, with_values=True):
    """Deterministic stream of (mdp, policy, values) triples for fuzzing."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        m = random_mdp(rng, int(rng.integers(2, max_states + 1)), int(rng.integers(1, max_actions + 1)))
        p = random_policy(rng, m)
        v = random_values(rng, m) if with_values else None
        out.append((m, p, v))
    return out
