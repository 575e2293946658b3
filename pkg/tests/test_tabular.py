"""Tabular soft policy evaluation/iteration against independent linear
algebra and random-search oracles."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from maxminrl.tabular import (TabularMdp, boltzmann_policy, max_entropy_objective,
                              random_mdp, soft_policy_evaluation,
                              soft_policy_iteration)


def linear_solve_soft_q(mdp, policy, alpha, reversed_entropy):
    """Direct linear solve of the fixed-point equations: V solves
    (I - gamma P_pi) V = r_pi + sign * alpha * sum pi log pi terms."""
    logpi = np.where(policy > 0, np.log(np.maximum(policy, 1e-300)), 0.0)
    sign = 1.0 if reversed_entropy else -1.0
    ent_term = np.sum(np.where(policy > 0, policy * logpi, 0.0), axis=1)
    r_pi = np.sum(policy * mdp.rewards, axis=1)
    p_pi = np.einsum("sa,sat->st", policy, mdp.transitions)
    v = np.linalg.solve(np.eye(mdp.n_states) - mdp.gamma * p_pi,
                        r_pi + sign * alpha * ent_term)
    return mdp.rewards + mdp.gamma * (mdp.transitions @ v)


def test_zero_reward_zero_alpha_fixed_point():
    mdp = random_mdp(4, 3, np.random.default_rng(0), gamma=0.9)
    mdp.rewards[...] = 0.0
    pol = np.full((4, 3), 1.0 / 3.0)
    q = soft_policy_evaluation(mdp, pol, alpha=0.0)
    assert np.max(np.abs(q)) < 1e-9


def test_single_state_geometric_series():
    mdp = TabularMdp(np.ones((1, 1, 1)), np.ones((1, 1)), gamma=0.9)
    q = soft_policy_evaluation(mdp, np.ones((1, 1)), alpha=0.0)
    assert_allclose(q[0, 0], 1.0 / (1.0 - 0.9), atol=1e-9)


@pytest.mark.parametrize("reversed_entropy", [False, True])
def test_evaluation_matches_linear_solve(reversed_entropy):
    rng = np.random.default_rng(5)
    mdp = random_mdp(5, 3, rng, gamma=0.85)
    pol = rng.random((5, 3))
    pol /= pol.sum(axis=1, keepdims=True)
    q_iter = soft_policy_evaluation(mdp, pol, alpha=0.3,
                                    reversed_entropy=reversed_entropy)
    q_solve = linear_solve_soft_q(mdp, pol, 0.3, reversed_entropy)
    assert np.max(np.abs(q_iter - q_solve)) < 1e-8


def test_transition_rows_validated():
    p = np.ones((2, 2, 2)) * 0.5
    p[0, 0, 0] = 0.6  # row sums to 1.1
    with pytest.raises(ValueError, match="sum to 1"):
        TabularMdp(p, np.zeros((2, 2)), 0.9)
    with pytest.raises(ValueError, match="discount"):
        TabularMdp(np.ones((1, 1, 1)), np.zeros((1, 1)), 1.0)


def test_symmetric_bandit_gives_uniform_policy():
    # one state, equal rewards: Boltzmann weights tie
    mdp = TabularMdp(np.ones((1, 2, 1)), np.full((1, 2), 0.7), gamma=0.5)
    pol, q = soft_policy_iteration(mdp, alpha=0.5)
    assert_allclose(pol, [[0.5, 0.5]], atol=1e-12)
    assert_allclose(q[0, 0], q[0, 1], atol=1e-10)


def test_iteration_beats_random_policy_search():
    rng = np.random.default_rng(11)
    mdp = random_mdp(2, 2, rng, gamma=0.8)
    alpha = 0.5
    pol, _ = soft_policy_iteration(mdp, alpha=alpha)
    j_star = max_entropy_objective(mdp, pol, alpha)
    for _ in range(10_000):
        cand = rng.dirichlet(np.ones(2), size=2)
        assert max_entropy_objective(mdp, cand, alpha) <= j_star + 1e-8


def test_improvement_monotone_on_random_mdps():
    rng = np.random.default_rng(21)
    for _ in range(20):
        mdp = random_mdp(3, 2, rng, gamma=0.85)
        _, _, history = soft_policy_iteration(mdp, alpha=0.4, track_history=True)
        for q_old, q_new in zip(history, history[1:]):
            assert np.all(q_new >= q_old - 1e-9)


def test_iteration_requires_positive_alpha():
    mdp = random_mdp(2, 2, np.random.default_rng(0))
    with pytest.raises(ValueError, match="alpha"):
        soft_policy_iteration(mdp, alpha=0.0)


def test_boltzmann_rows_normalized():
    q = np.array([[1.0, 2.0, 3.0], [0.0, 0.0, 1000.0]])
    pol = boltzmann_policy(q, alpha=0.5)
    assert_allclose(pol.sum(axis=1), [1.0, 1.0], rtol=1e-12)
    assert pol[1, 2] > 0.999  # huge advantage dominates without overflow


def test_reversed_iteration_runs_to_fixed_policy():
    # no optimality claim for the reversed operator; it must simply settle
    mdp = random_mdp(3, 2, np.random.default_rng(2), gamma=0.8)
    pol, q = soft_policy_iteration(mdp, alpha=0.5, reversed_entropy=True)
    q_check = soft_policy_evaluation(mdp, pol, 0.5, reversed_entropy=True)
    assert np.max(np.abs(q - q_check)) < 1e-8
