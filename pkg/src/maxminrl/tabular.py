"""Exact soft policy evaluation and iteration on finite MDPs.

These routines are the ground-truth oracles for verifying the neural
critics: soft policy evaluation iterates the entropy-augmented Bellman
operator to its fixed point, and the reversed variant flips the sign of
the entropy term so low-entropy states score high.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class TabularMdp:
    """Finite MDP: transitions (S, A, S), rewards (S, A), discount."""

    transitions: np.ndarray
    rewards: np.ndarray
    gamma: float

    def __post_init__(self):
        self.transitions = np.asarray(self.transitions, dtype=np.float64)
        self.rewards = np.asarray(self.rewards, dtype=np.float64)
        s, a, s2 = self.transitions.shape
        if s2 != s or self.rewards.shape != (s, a):
            raise ValueError("transition tensor must be (S, A, S) with rewards (S, A)")
        sums = self.transitions.sum(axis=2)
        if np.max(np.abs(sums - 1.0)) > 1e-12:
            raise ValueError("transition rows must sum to 1 within 1e-12")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"discount must lie in [0, 1), got {self.gamma}")

    @property
    def n_states(self) -> int:
        return self.transitions.shape[0]

    @property
    def n_actions(self) -> int:
        return self.transitions.shape[1]


def random_mdp(n_states: int, n_actions: int, rng: np.random.Generator,
               gamma: float = 0.9) -> TabularMdp:
    p = rng.random((n_states, n_actions, n_states))
    p /= p.sum(axis=2, keepdims=True)
    r = rng.uniform(-1.0, 1.0, size=(n_states, n_actions))
    return TabularMdp(p, r, gamma)


def _validate_policy(mdp: TabularMdp, policy: np.ndarray) -> np.ndarray:
    policy = np.asarray(policy, dtype=np.float64)
    if policy.shape != (mdp.n_states, mdp.n_actions):
        raise ValueError("policy table must be (S, A)")
    if np.max(np.abs(policy.sum(axis=1) - 1.0)) > 1e-10 or np.any(policy < 0):
        raise ValueError("policy rows must be probability distributions")
    return policy


def soft_state_values(mdp: TabularMdp, policy: np.ndarray, q: np.ndarray,
                      alpha: float, reversed_entropy: bool) -> np.ndarray:
    """V(s) = sum_a pi(a|s) * (Q(s,a) -/+ alpha * log pi(a|s))."""
    with np.errstate(divide="ignore"):
        logpi = np.where(policy > 0.0, np.log(np.maximum(policy, 1e-300)), 0.0)
    sign = 1.0 if reversed_entropy else -1.0
    inner = q + sign * alpha * logpi
    return np.sum(np.where(policy > 0.0, policy * inner, 0.0), axis=1)


def soft_policy_evaluation(mdp: TabularMdp, policy: np.ndarray, alpha: float,
                           reversed_entropy: bool = False, tol: float = 1e-10,
                           max_iter: int = 1_000_000) -> np.ndarray:
    """Fixed point of the entropy-augmented Bellman operator.

    Standard: T Q(s,a) = r(s,a) + gamma * E_s'[ V(s') ] with
    V(s) = E_a[Q - alpha log pi]; reversed flips to V(s) = E_a[Q + alpha log pi].
    Iterates to sup-norm tolerance `tol`.
    """
    policy = _validate_policy(mdp, policy)
    if mdp.gamma >= 1.0:
        raise ValueError("soft policy evaluation requires gamma < 1")
    q = np.zeros((mdp.n_states, mdp.n_actions))
    for _ in range(max_iter):
        v = soft_state_values(mdp, policy, q, alpha, reversed_entropy)
        q_next = mdp.rewards + mdp.gamma * (mdp.transitions @ v)
        delta = np.max(np.abs(q_next - q))
        q = q_next
        if delta < tol:
            return q
    raise RuntimeError(f"soft policy evaluation did not reach {tol} in {max_iter} sweeps")


def boltzmann_policy(q: np.ndarray, alpha: float) -> np.ndarray:
    """pi(a|s) proportional to exp(Q(s,a)/alpha), rows normalized."""
    z = q / alpha
    z -= z.max(axis=1, keepdims=True)
    p = np.exp(z)
    return p / p.sum(axis=1, keepdims=True)


def soft_policy_iteration(mdp: TabularMdp, alpha: float,
                          reversed_entropy: bool = False,
                          policy_tol: float = 1e-8, max_rounds: int = 10_000,
                          track_history: bool = False):
    """Alternate exact soft evaluation with Boltzmann improvement until
    the policy table changes by less than policy_tol (sup norm).

    Returns (policy, q) or, with track_history, (policy, q, [q per round]).
    """
    if alpha <= 0.0:
        raise ValueError("soft policy iteration requires alpha > 0")
    n_s, n_a = mdp.n_states, mdp.n_actions
    policy = np.full((n_s, n_a), 1.0 / n_a)
    history = []
    q = soft_policy_evaluation(mdp, policy, alpha, reversed_entropy)
    if track_history:
        history.append(q.copy())
    for _ in range(max_rounds):
        new_policy = boltzmann_policy(q, alpha)
        change = np.max(np.abs(new_policy - policy))
        policy = new_policy
        q = soft_policy_evaluation(mdp, policy, alpha, reversed_entropy)
        if track_history:
            history.append(q.copy())
        if change < policy_tol:
            break
    else:
        raise RuntimeError(f"policy iteration did not settle in {max_rounds} rounds")
    if track_history:
        return policy, q, history
    return policy, q


def max_entropy_objective(mdp: TabularMdp, policy: np.ndarray, alpha: float,
                          initial_state: int = 0) -> float:
    """Entropy-augmented discounted return from the given start state.

    The per-step payoff is r(s,a) + alpha * H(pi(.|s)); solved exactly via
    the linear state-value system.
    """
    policy = _validate_policy(mdp, policy)
    with np.errstate(divide="ignore"):
        logpi = np.where(policy > 0.0, np.log(np.maximum(policy, 1e-300)), 0.0)
    entropy = -np.sum(np.where(policy > 0.0, policy * logpi, 0.0), axis=1)
    r_pi = np.sum(policy * mdp.rewards, axis=1) + alpha * entropy
    p_pi = np.einsum("sa,sat->st", policy, mdp.transitions)
    v = np.linalg.solve(np.eye(mdp.n_states) - mdp.gamma * p_pi, r_pi)
    return float(v[initial_state])
