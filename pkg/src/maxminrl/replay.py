"""Fixed-capacity FIFO experience buffer with uniform sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class Transition:
    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray
    truncated: bool = False


@dataclass
class Batch:
    """Column-stacked minibatch; rewards and flags have shape (M, 1)."""

    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    truncated: np.ndarray

    def __len__(self) -> int:
        return self.states.shape[0]


class ReplayBuffer:
    """Ring storage; once full, insertion evicts the oldest transition.

    Sampling draws M independent uniform indices with replacement over
    the current contents.
    """

    def __init__(self, capacity: int, state_dim: int, action_dim: int,
                 dtype=np.float64):
        if capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {capacity}")
        self.capacity = int(capacity)
        self.states = np.empty((capacity, state_dim), dtype=dtype)
        self.actions = np.empty((capacity, action_dim), dtype=dtype)
        self.rewards = np.empty((capacity, 1), dtype=dtype)
        self.next_states = np.empty((capacity, state_dim), dtype=dtype)
        self.truncated = np.empty((capacity, 1), dtype=dtype)
        self.size = 0
        self._head = 0

    def push(self, t: Transition) -> None:
        if not (np.all(np.isfinite(t.state)) and np.all(np.isfinite(t.action))
                and np.isfinite(t.reward) and np.all(np.isfinite(t.next_state))):
            raise ValueError("non-finite transition field")
        i = self._head
        self.states[i] = t.state
        self.actions[i] = t.action
        self.rewards[i, 0] = t.reward
        self.next_states[i] = t.next_state
        self.truncated[i, 0] = 1.0 if t.truncated else 0.0
        self._head = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, m: int, rng: np.random.Generator) -> Batch:
        if self.size == 0:
            raise ValueError("cannot sample from an empty buffer")
        idx = rng.integers(0, self.size, size=m)
        return Batch(self.states[idx], self.actions[idx], self.rewards[idx],
                     self.next_states[idx], self.truncated[idx])
