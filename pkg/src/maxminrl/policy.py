"""Squashed Gaussian policy head and the uniform baseline sampler.

The policy maps states through an MLP trunk to per-dimension (mean,
pre-std) pairs; actions are tanh-squashed reparameterized Gaussian
draws with an exact, numerically stable log-density.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nn import MlpNet, ForwardCache, forward, forward_cached, init_mlp

LOG_STD_MIN = -20.0
LOG_STD_MAX = 2.0

_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)
# largest float strictly below 1; emitted actions are clipped into the open box
_ACTION_MAX = float(np.nextafter(1.0, 0.0))


@dataclass
class SquashedGaussianPolicy:
    trunk: MlpNet                 # output dim = 2 * action_dim: [mean | pre-std]
    action_dim: int
    log_std_min: float = LOG_STD_MIN
    log_std_max: float = LOG_STD_MAX

    @property
    def state_dim(self) -> int:
        return self.trunk.input_dim


@dataclass
class ActionSample:
    """One batch of policy draws: a = tanh(u), u = mean + std * noise."""

    action: np.ndarray    # (M, A), strictly inside (-1, 1)
    log_prob: np.ndarray  # (M,)
    pre_squash: np.ndarray
    noise: np.ndarray


@dataclass
class PolicyTrace:
    """ActionSample plus every intermediate needed to backpropagate
    through the reparameterized draw."""

    action: np.ndarray
    log_prob: np.ndarray
    pre_squash: np.ndarray
    noise: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    clamp_mask: np.ndarray  # 1 where pre-std is inside the clamp bounds
    trunk_cache: ForwardCache


def make_policy(state_dim: int, action_dim: int, hidden_sizes, seed_or_rng,
                dtype=np.float64) -> SquashedGaussianPolicy:
    trunk = init_mlp(state_dim, 2 * action_dim, hidden_sizes, seed_or_rng, dtype=dtype)
    return SquashedGaussianPolicy(trunk, action_dim)


def log1m_tanh_sq(u: np.ndarray) -> np.ndarray:
    """log(1 - tanh(u)^2) evaluated as 2*(log 2 - u - softplus(-2u)).

    Exact for all finite u; the direct form loses everything once tanh
    saturates in floating point.
    """
    return 2.0 * (np.log(2.0) - u - np.logaddexp(0.0, -2.0 * u))


def _dist_params(policy: SquashedGaussianPolicy, states: np.ndarray, cached: bool):
    if cached:
        out, cache = forward_cached(policy.trunk, states)
    else:
        out, cache = forward(policy.trunk, states), None
    a_dim = policy.action_dim
    mean = out[:, :a_dim]
    pre_std = out[:, a_dim:]
    clamped = np.clip(pre_std, policy.log_std_min, policy.log_std_max)
    std = np.exp(clamped)
    mask = (pre_std > policy.log_std_min) & (pre_std < policy.log_std_max)
    return mean, std, mask, cache


def _sampled_log_prob(noise: np.ndarray, std: np.ndarray, u: np.ndarray) -> np.ndarray:
    gauss = -0.5 * np.square(noise) - np.log(std) - _HALF_LOG_2PI
    return np.sum(gauss - log1m_tanh_sq(u), axis=1)


def trace_from_noise(policy: SquashedGaussianPolicy, states: np.ndarray,
                     noise: np.ndarray) -> PolicyTrace:
    """Deterministic reparameterized draw for the given standard-normal
    noise; the differentiable path through mean and std is retained."""
    mean, std, mask, cache = _dist_params(policy, states, cached=True)
    noise = noise.astype(mean.dtype, copy=False)
    u = mean + std * noise
    action = np.clip(np.tanh(u), -_ACTION_MAX, _ACTION_MAX)
    log_prob = _sampled_log_prob(noise, std, u)
    return PolicyTrace(action, log_prob, u, noise, mean, std,
                       mask.astype(mean.dtype), cache)


def sample_trace(policy: SquashedGaussianPolicy, states: np.ndarray,
                 rng: np.random.Generator) -> PolicyTrace:
    noise = rng.standard_normal((states.shape[0], policy.action_dim))
    return trace_from_noise(policy, states, noise)


def sample(policy: SquashedGaussianPolicy, states: np.ndarray,
           rng: np.random.Generator) -> ActionSample:
    """Draw one action per state with its exact log-density."""
    tr = sample_trace(policy, states, rng)
    return ActionSample(tr.action, tr.log_prob, tr.pre_squash, tr.noise)


def mean_action(policy: SquashedGaussianPolicy, states: np.ndarray) -> np.ndarray:
    """Deterministic tanh(mean) action, used in evaluation mode."""
    out = forward(policy.trunk, states)
    return np.tanh(out[:, :policy.action_dim])


def log_prob(policy: SquashedGaussianPolicy, states: np.ndarray,
             actions: np.ndarray) -> np.ndarray:
    """Exact log-density of given actions; actions must lie strictly
    inside the open box (-1, 1)^dim."""
    actions = np.asarray(actions)
    if np.any(np.abs(actions) >= 1.0):
        raise ValueError("action components must lie strictly inside (-1, 1)")
    mean, std, _, _ = _dist_params(policy, states, cached=False)
    u = np.arctanh(actions.astype(mean.dtype))
    z = (u - mean) / std
    gauss = -0.5 * np.square(z) - np.log(std) - _HALF_LOG_2PI
    return np.sum(gauss - log1m_tanh_sq(u), axis=1)


def empirical_entropy(policy, states: np.ndarray, n_samples: int,
                      rng: np.random.Generator) -> float:
    """Monte-Carlo estimate of E_s E_{a~pi}[-log pi(a|s)] over the given
    states, drawing n_samples fresh actions per state."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    states = np.asarray(states)
    tiled = np.repeat(states, n_samples, axis=0)
    smp = sample(policy, tiled, rng) if isinstance(policy, SquashedGaussianPolicy) \
        else policy.sample(tiled, rng)
    return float(-np.mean(smp.log_prob))


class UniformPolicy:
    """Non-learning baseline: uniform over the action box [-1, 1]^dim."""

    def __init__(self, action_dim: int):
        self.action_dim = action_dim

    def sample(self, states: np.ndarray, rng: np.random.Generator) -> ActionSample:
        m = np.asarray(states).shape[0]
        action = rng.uniform(-1.0, 1.0, size=(m, self.action_dim))
        lp = np.full(m, -self.action_dim * np.log(2.0))
        return ActionSample(action, lp, action.copy(), action.copy())

    def log_prob(self, states: np.ndarray, actions: np.ndarray) -> np.ndarray:
        m = np.asarray(actions).shape[0]
        return np.full(m, -self.action_dim * np.log(2.0))


def uniform_policy(action_dim: int) -> UniformPolicy:
    return UniformPolicy(action_dim)
