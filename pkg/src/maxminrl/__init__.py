"""Entropy-regularized actor-critic toolkit.

Implements maximum-entropy SAC with split entropy coefficients, max-min
entropy RL (MME) and its disentangled variant (DE-MME), a continuous
4-room exploration maze with sparse/delayed reward wrappers, exploration
diagnostics, and a seeded experiment runner.
"""

from .nn import MlpNet, Gradients, AdamState, init_mlp, forward, backward, \
    adam_step, adam_init, ema_update, save_mlp, load_mlp
from .policy import SquashedGaussianPolicy, ActionSample, make_policy, sample, \
    log_prob, empirical_entropy, uniform_policy
from .envs import MazeLayout, ContinuousMaze, PointGoal, SparseReward, \
    DelayedReward, EnvStep, maze_reset, maze_step
from .replay import ReplayBuffer, Transition, Batch
from .tabular import TabularMdp, soft_policy_evaluation, soft_policy_iteration
from .agents import AgentConfig, SacAgent, MmeAgent, DemmeAgent, UniformAgent, \
    make_agent, intrinsic_reward_view, neural_soft_evaluation

__version__ = "0.1.0"
