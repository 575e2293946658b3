"""Actor-critic agents: SAC with split entropy coefficients, max-min
entropy RL (MME), and its disentangled two-policy variant (DE-MME).

All three share the same plumbing: twin Q critics regressed toward
r / alpha_pi + gamma * V_target(s'), a state-value net V regressed toward
an entropy-adjusted expectation of the twin minimum under one fresh
policy draw per state, a reparameterized policy ascent on
E[min_i Q_i - log pi], and an EMA target for V. They differ only in the
sign of the entropy term inside the V target (SAC subtracts it, MME adds
it with a positive per-minibatch offset) and, for DE-MME, in splitting
the critic into a reward part (trained on rewards only, under the target
policy) and an entropy part (trained on the reversed entropy term only,
under a separate exploration policy).

Rewards are scaled by 1 / alpha_pi inside the critic targets instead of
multiplying log pi by alpha_pi in the policy objective, so entropy terms
in value targets carry the ratio alpha_q / alpha_pi and the policy
objective carries coefficient 1. One gradient step consumes a single
minibatch: every loss and target is computed from the same parameter
snapshot, then all networks are updated, then the EMA targets move.
Time-limit truncation bootstraps through the value target (the tasks are
infinite-horizon; nothing here ever terminates).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import nn
from .nn import MlpNet, adam_init, adam_step, ema_update, forward, forward_cached, \
    backward_from_cache, input_gradient_from_cache
from .policy import SquashedGaussianPolicy, UniformPolicy, make_policy, sample, \
    sample_trace, mean_action, empirical_entropy
from .replay import Batch
from .tabular import TabularMdp

ALGORITHMS = ("sac", "mme", "demme", "uniform")
OFFSET_MODES = ("minibatch_min", "max_entropy_constant", "none")


@dataclass
class AgentConfig:
    algorithm: str = "sac"
    gamma: float = 0.999
    alpha_pi: float = 1.0
    alpha_q: float = 1.0
    batch_size: int = 256
    lr: float = 3e-4
    tau_ema: float = 0.005
    gradient_steps_per_env_step: int = 1
    offset_mode: str = "auto"  # resolved to none (SAC) / minibatch_min (MME family)
    hidden_sizes: tuple = (256, 256)
    buffer_capacity: int = 1_000_000
    dtype: str = "float64"

    def resolved_offset_mode(self) -> str:
        if self.offset_mode == "auto":
            return "none" if self.algorithm in ("sac", "uniform") else "minibatch_min"
        return self.offset_mode

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.alpha_pi < 0.0 or self.alpha_q < 0.0:
            raise ValueError("entropy coefficients must be >= 0")
        if self.algorithm in ("sac", "mme", "demme") and self.alpha_pi <= 0.0:
            raise ValueError("learning agents scale rewards by 1/alpha_pi and "
                             "need alpha_pi > 0")
        mode = self.resolved_offset_mode()
        if mode not in OFFSET_MODES:
            raise ValueError(f"unknown offset mode {self.offset_mode!r}")
        if mode == "none" and self.algorithm in ("mme", "demme"):
            raise ValueError("offset_mode 'none' is only legal for SAC")
        if self.batch_size < 1 or self.gradient_steps_per_env_step < 0:
            raise ValueError("batch_size must be >= 1 and gradient steps >= 0")
        if self.lr <= 0.0 or not 0.0 < self.tau_ema <= 1.0:
            raise ValueError("lr must be > 0 and tau_ema in (0, 1]")
        if self.dtype not in ("float64", "float32"):
            raise ValueError(f"dtype must be float64 or float32, got {self.dtype}")

    def np_dtype(self):
        return np.float64 if self.dtype == "float64" else np.float32


def _check_losses(name: str, losses: dict, dump: dict) -> None:
    bad = [k for k, v in losses.items() if not np.isfinite(v)]
    if bad:
        detail = {k: (float(np.min(v)), float(np.max(v)))
                  for k, v in dump.items()}
        raise FloatingPointError(f"non-finite loss in {name}: {bad}; "
                                 f"target/logp ranges: {detail}")


def entropy_offset(mode: str, log_probs: np.ndarray, action_dim: int) -> float:
    """Positive constant added to log pi terms inside MME-family value
    targets; minibatch_min makes every per-sample (log pi + c) >= 0 with
    equality at the minibatch arg-min."""
    if mode == "minibatch_min":
        return -float(np.min(log_probs))
    if mode == "max_entropy_constant":
        return action_dim * float(np.log(2.0))
    return 0.0


def _critic_gradients(net: MlpNet, inputs: np.ndarray, targets: np.ndarray,
                      out=None):
    """Gradient of 0.5 * mean((net(x) - target)^2) plus the loss value."""
    pred, cache = forward_cached(net, inputs)
    resid = pred - targets
    grads, _ = backward_from_cache(net, cache, resid / resid.shape[0], out=out)
    loss = 0.5 * float(np.mean(np.square(resid)))
    return grads, loss


def _policy_gradients(policy: SquashedGaussianPolicy, trace, d_action: np.ndarray,
                      batch_size: int, out=None):
    """Backpropagate mean(log pi - <critic path>) into the policy trunk.

    d_action is dLoss/da from the critic path (already includes the 1/M
    factor); the direct log pi path adds 2a/M through the squash
    correction, -1/(M sigma) through the scale, and noise-weighted terms
    into the pre-std head. The Gaussian quadratic term has zero
    reparameterized gradient and is omitted.
    """
    a = trace.action
    du = d_action * (1.0 - np.square(a)) + (2.0 / batch_size) * a
    d_mean = du
    d_std = du * trace.noise - 1.0 / (batch_size * trace.std)
    d_pre_std = d_std * trace.std * trace.clamp_mask
    d_trunk = np.concatenate([d_mean, d_pre_std], axis=1)
    grads, _ = backward_from_cache(policy.trunk, trace.trunk_cache, d_trunk, out=out)
    return grads


def _min_upstreams(q_a: np.ndarray, q_b: np.ndarray, coeff: float, dtype):
    """Upstream gradients routing coeff through the element-wise minimum."""
    take_a = q_a <= q_b
    ga = np.where(take_a, coeff, 0.0).astype(dtype, copy=False)
    gb = np.where(take_a, 0.0, coeff).astype(dtype, copy=False)
    return ga, gb


class SacAgent:
    """Maximum-entropy actor-critic with separate value/policy entropy
    coefficients (alpha_q / alpha_pi)."""

    name = "sac"
    reversed_entropy = False

    def __init__(self, state_dim: int, action_dim: int, cfg: AgentConfig,
                 init_rng: np.random.Generator):
        cfg.validate()
        self.cfg = cfg
        self.state_dim = state_dim
        self.action_dim = action_dim
        dt = cfg.np_dtype()
        hs = cfg.hidden_sizes
        self.policy = make_policy(state_dim, action_dim, hs, init_rng, dtype=dt)
        self.q1 = nn.init_mlp(state_dim + action_dim, 1, hs, init_rng, dtype=dt)
        self.q2 = nn.init_mlp(state_dim + action_dim, 1, hs, init_rng, dtype=dt)
        self.v = nn.init_mlp(state_dim, 1, hs, init_rng, dtype=dt)
        self.v_target = self.v.copy()
        self.adam_policy = adam_init(self.policy.trunk, cfg.lr)
        self.adam_q1 = adam_init(self.q1, cfg.lr)
        self.adam_q2 = adam_init(self.q2, cfg.lr)
        self.adam_v = adam_init(self.v, cfg.lr)
        self.twin_reduce = np.minimum  # tests may swap in np.maximum
        # reusable gradient buffers; contents are only valid between
        # computation and the adam step inside one update
        self._g = {"q1": nn.Gradients.zeros_like(self.q1),
                   "q2": nn.Gradients.zeros_like(self.q2),
                   "v": nn.Gradients.zeros_like(self.v),
                   "policy": nn.Gradients.zeros_like(self.policy.trunk)}

    # -- value-target entropy term ------------------------------------
    def _v_target(self, q_min: np.ndarray, log_probs: np.ndarray, offset: float,
                  k: float) -> np.ndarray:
        return q_min - k * log_probs

    def update(self, batch: Batch, rng: np.random.Generator,
               with_trace: bool = False) -> dict:
        cfg = self.cfg
        m = len(batch)
        s, a, r, s2 = batch.states, batch.actions, batch.rewards, batch.next_states
        inv_api = 1.0 / cfg.alpha_pi
        k = cfg.alpha_q / cfg.alpha_pi
        dt = s.dtype

        # one fresh draw per state, shared by the V target and the policy loss
        tr = sample_trace(self.policy, s, rng)
        sa_pi = np.concatenate([s, tr.action], axis=1)
        q1_pi, c1 = forward_cached(self.q1, sa_pi)
        q2_pi, c2 = forward_cached(self.q2, sa_pi)
        q_min = self.twin_reduce(q1_pi, q2_pi)
        logp = tr.log_prob[:, None]

        # targets, all constant w.r.t. the parameters being updated
        q_hat = r * inv_api + cfg.gamma * forward(self.v_target, s2)
        offset = entropy_offset(self._offset_mode(), logp, self.action_dim)
        v_hat = self._v_target(q_min, logp, offset, k)

        # critic regression on the stored actions
        sa_b = np.concatenate([s, a], axis=1)
        g_q1, loss_q1 = _critic_gradients(self.q1, sa_b, q_hat, self._g["q1"])
        g_q2, loss_q2 = _critic_gradients(self.q2, sa_b, q_hat, self._g["q2"])
        g_v, loss_v = _critic_gradients(self.v, s, v_hat, self._g["v"])

        # policy: minimize mean(log pi - min_i Q_i(s, a~pi))
        up1, up2 = _min_upstreams(q1_pi, q2_pi, -1.0 / m, dt)
        d_in = input_gradient_from_cache(self.q1, c1, up1)
        d_in += input_gradient_from_cache(self.q2, c2, up2)
        g_pi = _policy_gradients(self.policy, tr, d_in[:, self.state_dim:], m,
                                 self._g["policy"])

        adam_step(self.q1, self.adam_q1, g_q1, "q1")
        adam_step(self.q2, self.adam_q2, g_q2, "q2")
        adam_step(self.v, self.adam_v, g_v, "v")
        adam_step(self.policy.trunk, self.adam_policy, g_pi, "policy")
        ema_update(self.v_target, self.v, cfg.tau_ema)

        diag = {
            "loss_q1": loss_q1,
            "loss_q2": loss_q2,
            "loss_v": loss_v,
            "loss_policy": float(np.mean(logp - q_min)),
            "entropy": float(-np.mean(logp)),
            "offset": offset,
            "policy_grad_norm": g_pi.norm(),
        }
        _check_losses(self.name, {k: v for k, v in diag.items() if k.startswith("loss")},
                      {"q_hat": q_hat, "v_hat": v_hat, "log_prob": logp})
        if with_trace:
            diag["trace"] = {
                "q_hat": q_hat, "v_hat": v_hat, "fresh_action": tr.action,
                "fresh_log_prob": tr.log_prob, "q_min": q_min,
                "q1_pi": q1_pi, "q2_pi": q2_pi, "offset": offset,
                "noise": tr.noise,
            }
            diag["grads"] = {"q1": g_q1, "q2": g_q2, "v": g_v, "policy": g_pi}
        return diag

    def _offset_mode(self) -> str:
        return self.cfg.resolved_offset_mode()

    # -- acting ---------------------------------------------------------
    def behavior_policy(self) -> SquashedGaussianPolicy:
        return self.policy

    def act(self, state: np.ndarray, rng: np.random.Generator | None,
            mode: str = "explore") -> np.ndarray:
        s = np.asarray(state, dtype=self.cfg.np_dtype())[None, :]
        if mode == "explore":
            return sample(self.behavior_policy(), s, rng).action[0]
        if mode == "evaluate":
            return mean_action(self.behavior_policy(), s)[0]
        raise ValueError(f"unknown act mode {mode!r}")

    # -- probe surface ----------------------------------------------------
    @property
    def probe_critic(self) -> MlpNet:
        """Single critic used by diagnostic probes (cross-sections, region
        values, action-gradient norms)."""
        return self.q1


class MmeAgent(SacAgent):
    """Max-min entropy agent: the critic estimates the reversed soft
    value (low-entropy states score high) while the policy update still
    raises the entropy of visited states."""

    name = "mme"
    reversed_entropy = True

    def _v_target(self, q_min, log_probs, offset, k):
        return q_min + k * (log_probs + offset)


@dataclass
class _NetPack:
    net: MlpNet
    adam: nn.AdamState


class DemmeAgent:
    """Disentangled MME for rewarded tasks.

    Two squashed-Gaussian policies: an exploration policy trained purely
    on the entropy critic, and a target policy (the one that acts) trained
    on the sum of the reward critic and the entropy critic. Each critic
    pair has its own state-value net and EMA target.
    """

    name = "demme"
    reversed_entropy = True

    def __init__(self, state_dim: int, action_dim: int, cfg: AgentConfig,
                 init_rng: np.random.Generator):
        cfg.validate()
        self.cfg = cfg
        self.state_dim = state_dim
        self.action_dim = action_dim
        dt = cfg.np_dtype()
        hs = cfg.hidden_sizes
        self.policy_t = make_policy(state_dim, action_dim, hs, init_rng, dtype=dt)
        self.policy_e = make_policy(state_dim, action_dim, hs, init_rng, dtype=dt)
        mk = lambda in_dim: nn.init_mlp(in_dim, 1, hs, init_rng, dtype=dt)
        self.q_rr1, self.q_rr2 = mk(state_dim + action_dim), mk(state_dim + action_dim)
        self.q_re1, self.q_re2 = mk(state_dim + action_dim), mk(state_dim + action_dim)
        self.v_rr = mk(state_dim)
        self.v_re = mk(state_dim)
        self.v_rr_target = self.v_rr.copy()
        self.v_re_target = self.v_re.copy()
        self.adam_policy_t = adam_init(self.policy_t.trunk, cfg.lr)
        self.adam_policy_e = adam_init(self.policy_e.trunk, cfg.lr)
        self.adam_q_rr1 = adam_init(self.q_rr1, cfg.lr)
        self.adam_q_rr2 = adam_init(self.q_rr2, cfg.lr)
        self.adam_q_re1 = adam_init(self.q_re1, cfg.lr)
        self.adam_q_re2 = adam_init(self.q_re2, cfg.lr)
        self.adam_v_rr = adam_init(self.v_rr, cfg.lr)
        self.adam_v_re = adam_init(self.v_re, cfg.lr)
        self.twin_reduce = np.minimum
        self._g = {name: nn.Gradients.zeros_like(net) for name, net in
                   (("q_rr1", self.q_rr1), ("q_rr2", self.q_rr2),
                    ("q_re1", self.q_re1), ("q_re2", self.q_re2),
                    ("v_rr", self.v_rr), ("v_re", self.v_re),
                    ("policy_t", self.policy_t.trunk),
                    ("policy_e", self.policy_e.trunk))}

    def update(self, batch: Batch, rng: np.random.Generator,
               with_trace: bool = False) -> dict:
        cfg = self.cfg
        m = len(batch)
        s, a, r, s2 = batch.states, batch.actions, batch.rewards, batch.next_states
        inv_api = 1.0 / cfg.alpha_pi
        k = cfg.alpha_q / cfg.alpha_pi
        dt = s.dtype
        mode = cfg.resolved_offset_mode()

        tr_t = sample_trace(self.policy_t, s, rng)
        tr_e = sample_trace(self.policy_e, s, rng)
        sa_t = np.concatenate([s, tr_t.action], axis=1)
        sa_e = np.concatenate([s, tr_e.action], axis=1)

        q_rr1_t, c_rr1_t = forward_cached(self.q_rr1, sa_t)
        q_rr2_t, c_rr2_t = forward_cached(self.q_rr2, sa_t)
        q_rr_min_t = self.twin_reduce(q_rr1_t, q_rr2_t)
        q_re1_t, c_re1_t = forward_cached(self.q_re1, sa_t)
        q_re2_t, c_re2_t = forward_cached(self.q_re2, sa_t)
        q_re_min_t = self.twin_reduce(q_re1_t, q_re2_t)
        q_re1_e, c_re1_e = forward_cached(self.q_re1, sa_e)
        q_re2_e, c_re2_e = forward_cached(self.q_re2, sa_e)
        q_re_min_e = self.twin_reduce(q_re1_e, q_re2_e)

        logp_t = tr_t.log_prob[:, None]
        logp_e = tr_e.log_prob[:, None]

        # targets: reward critics carry the scaled reward, entropy critics
        # carry only the discounted reversed-entropy value
        q_rr_hat = r * inv_api + cfg.gamma * forward(self.v_rr_target, s2)
        q_re_hat = cfg.gamma * forward(self.v_re_target, s2)
        v_rr_hat = q_rr_min_t
        offset = entropy_offset(mode, logp_e, self.action_dim)
        v_re_hat = q_re_min_e + k * (logp_e + offset)

        sa_b = np.concatenate([s, a], axis=1)
        g_q_rr1, loss_q_rr1 = _critic_gradients(self.q_rr1, sa_b, q_rr_hat, self._g["q_rr1"])
        g_q_rr2, loss_q_rr2 = _critic_gradients(self.q_rr2, sa_b, q_rr_hat, self._g["q_rr2"])
        g_q_re1, loss_q_re1 = _critic_gradients(self.q_re1, sa_b, q_re_hat, self._g["q_re1"])
        g_q_re2, loss_q_re2 = _critic_gradients(self.q_re2, sa_b, q_re_hat, self._g["q_re2"])
        g_v_rr, loss_v_rr = _critic_gradients(self.v_rr, s, v_rr_hat, self._g["v_rr"])
        g_v_re, loss_v_re = _critic_gradients(self.v_re, s, v_re_hat, self._g["v_re"])

        # exploration policy: minimize mean(log pi_e - min Q_re(s, a~pi_e))
        up1, up2 = _min_upstreams(q_re1_e, q_re2_e, -1.0 / m, dt)
        d_in_e = input_gradient_from_cache(self.q_re1, c_re1_e, up1)
        d_in_e += input_gradient_from_cache(self.q_re2, c_re2_e, up2)
        g_pi_e = _policy_gradients(self.policy_e, tr_e, d_in_e[:, self.state_dim:], m,
                                   self._g["policy_e"])

        # target policy: minimize mean(log pi_t - min Q_rr - min Q_re at a~pi_t)
        up1, up2 = _min_upstreams(q_rr1_t, q_rr2_t, -1.0 / m, dt)
        d_in_t = input_gradient_from_cache(self.q_rr1, c_rr1_t, up1)
        d_in_t += input_gradient_from_cache(self.q_rr2, c_rr2_t, up2)
        up1, up2 = _min_upstreams(q_re1_t, q_re2_t, -1.0 / m, dt)
        d_in_t += input_gradient_from_cache(self.q_re1, c_re1_t, up1)
        d_in_t += input_gradient_from_cache(self.q_re2, c_re2_t, up2)
        g_pi_t = _policy_gradients(self.policy_t, tr_t, d_in_t[:, self.state_dim:], m,
                                   self._g["policy_t"])

        adam_step(self.q_rr1, self.adam_q_rr1, g_q_rr1, "q_rr1")
        adam_step(self.q_rr2, self.adam_q_rr2, g_q_rr2, "q_rr2")
        adam_step(self.q_re1, self.adam_q_re1, g_q_re1, "q_re1")
        adam_step(self.q_re2, self.adam_q_re2, g_q_re2, "q_re2")
        adam_step(self.v_rr, self.adam_v_rr, g_v_rr, "v_rr")
        adam_step(self.v_re, self.adam_v_re, g_v_re, "v_re")
        adam_step(self.policy_t.trunk, self.adam_policy_t, g_pi_t, "policy_t")
        adam_step(self.policy_e.trunk, self.adam_policy_e, g_pi_e, "policy_e")
        ema_update(self.v_rr_target, self.v_rr, cfg.tau_ema)
        ema_update(self.v_re_target, self.v_re, cfg.tau_ema)

        diag = {
            "loss_q_rr1": loss_q_rr1, "loss_q_rr2": loss_q_rr2,
            "loss_q_re1": loss_q_re1, "loss_q_re2": loss_q_re2,
            "loss_v_rr": loss_v_rr, "loss_v_re": loss_v_re,
            "loss_policy_t": float(np.mean(logp_t - q_rr_min_t - q_re_min_t)),
            "loss_policy_e": float(np.mean(logp_e - q_re_min_e)),
            "entropy": float(-np.mean(logp_t)),
            "entropy_explore": float(-np.mean(logp_e)),
            "offset": offset,
            "policy_grad_norm": g_pi_t.norm(),
        }
        _check_losses(self.name, {k: v for k, v in diag.items() if k.startswith("loss")},
                      {"q_rr_hat": q_rr_hat, "q_re_hat": q_re_hat,
                       "v_re_hat": v_re_hat, "log_prob_e": logp_e})
        if with_trace:
            diag["trace"] = {
                "q_rr_hat": q_rr_hat, "q_re_hat": q_re_hat,
                "v_rr_hat": v_rr_hat, "v_re_hat": v_re_hat,
                "action_t": tr_t.action, "action_e": tr_e.action,
                "log_prob_t": tr_t.log_prob, "log_prob_e": tr_e.log_prob,
                "offset": offset, "noise_t": tr_t.noise, "noise_e": tr_e.noise,
            }
            diag["grads"] = {
                "q_rr1": g_q_rr1, "q_rr2": g_q_rr2, "q_re1": g_q_re1,
                "q_re2": g_q_re2, "v_rr": g_v_rr, "v_re": g_v_re,
                "policy_t": g_pi_t, "policy_e": g_pi_e,
            }
        return diag

    def behavior_policy(self) -> SquashedGaussianPolicy:
        return self.policy_t

    act = SacAgent.act

    @property
    def probe_critic(self) -> MlpNet:
        # the reward critic; the entropy critic is probed separately if needed
        return self.q_rr1

    @property
    def policy(self) -> SquashedGaussianPolicy:
        return self.policy_t


class UniformAgent:
    """Non-learning baseline acting uniformly on the action box."""

    name = "uniform"

    def __init__(self, state_dim: int, action_dim: int, cfg: AgentConfig,
                 init_rng=None):
        self.cfg = cfg
        self.state_dim = state_dim
        self.action_dim = action_dim
        self.policy = UniformPolicy(action_dim)
        self.probe_critic = None

    def update(self, batch, rng, with_trace: bool = False) -> dict:
        return {}

    def behavior_policy(self) -> UniformPolicy:
        return self.policy

    def act(self, state, rng, mode: str = "explore") -> np.ndarray:
        if mode == "explore":
            return rng.uniform(-1.0, 1.0, size=self.action_dim)
        if mode == "evaluate":
            # no distribution mean exists; evaluation is a fixed null action
            return np.zeros(self.action_dim)
        raise ValueError(f"unknown act mode {mode!r}")


def make_agent(state_dim: int, action_dim: int, cfg: AgentConfig,
               init_rng: np.random.Generator):
    cfg.validate()
    cls = {"sac": SacAgent, "mme": MmeAgent, "demme": DemmeAgent,
           "uniform": UniformAgent}[cfg.algorithm]
    return cls(state_dim, action_dim, cfg, init_rng)


def intrinsic_reward_view(agent, next_state: np.ndarray, rng: np.random.Generator,
                          n_samples: int = 100) -> float:
    """Diagnostic only: -(alpha_q + alpha_pi) * gamma * H(pi(.|s')), the
    implicit exploration bonus the reversed critic injects relative to the
    standard one. Never trained on."""
    cfg = agent.cfg
    h = empirical_entropy(agent.behavior_policy(), np.asarray(next_state)[None, :],
                          n_samples, rng)
    return -(cfg.alpha_q + cfg.alpha_pi) * cfg.gamma * h


def neural_soft_evaluation(mdp: TabularMdp, policy_table: np.ndarray, alpha: float,
                           reversed_entropy: bool = False,
                           hidden_sizes=(64, 64), lr: float = 3e-4,
                           tau_ema: float = 0.005, train_steps: int = 40_000,
                           batch_size: int = 128, n_transitions: int = 20_000,
                           seed: int = 0) -> np.ndarray:
    """Soft policy evaluation with function approximation on a finite MDP.

    States and actions are one-hot encoded; a single Q net regresses on
    r + gamma * V_target(s') over sampled transitions while V regresses on
    the exact action expectation of Q -/+ alpha * log pi. Returns the
    (S, A) table of learned Q values for comparison against the exact
    fixed point.
    """
    rng = np.random.default_rng(seed)
    n_s, n_a = mdp.n_states, mdp.n_actions
    eye_s = np.eye(n_s)
    eye_a = np.eye(n_a)
    q_net = nn.init_mlp(n_s + n_a, 1, hidden_sizes, rng)
    v_net = nn.init_mlp(n_s, 1, hidden_sizes, rng)
    v_tgt = v_net.copy()
    ad_q = adam_init(q_net, lr)
    ad_v = adam_init(v_net, lr)

    # sampled experience under the fixed policy
    ss = rng.integers(0, n_s, size=n_transitions)
    aa = np.array([rng.choice(n_a, p=policy_table[s]) for s in ss])
    s2 = np.array([rng.choice(n_s, p=mdp.transitions[s, a]) for s, a in zip(ss, aa)])
    rr = mdp.rewards[ss, aa]

    with np.errstate(divide="ignore"):
        logpi = np.where(policy_table > 0.0,
                         np.log(np.maximum(policy_table, 1e-300)), 0.0)
    sign = 1.0 if reversed_entropy else -1.0

    all_sa = np.concatenate([np.repeat(eye_s, n_a, axis=0),
                             np.tile(eye_a, (n_s, 1))], axis=1)
    for _ in range(train_steps):
        idx = rng.integers(0, n_transitions, size=batch_size)
        sb, ab, s2b, rb = ss[idx], aa[idx], s2[idx], rr[idx]
        x_q = np.concatenate([eye_s[sb], eye_a[ab]], axis=1)
        q_hat = rb[:, None] + mdp.gamma * forward(v_tgt, eye_s[s2b])
        g_q, _ = _critic_gradients(q_net, x_q, q_hat)
        # exact expectation over the (few) actions for the V target
        q_all = forward(q_net, all_sa).reshape(n_s, n_a)
        v_hat_all = np.sum(policy_table * (q_all + sign * alpha * logpi), axis=1)
        g_v, _ = _critic_gradients(v_net, eye_s[sb], v_hat_all[sb][:, None])
        adam_step(q_net, ad_q, g_q, "q")
        adam_step(v_net, ad_v, g_v, "v")
        ema_update(v_tgt, v_net, tau_ema)
    return forward(q_net, all_sa).reshape(n_s, n_a)
