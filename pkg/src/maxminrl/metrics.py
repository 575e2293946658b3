"""Exploration diagnostics: quantized state-visitation counting, windowed
visit histograms, action-gradient norms of the critic, per-region critic
value and entropy probes, and diagonal action-line cross-sections.

CSV emission lives in the runner; the schemas are:
  visits.csv        step, unique_cells
  probes.csv        step, probe, key, value
  hist_<start>.csv  cell_x, cell_y, count
  xsec_<step>.csv   region, t, q_centered, logpi_centered
  returns.csv       step, mean_eval_return
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .nn import MlpNet, forward, forward_cached, input_gradient_from_cache
from .policy import SquashedGaussianPolicy, log_prob, sample, empirical_entropy


class VisitationGrid:
    """Occupancy over nonoverlapping 1x1 cells plus optional windowed
    per-cell visit counters.

    The cumulative unique-cell count is monotone non-decreasing; window
    counters accumulate every recorded state whose step index falls in
    [start, start + length).
    """

    def __init__(self, width: int = 100, height: int = 100,
                 windows: tuple[tuple[int, int], ...] = ()):
        self.width = int(width)
        self.height = int(height)
        self.occupied = np.zeros((self.width, self.height), dtype=bool)
        self.unique_count = 0
        spans = sorted(windows)
        for (s1, l1), (s2, l2) in zip(spans, spans[1:]):
            if s1 + l1 > s2:
                raise ValueError(f"histogram windows overlap: {(s1, l1)} and {(s2, l2)}")
        self.windows = [(int(s), int(l), np.zeros((self.width, self.height), dtype=np.int64))
                        for s, l in spans]

    def cell_of(self, state) -> tuple[int, int]:
        x, y = float(state[0]), float(state[1])
        if not (0.0 <= x <= self.width and 0.0 <= y <= self.height):
            raise ValueError(f"state ({x}, {y}) outside the visitation bounds")
        # the boundary point x == width falls into the last cell
        return min(int(x), self.width - 1), min(int(y), self.height - 1)

    def record(self, step: int, state) -> None:
        ix, iy = self.cell_of(state)
        if not self.occupied[ix, iy]:
            self.occupied[ix, iy] = True
            self.unique_count += 1
        for start, length, counts in self.windows:
            if start <= step < start + length:
                counts[ix, iy] += 1
                break

    def histogram(self, window_start: int) -> np.ndarray:
        for start, _, counts in self.windows:
            if start == window_start:
                return counts.copy()
        raise KeyError(f"no histogram window starting at {window_start}")


@dataclass
class RegionProbeSpec:
    """Square probe regions given as (center_x, center_y, side)."""

    regions: tuple = ((5.0, 5.0, 2.0), (10.0, 10.0, 2.0),
                      (20.0, 20.0, 2.0), (30.0, 30.0, 2.0))
    samples_per_region: int = 1000
    period: int = 1000

    def validate(self, width: float, height: float) -> None:
        for cx, cy, side in self.regions:
            h = side / 2.0
            if not (0.0 <= cx - h and cx + h <= width and 0.0 <= cy - h and cy + h <= height):
                raise ValueError(f"probe region ({cx}, {cy}, {side}) leaves the state bounds")

    def sample_states(self, region_index: int, rng: np.random.Generator) -> np.ndarray:
        cx, cy, side = self.regions[region_index]
        h = side / 2.0
        return rng.uniform([cx - h, cy - h], [cx + h, cy + h],
                           size=(self.samples_per_region, 2))


def q_grad_norm_probe(critic: MlpNet, policy, states: np.ndarray,
                      rng: np.random.Generator) -> float:
    """Mean Euclidean norm of dQ/da at a ~ pi(.|s) over the given states."""
    states = np.asarray(states)
    actions = (sample(policy, states, rng).action
               if isinstance(policy, SquashedGaussianPolicy)
               else policy.sample(states, rng).action)
    sa = np.concatenate([states, actions], axis=1).astype(critic.dtype)
    out, cache = forward_cached(critic, sa)
    d_in = input_gradient_from_cache(critic, cache, np.ones_like(out))
    d_a = d_in[:, states.shape[1]:]
    return float(np.mean(np.sqrt(np.sum(np.square(d_a), axis=1))))


def region_q_difference(critic: MlpNet, policy, spec: RegionProbeSpec,
                        rng: np.random.Generator) -> np.ndarray:
    """Per-region mean Q over (uniform state, a ~ pi) samples, centered by
    subtracting the across-region mean; the outputs sum to zero."""
    means = []
    for i in range(len(spec.regions)):
        states = spec.sample_states(i, rng)
        actions = (sample(policy, states, rng).action
                   if isinstance(policy, SquashedGaussianPolicy)
                   else policy.sample(states, rng).action)
        sa = np.concatenate([states, actions], axis=1).astype(critic.dtype)
        means.append(float(np.mean(forward(critic, sa))))
    means = np.array(means)
    return means - means.mean()


def region_entropy(policy, spec: RegionProbeSpec, rng: np.random.Generator,
                   n_samples: int = 1) -> np.ndarray:
    """Per-region empirical policy entropy over the spec's state samples."""
    return np.array([empirical_entropy(policy, spec.sample_states(i, rng),
                                       n_samples, rng)
                     for i in range(len(spec.regions))])


def action_line_cross_section(fn, state, n_points: int = 201,
                              inset: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate fn(states, actions) along the action diagonal from
    (-1,-1) to (1,1) at a fixed state, mean-centered.

    The endpoints are inset so log-density cross-sections stay on the
    open action box; the same grid is shared by critic cross-sections so
    both columns align on one t axis. Returns (t in [0,1], centered values).
    """
    t = np.linspace(0.0, 1.0, n_points)
    coord = (-1.0 + 2.0 * t) * (1.0 - inset)
    actions = np.stack([coord, coord], axis=1)
    states = np.tile(np.asarray(state, dtype=float)[None, :], (n_points, 1))
    values = np.asarray(fn(states, actions), dtype=float).reshape(n_points)
    return t, values - values.mean()


def critic_cross_section_fn(critic: MlpNet):
    def fn(states, actions):
        sa = np.concatenate([states, actions], axis=1).astype(critic.dtype)
        return forward(critic, sa)[:, 0]
    return fn


def log_prob_cross_section_fn(policy: SquashedGaussianPolicy):
    def fn(states, actions):
        return log_prob(policy, states.astype(policy.trunk.dtype), actions)
    return fn
