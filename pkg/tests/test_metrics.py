"""Metrics tests: visitation counting against a set oracle, probe math
against closed forms and finite differences, cross-section identities."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from maxminrl import nn
from maxminrl.metrics import (RegionProbeSpec, VisitationGrid,
                              action_line_cross_section, critic_cross_section_fn,
                              log_prob_cross_section_fn, q_grad_norm_probe,
                              region_entropy, region_q_difference)
from maxminrl.policy import uniform_policy, make_policy
from test_policy import constant_policy


def test_visit_same_cell_counts_once():
    g = VisitationGrid()
    g.record(0, (0.2, 0.3))
    g.record(1, (0.7, 0.9))
    assert g.unique_count == 1
    g.record(2, (1.5, 0.7))
    assert g.unique_count == 2


def test_visit_matches_set_oracle():
    g = VisitationGrid()
    rng = np.random.default_rng(0)
    states = rng.uniform(0, 100, size=(100_000, 2))
    seen = set()
    for i, s in enumerate(states):
        g.record(i, s)
        seen.add((int(s[0]), int(s[1])))
    assert g.unique_count == len(seen)


def test_visit_monotone_and_boundary_cell():
    g = VisitationGrid()
    g.record(0, (100.0, 100.0))  # boundary folds into the last cell
    assert g.occupied[99, 99]
    last = 0
    rng = np.random.default_rng(1)
    for i in range(1000):
        g.record(i, rng.uniform(0, 100, 2))
        assert g.unique_count >= last
        last = g.unique_count


def test_visit_out_of_bounds_rejected():
    g = VisitationGrid()
    with pytest.raises(ValueError, match="outside"):
        g.record(0, (-0.1, 5.0))
    with pytest.raises(ValueError):
        g.record(0, (5.0, 100.2))


def test_histogram_windows():
    g = VisitationGrid(windows=((10, 5), (20, 5)))
    for step in range(30):
        g.record(step, (step + 0.5, 0.5))
    h1 = g.histogram(10)
    assert h1.sum() == 5
    assert all(h1[s, 0] == 1 for s in range(10, 15))
    # replayed-trajectory recount oracle
    recount = np.zeros_like(h1)
    for step in range(30):
        if 20 <= step < 25:
            recount[step, 0] += 1
    assert np.array_equal(g.histogram(20), recount)
    assert g.histogram(10).sum() == 5
    with pytest.raises(KeyError):
        g.histogram(11)


def test_overlapping_windows_rejected():
    with pytest.raises(ValueError, match="overlap"):
        VisitationGrid(windows=((0, 10), (5, 10)))


def test_empty_window_all_zero():
    g = VisitationGrid(windows=((1000, 10),))
    g.record(0, (3.3, 4.4))
    assert g.histogram(1000).sum() == 0


def zero_critic(state_dim=2, action_dim=2):
    net = nn.init_mlp(state_dim + action_dim, 1, [4], 0)
    net.flat[...] = 0.0
    return net


def linear_action_critic(w, state_dim=2):
    # Q(s, a) = w . a as a single linear layer
    weights = np.zeros((1, state_dim + len(w)))
    weights[0, state_dim:] = w
    return nn.MlpNet([weights], [np.zeros(1)])


def test_q_grad_norm_zero_and_linear():
    policy = uniform_policy(2)
    states = np.random.default_rng(0).uniform(0, 100, (64, 2))
    assert q_grad_norm_probe(zero_critic(), policy, states,
                             np.random.default_rng(1)) == 0.0
    w = np.array([0.6, -0.8])
    probe = q_grad_norm_probe(linear_action_critic(w), policy, states,
                              np.random.default_rng(1))
    assert_allclose(probe, 1.0, rtol=1e-12)  # ||w|| = 1


def test_q_grad_norm_matches_finite_differences():
    rng = np.random.default_rng(3)
    critic = nn.init_mlp(4, 1, [16, 8], rng)
    policy = make_policy(2, 2, [8], rng)
    states = rng.uniform(0, 100, (32, 2))
    probe_rng = np.random.default_rng(7)
    probe = q_grad_norm_probe(critic, policy, states, probe_rng)

    # recompute with fixed actions and central differences on the inputs
    from maxminrl.policy import sample
    actions = sample(policy, states, np.random.default_rng(7)).action
    h = 1e-5
    norms = []
    for s, a in zip(states, actions):
        grad = np.zeros(2)
        for d in range(2):
            ap = a.copy(); ap[d] += h
            am = a.copy(); am[d] -= h
            up = nn.forward(critic, np.concatenate([s, ap])[None, :])[0, 0]
            dn = nn.forward(critic, np.concatenate([s, am])[None, :])[0, 0]
            grad[d] = (up - dn) / (2 * h)
        norms.append(np.linalg.norm(grad))
    assert abs(probe - np.mean(norms)) / probe < 1e-4


def test_region_q_difference_centering_and_order():
    spec = RegionProbeSpec()
    spec.validate(100.0, 100.0)
    policy = uniform_policy(2)
    rng = np.random.default_rng(0)
    vals = region_q_difference(zero_critic(), policy, spec, rng)
    assert_allclose(vals, np.zeros(4), atol=1e-12)
    # critic equal to the x coordinate: regions ordered by center x
    weights = np.zeros((1, 4))
    weights[0, 0] = 1.0
    critic = nn.MlpNet([weights], [np.zeros(1)])
    vals = region_q_difference(critic, policy, spec, np.random.default_rng(1))
    assert np.all(np.diff(vals) > 0)
    assert abs(vals.sum()) < 1e-9
    expected = np.array([5.0, 10.0, 20.0, 30.0])
    assert_allclose(vals, expected - expected.mean(), atol=0.15)


def test_region_probe_bounds_validation():
    spec = RegionProbeSpec(regions=((0.5, 50.0, 2.0),))
    with pytest.raises(ValueError, match="bounds"):
        spec.validate(100.0, 100.0)


def test_region_entropy_uniform_and_constant_policy():
    spec = RegionProbeSpec(samples_per_region=500)
    vals = region_entropy(uniform_policy(2), spec, np.random.default_rng(0))
    assert_allclose(vals, np.full(4, np.log(4.0)), rtol=1e-12)
    # state-independent squashed policy: all regions equal within noise
    pol = constant_policy(2, [0.2, -0.1], [-0.3, -0.3])
    vals = region_entropy(pol, spec, np.random.default_rng(1))
    assert np.max(vals) - np.min(vals) < 0.2
    # doubled-sample self-consistency within 3 combined standard errors
    big = RegionProbeSpec(samples_per_region=4000)
    v1 = region_entropy(pol, big, np.random.default_rng(2))
    v2 = region_entropy(pol, big, np.random.default_rng(3))
    assert np.all(np.abs(v1 - v2) < 0.1)


def test_cross_section_identities():
    state = np.array([5.0, 5.0])
    t, vals = action_line_cross_section(lambda s, a: np.full(len(a), 3.3), state, 101)
    assert_allclose(vals, np.zeros(101), atol=1e-12)
    t, vals = action_line_cross_section(lambda s, a: a[:, 0] + a[:, 1], state, 101)
    assert abs(vals.mean()) < 1e-12
    assert_allclose(vals, -vals[::-1], atol=1e-12)  # odd ramp about center
    assert vals[0] < 0 < vals[-1]
    assert t[0] == 0.0 and t[-1] == 1.0


def test_cross_section_fns_finite_on_inset_grid():
    rng = np.random.default_rng(5)
    critic = nn.init_mlp(4, 1, [8], rng)
    policy = make_policy(2, 2, [8], rng)
    state = np.array([5.0, 5.0])
    _, qv = action_line_cross_section(critic_cross_section_fn(critic), state, 51)
    _, lv = action_line_cross_section(log_prob_cross_section_fn(policy), state, 51)
    assert np.all(np.isfinite(qv)) and np.all(np.isfinite(lv))
    assert abs(qv.mean()) < 1e-9 and abs(lv.mean()) < 1e-9
