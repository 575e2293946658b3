"""Runner tests: seeded byte-identical reruns, CSV schemas, evaluation,
aggregation math, sweeps, CLI exit contracts."""

import json
import os

import numpy as np
import pytest
from numpy.testing import assert_allclose

from maxminrl.cli import main as cli_main
from maxminrl.config import ExperimentConfig, save_config
from maxminrl.runner import (RunResult, aggregate_runs, evaluate_agent, make_env,
                             read_csv_columns, run_experiment, sweep_axis)


def tiny_config(algorithm="sac", env_kind="maze", steps=400):
    cfg = ExperimentConfig()
    cfg.env.kind = env_kind
    cfg.agent.algorithm = algorithm
    cfg.agent.hidden_sizes = (16, 16)
    cfg.agent.batch_size = 32
    cfg.run.total_env_steps = steps
    cfg.run.episode_length = 200
    cfg.run.eval_period = 200
    cfg.run.eval_episodes = 2
    cfg.run.visit_log_period = 100
    cfg.probes.period = 200
    cfg.probes.samples_per_region = 50
    cfg.probes.cross_section_period = 400
    cfg.probes.cross_section_points = 21
    return cfg


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


def test_seeded_rerun_byte_identical(tmp_path):
    cfg = tiny_config()
    r1 = run_experiment(cfg, 7, tmp_path / "a")
    r2 = run_experiment(cfg, 7, tmp_path / "b")
    for name in ("visits.csv", "probes.csv", "returns.csv", "xsec_400.csv",
                 "config.txt"):
        assert read_bytes(tmp_path / "a" / name) == read_bytes(tmp_path / "b" / name), name
    assert r1.final_unique_cells == r2.final_unique_cells
    r3 = run_experiment(cfg, 8, tmp_path / "c")
    assert read_bytes(tmp_path / "a" / "visits.csv") != read_bytes(tmp_path / "c" / "visits.csv")


def test_uniform_run_monotone_visits(tmp_path):
    cfg = tiny_config("uniform", steps=2000)
    cfg.run.eval_episodes = 0
    res = run_experiment(cfg, 0, tmp_path / "u")
    cols = read_csv_columns(tmp_path / "u" / "visits.csv")
    uniq = [int(v) for v in cols["unique_cells"]]
    assert all(b >= a for a, b in zip(uniq, uniq[1:]))
    assert uniq[-1] == res.final_unique_cells
    assert int(cols["step"][0]) == 0 and int(cols["step"][-1]) == 2000
    # no probes for the critic-free baseline beyond nothing at all
    probes = read_csv_columns(tmp_path / "u" / "probes.csv")
    assert probes["step"] == []


def test_run_result_max_of_series(tmp_path):
    cfg = tiny_config(env_kind="pointgoal")
    res = run_experiment(cfg, 1, tmp_path / "p")
    assert res.max_eval_return == max(res.eval_returns)
    cols = read_csv_columns(tmp_path / "p" / "returns.csv")
    assert [int(s) for s in cols["step"]] == res.eval_steps
    assert_allclose([float(v) for v in cols["mean_eval_return"]], res.eval_returns)


def test_evaluation_deterministic_and_isolated():
    cfg = tiny_config(env_kind="pointgoal")
    env = make_env(cfg.env)
    from maxminrl.agents import make_agent
    agent = make_agent(env.state_dim, env.action_dim, cfg.agent,
                       np.random.default_rng(0))
    r1 = evaluate_agent(agent, cfg.env, 3, 50)
    r2 = evaluate_agent(agent, cfg.env, 3, 50)
    assert r1 == r2


def test_delayed_env_wiring(tmp_path):
    cfg = tiny_config("uniform", env_kind="delayed", steps=400)
    cfg.env.inner = "pointgoal"
    cfg.env.delay = 5
    cfg.run.eval_episodes = 1
    res = run_experiment(cfg, 0, tmp_path / "d")
    assert isinstance(res, RunResult)


def test_custom_walls_config_builds_layout():
    cfg = tiny_config()
    cfg.env.walls = ((10.0, 12.0, 0.0, 40.0), (10.0, 12.0, 60.0, 100.0))
    env = make_env(cfg.env)
    assert len(env.layout.walls) == 2
    assert env.layout.in_wall(11.0, 20.0)
    assert not env.layout.in_wall(11.0, 50.0)  # the gap stays open
    # a sealing wall set is rejected by the flood fill at construction
    cfg.env.walls = ((10.0, 12.0, 0.0, 100.0),)
    with pytest.raises(ValueError, match="unreachable"):
        make_env(cfg.env)


def test_aggregate_math(tmp_path):
    for i, vals in enumerate(((0.0, 0.0), (2.0, 2.0))):
        d = tmp_path / f"seed{i}"
        os.makedirs(d)
        with open(d / "visits.csv", "w") as f:
            f.write("step,unique_cells\n")
            for step, v in zip((0, 100), vals):
                f.write(f"{step},{v}\n")
    out = tmp_path / "agg.csv"
    aggregate_runs(tmp_path, out)
    cols = read_csv_columns(out)
    assert [float(v) for v in cols["mean_unique_cells"]] == [1.0, 1.0]
    assert_allclose([float(v) for v in cols["std_unique_cells"]],
                    [np.sqrt(2.0)] * 2, rtol=1e-12)

    # single run: zero spread
    single = tmp_path / "single"
    os.makedirs(single / "only", exist_ok=False)
    with open(single / "only" / "visits.csv", "w") as f:
        f.write("step,unique_cells\n0,5\n")
    aggregate_runs(single, tmp_path / "agg1.csv")
    cols = read_csv_columns(tmp_path / "agg1.csv")
    assert float(cols["std_unique_cells"][0]) == 0.0


def test_aggregate_three_seed_recomputation(tmp_path):
    # external recomputation with plain arithmetic on a 3-seed fixture
    data = {0: (10, 30), 1: (20, 60), 2: (60, 90)}
    for seed, vals in data.items():
        d = tmp_path / f"seed{seed}"
        os.makedirs(d)
        with open(d / "visits.csv", "w") as f:
            f.write("step,unique_cells\n")
            for step, v in zip((0, 50), vals):
                f.write(f"{step},{v}\n")
    aggregate_runs(tmp_path, tmp_path / "agg.csv")
    cols = read_csv_columns(tmp_path / "agg.csv")
    for i, step_vals in enumerate(((10, 20, 60), (30, 60, 90))):
        mean = sum(step_vals) / 3.0
        var = sum((v - mean) ** 2 for v in step_vals) / 2.0
        assert_allclose(float(cols[f"mean_unique_cells"][i]), mean)
        assert_allclose(float(cols[f"std_unique_cells"][i]), var ** 0.5)


def test_aggregate_misaligned_grids_rejected(tmp_path):
    for i, steps in enumerate(((0, 100), (0, 200))):
        d = tmp_path / f"seed{i}"
        os.makedirs(d)
        with open(d / "visits.csv", "w") as f:
            f.write("step,unique_cells\n")
            for s in steps:
                f.write(f"{s},1\n")
    with pytest.raises(ValueError, match="align"):
        aggregate_runs(tmp_path, tmp_path / "agg.csv")


def test_sweep_cardinality_and_unknown_axis(tmp_path):
    cfg = tiny_config("uniform", steps=200)
    cfg.run.eval_episodes = 0
    values = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0]
    results = sweep_axis(cfg, "agent.alpha_q", values, [0], tmp_path / "sweep")
    assert len(results) == 7
    rows = read_csv_columns(tmp_path / "sweep" / "summary.csv")
    assert len(rows["seed"]) == 7 * 1
    agg = read_csv_columns(tmp_path / "sweep" / "summary_agg.csv")
    assert len(agg["value"]) == 7
    with pytest.raises(KeyError, match="valid axes"):
        sweep_axis(cfg, "agent.bogus", [1], [0], tmp_path / "s2")


def test_sweep_single_value_equals_plain_run(tmp_path):
    cfg = tiny_config("sac", steps=400)
    sweep_axis(cfg, "agent.alpha_q", [1.0], [3], tmp_path / "sw")
    run_experiment(cfg, 3, tmp_path / "direct")
    a = read_bytes(tmp_path / "sw" / "alpha_q=1.0" / "seed3" / "visits.csv")
    b = read_bytes(tmp_path / "direct" / "visits.csv")
    assert a == b


def test_cli_run_and_error_contract(tmp_path, capsys):
    cfg = tiny_config("uniform", steps=200)
    cfg.run.eval_episodes = 0
    cfg_path = tmp_path / "c.txt"
    save_config(cfg, cfg_path)
    rc = cli_main(["run", "--config", str(cfg_path), "--seed", "0",
                   "--out", str(tmp_path / "out"),
                   "--set", "run.total_env_steps=200"])
    assert rc == 0
    assert (tmp_path / "out" / "visits.csv").exists()

    rc = cli_main(["run", "--config", str(tmp_path / "missing.txt"),
                   "--seed", "0", "--out", str(tmp_path / "out2")])
    assert rc != 0
    err = capsys.readouterr().err.strip().splitlines()[-1]
    payload = json.loads(err)
    assert "error" in payload and "message" in payload

    rc = cli_main(["run", "--config", str(cfg_path), "--seed", "0",
                   "--out", str(tmp_path / "out3"), "--set", "agent.bogus=1"])
    assert rc != 0


def test_cli_aggregate(tmp_path, capsys):
    d = tmp_path / "runs" / "seed0"
    os.makedirs(d)
    with open(d / "visits.csv", "w") as f:
        f.write("step,unique_cells\n0,1\n100,5\n")
    rc = cli_main(["aggregate", "--in", str(tmp_path / "runs"),
                   "--out", str(tmp_path / "agg.csv")])
    assert rc == 0
    assert (tmp_path / "agg.csv").exists()
