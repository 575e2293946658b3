"""Experiment execution: seeded training loops, deterministic evaluation,
parameter sweeps, and cross-seed aggregation.

One run is fully determined by (config, seed): the master seed spawns
independent streams for network initialization, training randomness
(behavior actions, fresh update draws, replay indices), environment use,
and probe sampling, so probe emission never perturbs training. Updates
begin once the buffer holds one full minibatch. CSVs are flushed as they
grow so an aborted run leaves usable partial output.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .agents import make_agent
from .config import ExperimentConfig, config_to_text, save_config
from .envs import ContinuousMaze, DelayedReward, MazeLayout, PointGoal, \
    SparseReward, WallRect
from .metrics import RegionProbeSpec, VisitationGrid, action_line_cross_section, \
    critic_cross_section_fn, log_prob_cross_section_fn, q_grad_norm_probe, \
    region_entropy, region_q_difference
from .replay import ReplayBuffer, Transition


@dataclass
class RunResult:
    out_dir: str
    eval_steps: list
    eval_returns: list
    max_eval_return: float
    final_unique_cells: int


def make_env(env_cfg):
    kind = env_cfg.kind
    if kind == "maze":
        if env_cfg.walls:
            layout = MazeLayout(env_cfg.width, env_cfg.height,
                                tuple(WallRect(*w) for w in env_cfg.walls))
        else:
            layout = MazeLayout(env_cfg.width, env_cfg.height)
        return ContinuousMaze(layout)
    if kind == "pointgoal":
        return PointGoal(width=env_cfg.width, height=env_cfg.height)
    if kind == "sparse":
        return SparseReward(make_env(_inner_cfg(env_cfg)), env_cfg.threshold, env_cfg.axis)
    if kind == "delayed":
        return DelayedReward(make_env(_inner_cfg(env_cfg)), env_cfg.delay)
    raise ValueError(f"unknown env kind {kind!r}")


def _inner_cfg(env_cfg):
    import copy
    inner = copy.deepcopy(env_cfg)
    inner.kind = env_cfg.inner
    return inner


def _fmt(value) -> str:
    return repr(float(value))


class _Csv:
    def __init__(self, path, header: str):
        self.f = open(path, "w")
        self.f.write(header + "\n")
        self.f.flush()

    def row(self, *cells) -> None:
        self.f.write(",".join(str(c) for c in cells) + "\n")
        self.f.flush()

    def close(self) -> None:
        self.f.close()


def evaluate_agent(agent, env_cfg, episodes: int, episode_length: int) -> float:
    """Mean return of deterministic-mode episodes on a fresh environment;
    never touches the replay buffer."""
    if episodes == 0:
        return 0.0
    env = make_env(env_cfg)
    totals = []
    for _ in range(episodes):
        state = env.reset()
        total = 0.0
        for t in range(episode_length):
            action = agent.act(state, None, "evaluate")
            es = env.step(action, final=(t == episode_length - 1))
            total += es.reward
            state = es.next_state
        totals.append(total)
    return float(np.mean(totals))


def run_experiment(cfg: ExperimentConfig, seed: int, out_dir) -> RunResult:
    cfg.validate()
    os.makedirs(out_dir, exist_ok=True)
    save_config(cfg, os.path.join(out_dir, "config.txt"))

    streams = np.random.SeedSequence(seed).spawn(4)
    init_rng = np.random.default_rng(streams[0])
    train_rng = np.random.default_rng(streams[1])
    _env_rng = np.random.default_rng(streams[2])  # reserved: envs are deterministic
    probe_rng = np.random.default_rng(streams[3])

    env = make_env(cfg.env)
    agent = make_agent(env.state_dim, env.action_dim, cfg.agent, init_rng)
    buffer = ReplayBuffer(cfg.agent.buffer_capacity, env.state_dim, env.action_dim,
                          dtype=cfg.agent.np_dtype())

    grid = VisitationGrid(int(cfg.env.width), int(cfg.env.height),
                          tuple((int(s), int(l)) for s, l in cfg.run.hist_windows))
    probe_spec = RegionProbeSpec(cfg.probes.regions, cfg.probes.samples_per_region,
                                 cfg.probes.period)
    probe_spec.validate(cfg.env.width, cfg.env.height)
    has_critics = agent.probe_critic is not None
    learn_start = cfg.agent.batch_size

    visits = _Csv(os.path.join(out_dir, "visits.csv"), "step,unique_cells")
    probes = _Csv(os.path.join(out_dir, "probes.csv"), "step,probe,key,value")
    returns = _Csv(os.path.join(out_dir, "returns.csv"), "step,mean_eval_return")

    eval_steps, eval_returns = [], []
    diag = {}
    try:
        state = env.reset()
        grid.record(0, state)
        visits.row(0, grid.unique_count)
        ep_step = 0
        total = cfg.run.total_env_steps
        for step in range(1, total + 1):
            action = agent.act(state, train_rng, "explore")
            final = ep_step == cfg.run.episode_length - 1
            es = env.step(action, final=final)
            buffer.push(Transition(state, action, es.reward, es.next_state, final))
            grid.record(step, es.next_state)
            if final:
                state = env.reset()
                ep_step = 0
            else:
                state = es.next_state
                ep_step += 1

            if buffer.size >= learn_start:
                for _ in range(cfg.agent.gradient_steps_per_env_step):
                    batch = buffer.sample(cfg.agent.batch_size, train_rng)
                    diag = agent.update(batch, train_rng)

            if step % cfg.run.visit_log_period == 0:
                visits.row(step, grid.unique_count)
            if step % cfg.probes.period == 0 and has_critics and buffer.size >= learn_start:
                _emit_probes(probes, step, agent, buffer, probe_spec, probe_rng,
                             cfg.agent.batch_size, diag)
            if cfg.probes.cross_section_period and has_critics \
                    and step % cfg.probes.cross_section_period == 0 \
                    and env.action_dim == 2:
                _emit_cross_sections(out_dir, step, agent, probe_spec,
                                     cfg.probes.cross_section_points)
            if step % cfg.run.eval_period == 0:
                ret = evaluate_agent(agent, cfg.env, cfg.run.eval_episodes,
                                     cfg.run.episode_length)
                returns.row(step, _fmt(ret))
                eval_steps.append(step)
                eval_returns.append(ret)

        for start, _, counts in grid.windows:
            hist = _Csv(os.path.join(out_dir, f"hist_{start}.csv"), "cell_x,cell_y,count")
            nz = np.argwhere(counts > 0)
            for ix, iy in nz:
                hist.row(ix, iy, counts[ix, iy])
            hist.close()
    finally:
        visits.close()
        probes.close()
        returns.close()

    max_ret = max(eval_returns) if eval_returns else float("-inf")
    return RunResult(str(out_dir), eval_steps, eval_returns, max_ret, grid.unique_count)


def _emit_probes(probes, step, agent, buffer, spec, rng, batch_size, diag) -> None:
    policy = agent.behavior_policy()
    critic = agent.probe_critic
    states = buffer.sample(batch_size, rng).states
    probes.row(step, "q_grad_norm", "mean",
               _fmt(q_grad_norm_probe(critic, policy, states, rng)))
    qdiff = region_q_difference(critic, policy, spec, rng)
    for i, v in enumerate(qdiff):
        probes.row(step, "region_q_diff", f"region{i}", _fmt(v))
    ent = region_entropy(policy, spec, rng)
    for i, v in enumerate(ent):
        probes.row(step, "region_entropy", f"region{i}", _fmt(v))
    for key, value in diag.items():
        if isinstance(value, (int, float)):
            probes.row(step, "diag", key, _fmt(value))


def _emit_cross_sections(out_dir, step, agent, spec, n_points) -> None:
    q_fn = critic_cross_section_fn(agent.probe_critic)
    lp_fn = log_prob_cross_section_fn(agent.behavior_policy())
    xsec = _Csv(os.path.join(out_dir, f"xsec_{step}.csv"),
                "region,t,q_centered,logpi_centered")
    for i, (cx, cy, _) in enumerate(spec.regions):
        center = np.array([cx, cy])
        t, q_vals = action_line_cross_section(q_fn, center, n_points)
        _, lp_vals = action_line_cross_section(lp_fn, center, n_points)
        for tj, qv, lv in zip(t, q_vals, lp_vals):
            xsec.row(f"region{i}", _fmt(tj), _fmt(qv), _fmt(lv))
    xsec.close()


# ---------------------------------------------------------------------------
# sweeps and aggregation

def _run_job(args):
    text, seed, out_dir = args
    from .config import config_from_text
    return run_experiment(config_from_text(text), seed, out_dir)


def sweep_axis(cfg: ExperimentConfig, axis: str, values, seeds, out_root,
               workers: int = 1):
    """Cartesian runs over values x seeds plus per-run and aggregated
    summary CSVs under out_root."""
    from .config import set_key, valid_keys, config_from_text
    if axis not in valid_keys():
        raise KeyError(f"unknown sweep axis {axis!r}; valid axes: {valid_keys()}")
    os.makedirs(out_root, exist_ok=True)
    jobs = []
    leaf = axis.split(".")[-1]
    for value in values:
        sub = config_from_text(config_to_text(cfg))
        set_key(sub, axis, str(value))
        sub.validate()
        for seed in seeds:
            out_dir = os.path.join(out_root, f"{leaf}={value}", f"seed{seed}")
            jobs.append((config_to_text(sub), seed, out_dir))
    if workers > 1:
        import multiprocessing as mp
        with mp.get_context("spawn").Pool(workers) as pool:
            results = pool.map(_run_job, jobs)
    else:
        results = [_run_job(j) for j in jobs]

    summary = _Csv(os.path.join(out_root, "summary.csv"),
                   "axis,value,seed,final_unique_cells,final_eval_return,max_eval_return")
    for (text, seed, out_dir), res in zip(jobs, results):
        value = out_dir.split(os.sep)[-2].split("=", 1)[1]
        final_ret = res.eval_returns[-1] if res.eval_returns else float("nan")
        summary.row(axis, value, seed, res.final_unique_cells,
                    _fmt(final_ret), _fmt(res.max_eval_return))
    summary.close()

    agg = _Csv(os.path.join(out_root, "summary_agg.csv"),
               "axis,value,mean_final_unique_cells,std_final_unique_cells,"
               "mean_max_eval_return,std_max_eval_return")
    n_seeds = len(seeds)
    for vi, value in enumerate(values):
        chunk = results[vi * n_seeds:(vi + 1) * n_seeds]
        uniq = np.array([r.final_unique_cells for r in chunk], dtype=float)
        rets = np.array([r.max_eval_return for r in chunk], dtype=float)
        agg.row(axis, value, _fmt(uniq.mean()), _fmt(_std(uniq)),
                _fmt(rets.mean()), _fmt(_std(rets)))
    agg.close()
    return results


def _std(x: np.ndarray) -> float:
    # sample standard deviation; a single seed has spread zero
    return float(np.std(x, ddof=1)) if x.size > 1 else 0.0


def read_csv_columns(path) -> dict:
    with open(path) as f:
        header = f.readline().strip().split(",")
        rows = [line.strip().split(",") for line in f if line.strip()]
    cols = {name: [] for name in header}
    for row in rows:
        for name, cell in zip(header, row):
            cols[name].append(cell)
    return cols


def aggregate_runs(in_dir, out_file, metric_file: str = "visits.csv",
                   value_column: str = "unique_cells") -> None:
    """Mean and sample standard deviation per step across every
    `metric_file` found under in_dir; step grids must align exactly."""
    paths = []
    for root, _, names in os.walk(in_dir):
        if metric_file in names:
            paths.append(os.path.join(root, metric_file))
    paths.sort()
    if not paths:
        raise FileNotFoundError(f"no {metric_file} found under {in_dir}")
    step_col = None
    series = []
    for p in paths:
        cols = read_csv_columns(p)
        steps = [int(s) for s in cols["step"]]
        if step_col is None:
            step_col = steps
        elif steps != step_col:
            raise ValueError(f"step grid of {p} does not align with {paths[0]}")
        series.append(np.array([float(v) for v in cols[value_column]]))
    stack = np.stack(series)
    out = _Csv(out_file, f"step,mean_{value_column},std_{value_column},n")
    for i, step in enumerate(step_col):
        col = stack[:, i]
        out.row(step, _fmt(col.mean()), _fmt(_std(col)), len(paths))
    out.close()
