#!/usr/bin/env python3
"""Build the 3-seed fixture consumed by the figure package's golden tests.

Small seeded maze and point-goal runs execute through the `maxminrl` CLI;
only the CSV interface files land in plots/fixtures/. Deterministic, so
re-running reproduces the fixture byte-for-byte.
"""

import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXTURES = os.path.join(ROOT, "plots", "fixtures")
SEEDS = (0, 1, 2)

BASE = """
agent.hidden_sizes = 32,32
agent.batch_size = 64
agent.dtype = float64
run.total_env_steps = 4000
run.episode_length = 1000
run.eval_period = 1000
run.eval_episodes = 2
run.visit_log_period = 500
probes.period = 500
probes.samples_per_region = 100
probes.cross_section_period = 2000
probes.cross_section_points = 41
run.hist_windows = 0,2000; 2000,2000
"""

MAZE = {
    "uniform": "env.kind = maze\nagent.algorithm = uniform\nrun.eval_episodes = 0\n",
    "sac": "env.kind = maze\nagent.algorithm = sac\nagent.gamma = 0.999\n"
           "run.eval_episodes = 0\n",
    "mme": "env.kind = maze\nagent.algorithm = mme\nagent.alpha_q = 0.5\n"
           "agent.gamma = 0.999\nrun.eval_episodes = 0\n",
}
POINTGOAL = {
    "sac": "env.kind = pointgoal\nagent.algorithm = sac\nagent.alpha_pi = 0.2\n"
           "agent.gamma = 0.99\n",
    "mme": "env.kind = pointgoal\nagent.algorithm = mme\nagent.alpha_pi = 0.2\n"
           "agent.alpha_q = 0.5\nagent.gamma = 0.99\n",
}


def cli(*args, env=None):
    cmd = [sys.executable, "-m", "maxminrl", *args]
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"{' '.join(cmd)} failed:\n{proc.stderr}")


def main():
    env = dict(os.environ, OPENBLAS_NUM_THREADS="1",
               PYTHONPATH=os.path.join(ROOT, "src"))
    work = tempfile.mkdtemp(prefix="plotfix_")
    shutil.rmtree(FIXTURES, ignore_errors=True)
    for sub in ("visitation", "returns", "run"):
        os.makedirs(os.path.join(FIXTURES, sub))

    for name, extra in MAZE.items():
        cfg = os.path.join(work, f"maze_{name}.txt")
        with open(cfg, "w") as f:
            f.write(BASE + extra)
        for seed in SEEDS:
            cli("run", "--config", cfg, "--seed", str(seed),
                "--out", os.path.join(work, "maze", name, f"seed{seed}"), env=env)
        cli("aggregate", "--in", os.path.join(work, "maze", name),
            "--out", os.path.join(FIXTURES, "visitation", f"{name}.csv"), env=env)

    for name, extra in POINTGOAL.items():
        cfg = os.path.join(work, f"pg_{name}.txt")
        with open(cfg, "w") as f:
            f.write(BASE + extra)
        for seed in SEEDS:
            cli("run", "--config", cfg, "--seed", str(seed),
                "--out", os.path.join(work, "pg", name, f"seed{seed}"), env=env)
        cli("aggregate", "--in", os.path.join(work, "pg", name),
            "--out", os.path.join(FIXTURES, "returns", f"{name}.csv"),
            "--metric", "returns.csv", "--column", "mean_eval_return", env=env)

    # one representative run supplies the single-run figure inputs
    src = os.path.join(work, "maze", "sac", "seed0")
    for fname in os.listdir(src):
        if fname.startswith(("probes", "hist_", "xsec_")):
            shutil.copy(os.path.join(src, fname), os.path.join(FIXTURES, "run", fname))
    shutil.rmtree(work)
    print(f"fixture written to {FIXTURES}")


if __name__ == "__main__":
    main()
