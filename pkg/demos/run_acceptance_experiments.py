#!/usr/bin/env python3
"""Generate the full experiment set behind the acceptance suite.

Two phases of seeded 200k-step runs (5 seeds each):

  maze      uniform / SAC(a_q=1) / SAC(a_q=0) / MME(a_q=0.5), a_pi=1,
            discount 0.999, pure exploration
  rewarded  SAC / MME / DE-MME on DelayedPointGoal(D=20) and
            SparsePointGoal(tau=80), discount 0.99

Runs execute through the `maxminrl run` CLI with single-threaded BLAS,
two at a time. Each finished run directory gets a DONE marker and is
skipped on re-invocation, so the driver is safe to restart. Expect the
full set to take overnight on a small machine; `--quick` shrinks every
run for a fast end-to-end check.

Usage:
    python3 demos/run_acceptance_experiments.py --out results/acceptance
    python3 demos/run_acceptance_experiments.py --phase maze --workers 2
"""

import argparse
import os
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from maxminrl.config import ExperimentConfig, save_config  # noqa: E402

MAZE_STEPS = 200_000
SEEDS = (0, 1, 2, 3, 4)
HIST_WINDOWS = ((0, 50_000), (50_000, 50_000), (100_000, 50_000), (150_000, 50_000))

# rewarded-task entropy coefficients: alpha_pi follows the reward scale
# (sparse rewards in {0,1} need a small temperature, the dense delayed
# task a moderate one); alpha_q chosen per task as in the maze sweep
REWARDED = {
    "delayed": dict(kind="delayed", alpha_pi=0.2, alpha_q_mme=0.5, alpha_q_demme=0.5),
    "sparse": dict(kind="sparse", alpha_pi=0.02, alpha_q_mme=0.5, alpha_q_demme=0.5),
}


def base_config(steps):
    cfg = ExperimentConfig()
    cfg.agent.dtype = "float32"  # the f64 path is ~5x slower on this hardware
    cfg.run.total_env_steps = steps
    cfg.run.seeds = SEEDS
    return cfg


def maze_config(algorithm, alpha_q, steps):
    cfg = base_config(steps)
    cfg.env.kind = "maze"
    cfg.agent.algorithm = algorithm
    cfg.agent.gamma = 0.999
    cfg.agent.alpha_pi = 1.0
    cfg.agent.alpha_q = alpha_q
    cfg.run.eval_episodes = 0  # the maze has no reward signal
    cfg.run.hist_windows = tuple((int(s * steps / MAZE_STEPS), int(l * steps / MAZE_STEPS))
                                 for s, l in HIST_WINDOWS)
    cfg.probes.cross_section_period = steps // 4
    return cfg


def rewarded_config(task, algorithm, steps):
    spec = REWARDED[task]
    cfg = base_config(steps)
    cfg.env.kind = spec["kind"]
    cfg.env.inner = "pointgoal"
    cfg.env.threshold = 80.0
    cfg.env.axis = 0
    cfg.env.delay = 20
    cfg.agent.algorithm = algorithm
    cfg.agent.gamma = 0.99
    cfg.agent.alpha_pi = spec["alpha_pi"]
    cfg.agent.alpha_q = (spec["alpha_q_demme"] if algorithm == "demme"
                         else spec["alpha_q_mme"])
    cfg.probes.cross_section_period = 0
    return cfg


def build_jobs(phase, out_root, steps, seeds):
    """(config_path, seed, run_dir) triples in execution order."""
    cfg_dir = os.path.join(out_root, "configs")
    os.makedirs(cfg_dir, exist_ok=True)
    jobs = []

    def add(group, name, cfg, seed_list=seeds):
        path = os.path.join(cfg_dir, f"{group}_{name}.txt")
        save_config(cfg, path)
        for seed in seed_list:
            jobs.append((path, seed, os.path.join(out_root, group, name, f"seed{seed}")))

    if phase in ("maze", "all"):
        add("maze", "uniform", maze_config("uniform", 1.0, steps))
        add("maze", "sac_a1", maze_config("sac", 1.0, steps))
        add("maze", "sac_aq0", maze_config("sac", 0.0, steps))
        add("maze", "mme", maze_config("mme", 0.5, steps))
    if phase in ("rewarded", "all"):
        # first seed of every combination runs before the rest so early
        # results cover the whole grid
        combos = [(task, algo) for task in ("delayed", "sparse")
                  for algo in ("sac", "mme", "demme")]
        for wave in range(len(seeds)):
            for task, algo in combos:
                cfg = rewarded_config(task, algo, steps)
                path = os.path.join(cfg_dir, f"{task}_{algo}.txt")
                save_config(cfg, path)
                seed = seeds[wave]
                jobs.append((path, seed,
                             os.path.join(out_root, task, algo, f"seed{seed}")))
    return jobs


def run_job(job, log):
    cfg_path, seed, out_dir = job
    done = os.path.join(out_dir, "DONE")
    if os.path.exists(done):
        log(f"skip (done): {out_dir}")
        return True
    env = dict(os.environ, OPENBLAS_NUM_THREADS="1", OMP_NUM_THREADS="1")
    cmd = [sys.executable, "-m", "maxminrl", "run", "--config", cfg_path,
           "--seed", str(seed), "--out", out_dir]
    t0 = time.time()
    log(f"start: {out_dir}")
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
    if proc.returncode != 0:
        log(f"FAILED ({proc.returncode}): {out_dir}\n{proc.stderr.strip()}")
        return False
    with open(done, "w") as f:
        f.write(f"{time.time() - t0:.0f}s\n")
    log(f"done in {time.time() - t0:.0f}s: {out_dir}")
    return True


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/acceptance")
    ap.add_argument("--phase", choices=("maze", "rewarded", "all"), default="all")
    ap.add_argument("--workers", type=int, default=2)
    ap.add_argument("--quick", action="store_true",
                    help="20k-step, 2-seed miniature of the full set")
    args = ap.parse_args()

    steps = 20_000 if args.quick else MAZE_STEPS
    seeds = SEEDS[:2] if args.quick else SEEDS
    jobs = build_jobs(args.phase, args.out, steps, seeds)

    os.makedirs(args.out, exist_ok=True)
    log_path = os.path.join(args.out, "driver.log")
    log_file = open(log_path, "a")

    def log(msg):
        line = f"[{time.strftime('%H:%M:%S')}] {msg}"
        print(line, flush=True)
        log_file.write(line + "\n")
        log_file.flush()

    log(f"phase={args.phase} jobs={len(jobs)} steps={steps} workers={args.workers}")
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        ok = list(pool.map(lambda j: run_job(j, log), jobs))
    failed = ok.count(False)
    log(f"finished: {len(ok) - failed}/{len(ok)} runs ok")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
