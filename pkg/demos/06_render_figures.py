#!/usr/bin/env python3
"""Render the full figure set from experiment CSVs.

By default consumes the shipped 3-seed fixture; point --results at a
finished results/acceptance tree to get the real curves (aggregates are
built on the fly with the `maxminrl aggregate` CLI).
"""

import argparse
import os
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def sh(*cmd):
    proc = subprocess.run(list(cmd), capture_output=True, text=True)
    if proc.returncode != 0:
        sys.exit(f"{' '.join(cmd)} failed:\n{proc.stderr}")
    return proc.stdout.strip()


def plot(kind, in_dir, out_png):
    out = sh(sys.executable, "-m", "maxminrl_plots.cli", kind,
             "--in", in_dir, "--out", out_png)
    print(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--results", default=None,
                    help="results/acceptance tree; defaults to the plots fixture")
    ap.add_argument("--out", default="figures")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    if args.results is None:
        fx = os.path.join(ROOT, "plots", "fixtures")
        plot("visitation", os.path.join(fx, "visitation"),
             os.path.join(args.out, "visitation.png"))
        plot("returns", os.path.join(fx, "returns"),
             os.path.join(args.out, "returns.png"))
        for kind in ("histograms", "probes", "cross_sections"):
            plot(kind, os.path.join(fx, "run"), os.path.join(args.out, f"{kind}.png"))
        return

    work = tempfile.mkdtemp(prefix="figagg_")
    maze = os.path.join(args.results, "maze")
    vis_dir = os.path.join(work, "visitation")
    os.makedirs(vis_dir)
    for algo in sorted(os.listdir(maze)):
        sh(sys.executable, "-m", "maxminrl", "aggregate",
           "--in", os.path.join(maze, algo),
           "--out", os.path.join(vis_dir, f"{algo}.csv"))
    plot("visitation", vis_dir, os.path.join(args.out, "maze_visitation.png"))

    for task in ("delayed", "sparse"):
        tdir = os.path.join(args.results, task)
        if not os.path.isdir(tdir):
            continue
        ret_dir = os.path.join(work, f"returns_{task}")
        os.makedirs(ret_dir)
        for algo in sorted(os.listdir(tdir)):
            sh(sys.executable, "-m", "maxminrl", "aggregate",
               "--in", os.path.join(tdir, algo),
               "--out", os.path.join(ret_dir, f"{algo}.csv"),
               "--metric", "returns.csv", "--column", "mean_eval_return")
        plot("returns", ret_dir, os.path.join(args.out, f"{task}_returns.png"))

    sac_run = os.path.join(maze, "sac_a1", "seed0")
    for kind in ("histograms", "probes", "cross_sections"):
        plot(kind, sac_run, os.path.join(args.out, f"sac_{kind}.png"))
    mme_run = os.path.join(maze, "mme", "seed0")
    plot("probes", mme_run, os.path.join(args.out, "mme_probes.png"))
    plot("histograms", mme_run, os.path.join(args.out, "mme_histograms.png"))


if __name__ == "__main__":
    main()
