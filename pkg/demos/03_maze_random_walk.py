#!/usr/bin/env python3
"""Uniform random walk in the 4-room maze with visitation counting.

Prints the cumulative unique-cell curve and a coarse ASCII picture of
where the walk has been. The walls stop motion (no sliding); the four
door gaps are the only passages between rooms.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import numpy as np

from maxminrl.envs import ContinuousMaze
from maxminrl.metrics import VisitationGrid


def main():
    env = ContinuousMaze()
    grid = VisitationGrid()
    rng = np.random.default_rng(0)
    state = env.reset()
    grid.record(0, state)

    steps = 60_000
    for step in range(1, steps + 1):
        es = env.step(rng.uniform(-1.0, 1.0, 2))
        grid.record(step, es.next_state)
        if step % 10_000 == 0:
            print(f"step {step:6d}: {grid.unique_count:5d} unique 1x1 cells")

    print("\ncoverage (each char = 4x4 cells, # visited, . not, X wall):")
    blocked = env.layout.blocked_cells()
    for gy in range(24, -1, -1):
        row = []
        for gx in range(25):
            cells = grid.occupied[gx * 4:(gx + 1) * 4, gy * 4:(gy + 1) * 4]
            walls = blocked[gx * 4:(gx + 1) * 4, gy * 4:(gy + 1) * 4]
            if walls.all():
                row.append("X")
            elif cells.any():
                row.append("#")
            else:
                row.append(".")
        print("  " + "".join(row))
    print(f"\nfinal unique cells: {grid.unique_count} of "
          f"{int((~blocked).sum())} reachable")


if __name__ == "__main__":
    main()
