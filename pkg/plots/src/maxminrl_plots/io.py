"""CSV loading with schema validation for the runner's output files.

Expected schemas:
  aggregate files   step, mean_<col>, std_<col>[, n]
  probes.csv        step, probe, key, value
  hist_<start>.csv  cell_x, cell_y, count
  xsec_<step>.csv   region, t, q_centered, logpi_centered
  returns.csv       step, mean_eval_return
"""

from __future__ import annotations

import os


class SchemaError(ValueError):
    pass


def read_csv(path) -> dict:
    with open(path) as f:
        header = f.readline().strip().split(",")
        cols = {name: [] for name in header}
        for line in f:
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != len(header):
                raise SchemaError(f"{path}: row width {len(cells)} != header "
                                  f"width {len(header)}")
            for name, cell in zip(header, cells):
                cols[name].append(cell)
    return cols


def require_columns(path, cols, required) -> None:
    missing = [c for c in required if c not in cols]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {missing}; "
                          f"found {list(cols)}")


def load_aggregate(path, value_column: str):
    cols = read_csv(path)
    mean_col = f"mean_{value_column}"
    std_col = f"std_{value_column}"
    require_columns(path, cols, ["step", mean_col, std_col])
    steps = [int(s) for s in cols["step"]]
    means = [float(v) for v in cols[mean_col]]
    stds = [float(v) for v in cols[std_col]]
    return steps, means, stds


def load_histogram(path, width: int = 100, height: int = 100):
    import numpy as np
    cols = read_csv(path)
    require_columns(path, cols, ["cell_x", "cell_y", "count"])
    grid = np.zeros((width, height))
    for x, y, c in zip(cols["cell_x"], cols["cell_y"], cols["count"]):
        grid[int(x), int(y)] = float(c)
    return grid


def load_probes(path):
    cols = read_csv(path)
    require_columns(path, cols, ["step", "probe", "key", "value"])
    series = {}
    for step, probe, key, value in zip(cols["step"], cols["probe"], cols["key"],
                                       cols["value"]):
        series.setdefault((probe, key), []).append((int(step), float(value)))
    return series


def load_cross_section(path):
    cols = read_csv(path)
    require_columns(path, cols, ["region", "t", "q_centered", "logpi_centered"])
    regions = {}
    for region, t, q, lp in zip(cols["region"], cols["t"], cols["q_centered"],
                                cols["logpi_centered"]):
        regions.setdefault(region, []).append((float(t), float(q), float(lp)))
    return regions


def labeled_csvs(in_dir) -> list:
    """(label, path) pairs for every top-level CSV in a directory, sorted
    by name so legend order is deterministic."""
    names = sorted(n for n in os.listdir(in_dir) if n.endswith(".csv"))
    if not names:
        raise FileNotFoundError(f"no CSV files found in {in_dir}")
    return [(os.path.splitext(n)[0], os.path.join(in_dir, n)) for n in names]
