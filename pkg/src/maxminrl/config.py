"""Flat key-value experiment configuration with dotted section keys.

Grammar: one `section.field = value` per line; `#` starts a comment;
blank lines ignored. Sections are env, agent, probes, run. Tuples are
comma-separated scalars; nested tuples (wall rectangles, histogram
windows, probe regions) separate items with `;`. Parsing and
serialization round-trip losslessly.

Example::

    env.kind = maze
    agent.algorithm = sac
    agent.alpha_q = 1.0
    run.total_env_steps = 200000
    run.seeds = 0,1,2,3,4
"""

from __future__ import annotations

import typing
from dataclasses import dataclass, field, fields

from .agents import AgentConfig


@dataclass
class EnvConfig:
    kind: str = "maze"          # maze | pointgoal | sparse | delayed
    inner: str = "pointgoal"    # substrate wrapped by sparse/delayed
    threshold: float = 80.0     # sparse crossing threshold
    axis: int = 0               # sparse threshold axis
    delay: int = 20             # delayed reward period
    width: float = 100.0
    height: float = 100.0
    # optional custom maze walls "x0,x1,y0,y1; ..."; empty uses the 4-room default
    walls: tuple = ()


@dataclass
class ProbesConfig:
    period: int = 1000
    samples_per_region: int = 1000
    regions: tuple = ((5.0, 5.0, 2.0), (10.0, 10.0, 2.0),
                      (20.0, 20.0, 2.0), (30.0, 30.0, 2.0))
    cross_section_period: int = 50_000
    cross_section_points: int = 201


@dataclass
class RunConfig:
    total_env_steps: int = 200_000
    episode_length: int = 1000
    seeds: tuple = (0, 1, 2, 3, 4)
    eval_period: int = 10_000
    eval_episodes: int = 5
    visit_log_period: int = 1000
    hist_windows: tuple = ()     # "start,length; start,length"
    out_dir: str = "results"


@dataclass
class ExperimentConfig:
    env: EnvConfig = field(default_factory=EnvConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)
    probes: ProbesConfig = field(default_factory=ProbesConfig)
    run: RunConfig = field(default_factory=RunConfig)

    def validate(self) -> None:
        self.agent.validate()
        r = self.run
        if not (r.total_env_steps >= r.episode_length >= 1):
            raise ValueError("need total_env_steps >= episode_length >= 1")
        if len(r.seeds) == 0:
            raise ValueError("seed list must be non-empty")
        if r.eval_period < 1 or r.eval_episodes < 0 or r.visit_log_period < 1:
            raise ValueError("invalid evaluation or logging cadence")


_SECTIONS = {"env": EnvConfig, "agent": AgentConfig,
             "probes": ProbesConfig, "run": RunConfig}


def _parse_scalar(text: str):
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


# fields holding tuples of tuples rather than flat tuples
_NESTED_FIELDS = {"walls", "regions", "hist_windows"}


def _parse_value(raw: str, kind, nested: bool):
    raw = raw.strip()
    if kind is int:
        return int(raw)
    if kind is float:
        return float(raw)
    if kind is str:
        return raw
    if kind is tuple or typing.get_origin(kind) is tuple:
        if raw == "":
            return ()
        if nested:
            return tuple(tuple(_parse_scalar(p) for p in item.split(","))
                         for item in raw.split(";") if item.strip())
        return tuple(_parse_scalar(p) for p in raw.split(","))
    raise TypeError(f"unsupported config field type {kind}")


def _format_value(value) -> str:
    if isinstance(value, tuple):
        if value and isinstance(value[0], tuple):
            return "; ".join(",".join(repr(x) if isinstance(x, float) else str(x)
                                      for x in item) for item in value)
        return ",".join(repr(x) if isinstance(x, float) else str(x) for x in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def valid_keys() -> list[str]:
    keys = []
    for name, cls in _SECTIONS.items():
        keys.extend(f"{name}.{f.name}" for f in fields(cls))
    return keys


def set_key(cfg: ExperimentConfig, dotted: str, raw: str) -> None:
    if "." not in dotted:
        raise KeyError(f"config keys are dotted section.field, got {dotted!r}")
    section, name = dotted.split(".", 1)
    if section not in _SECTIONS:
        raise KeyError(f"unknown config section {section!r}; valid keys: {valid_keys()}")
    target = getattr(cfg, section)
    defaults = _SECTIONS[section]()
    for f in fields(target):
        if f.name == name:
            # field annotations may be strings; dispatch on the type of
            # the section default instead
            kind = type(getattr(defaults, name))
            setattr(target, name, _parse_value(raw, kind, name in _NESTED_FIELDS))
            return
    raise KeyError(f"unknown config key {dotted!r}; valid keys: {valid_keys()}")


def config_from_text(text: str) -> ExperimentConfig:
    cfg = ExperimentConfig()
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = stripped.split("=", 1)
        set_key(cfg, key.strip(), raw.strip())
    return cfg


def config_to_text(cfg: ExperimentConfig) -> str:
    lines = []
    for section, _ in _SECTIONS.items():
        target = getattr(cfg, section)
        for f in fields(target):
            lines.append(f"{section}.{f.name} = {_format_value(getattr(target, f.name))}")
    return "\n".join(lines) + "\n"


def load_config(path) -> ExperimentConfig:
    with open(path) as f:
        return config_from_text(f.read())


def save_config(cfg: ExperimentConfig, path) -> None:
    with open(path, "w") as f:
        f.write(config_to_text(cfg))
