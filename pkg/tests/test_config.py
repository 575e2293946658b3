"""Config grammar: round-trip identity, overrides, error reporting."""

import pytest

from maxminrl.config import (ExperimentConfig, config_from_text, config_to_text,
                             load_config, save_config, set_key, valid_keys)


def test_default_round_trip():
    cfg = ExperimentConfig()
    assert config_from_text(config_to_text(cfg)) == cfg


def test_modified_round_trip():
    cfg = ExperimentConfig()
    cfg.env.kind = "sparse"
    cfg.env.threshold = 72.5
    cfg.agent.algorithm = "mme"
    cfg.agent.alpha_q = 0.5
    cfg.agent.hidden_sizes = (32, 16)
    cfg.run.seeds = (3,)
    cfg.run.hist_windows = ((150000, 50000),)  # single nested item
    cfg.env.walls = ((49.5, 50.5, 0.0, 21.0), (49.5, 50.5, 29.0, 71.0))
    cfg.probes.regions = ((5.0, 5.0, 2.0),)
    text = config_to_text(cfg)
    assert config_from_text(text) == cfg


def test_comments_and_blank_lines():
    cfg = config_from_text("""
# a comment
agent.alpha_q = 0.25  # trailing comment

env.kind = pointgoal
""")
    assert cfg.agent.alpha_q == 0.25
    assert cfg.env.kind == "pointgoal"


def test_unknown_key_lists_valid_axes():
    cfg = ExperimentConfig()
    with pytest.raises(KeyError, match="agent.alpha_q"):
        set_key(cfg, "agent.nonsense", "1")
    with pytest.raises(KeyError, match="valid keys"):
        set_key(cfg, "bogus.alpha", "1")
    with pytest.raises(KeyError):
        set_key(cfg, "flatkey", "1")


def test_malformed_line_reports_position():
    with pytest.raises(ValueError, match="line 2"):
        config_from_text("env.kind = maze\nnot a key value\n")


def test_file_round_trip(tmp_path):
    cfg = ExperimentConfig()
    cfg.agent.dtype = "float32"
    path = tmp_path / "cfg.txt"
    save_config(cfg, path)
    assert load_config(path) == cfg


def test_valid_keys_cover_sections():
    keys = valid_keys()
    for expected in ("env.kind", "agent.alpha_pi", "probes.period",
                     "run.total_env_steps", "run.seeds"):
        assert expected in keys


def test_validation_rules():
    cfg = ExperimentConfig()
    cfg.run.total_env_steps = 10
    cfg.run.episode_length = 100
    with pytest.raises(ValueError, match="episode_length"):
        cfg.validate()
    cfg = ExperimentConfig()
    cfg.run.seeds = ()
    with pytest.raises(ValueError, match="seed"):
        cfg.validate()
