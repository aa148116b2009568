import json

import pytest

from rulecf.config import load_config
from rulecf.errors import RulecfError


def test_defaults():
    cfg = load_config(env={})
    assert cfg.weights == (0.25, 0.25, 0.25, 0.25)
    assert cfg.sparsity_cap == 3
    assert cfg.temporality_sentinel == 10**12


def test_config_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"weights": [0.4, 0.3, 0.2, 0.1], "sparsity_cap": 2}))
    cfg = load_config(config_file=path, env={})
    assert cfg.weights == (0.4, 0.3, 0.2, 0.1)
    assert cfg.sparsity_cap == 2


def test_env_overrides_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"sparsity_cap": 2}))
    cfg = load_config(config_file=path, env={"RULECF_SPARSITY_CAP": "1"})
    assert cfg.sparsity_cap == 1


def test_flags_override_env(tmp_path):
    cfg = load_config(
        env={"RULECF_WEIGHTS": "0.7,0.1,0.1,0.1", "RULECF_TEMPORALITY_SENTINEL": "5"},
        weights="0.1, 0.2, 0.3, 0.4",
        temporality_sentinel=99.0,
    )
    assert cfg.weights == (0.1, 0.2, 0.3, 0.4)
    assert cfg.temporality_sentinel == 99.0


def test_bad_weights_count():
    with pytest.raises(RulecfError):
        load_config(env={}, weights="0.5,0.5")


def test_bad_weights_sum():
    with pytest.raises(RulecfError):
        load_config(env={}, weights="0.5,0.5,0.5,0.5")


def test_unreadable_config_file(tmp_path):
    with pytest.raises(RulecfError):
        load_config(config_file=tmp_path / "missing.json", env={})
    broken = tmp_path / "broken.json"
    broken.write_text("{nope")
    with pytest.raises(RulecfError):
        load_config(config_file=broken, env={})
