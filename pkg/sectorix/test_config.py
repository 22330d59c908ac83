#!/usr/bin/env python3
"""
Tests for environment settings, angle parsing and sweep presets.
"""

import math
import os

import pytest

from sectorix.config import (
    DEFAULT_SEED,
    SweepConfig,
    load_sweep_config,
    parse_angle,
    parse_int_range,
    worker_count,
)
from sectorix.errors import ConfigError


def test_parse_angle():
    assert parse_angle("pi/6") == pytest.approx(math.pi / 6)
    assert parse_angle("2pi/5") == pytest.approx(2 * math.pi / 5)
    assert parse_angle("pi") == pytest.approx(math.pi)
    assert parse_angle("0.3") == 0.3
    assert parse_angle(1) == 1.0
    with pytest.raises(ConfigError):
        parse_angle("tau/4")


def test_parse_int_range():
    assert parse_int_range("2..6") == [2, 3, 4, 5, 6]
    assert parse_int_range("2,4") == [2, 4]
    assert parse_int_range(3) == [3]
    assert parse_int_range([5, 2]) == [5, 2]
    with pytest.raises(ConfigError):
        parse_int_range("6..2")


def test_defaults():
    config = SweepConfig()
    assert config.seed == DEFAULT_SEED
    assert config.n_values == [2, 3, 4, 5, 6]
    assert config.trials == 500
    assert config.alphas[-1] == pytest.approx(math.pi / 3)


def test_presets_load():
    smoke = load_sweep_config("smoke")
    assert smoke.n_values == [2, 3]
    assert smoke.alphas == [0.0, pytest.approx(math.pi / 4)]
    paper = load_sweep_config("paper_suite")
    assert paper.trials == 500
    assert paper.seed == DEFAULT_SEED


def test_overrides_win_over_preset():
    config = load_sweep_config("smoke", {"trials": 9, "ids": "F6,TXR", "alphas": "0,pi/6", "seed": None})
    assert config.trials == 9
    assert config.ids == ["F6", "TXR"]
    assert config.alphas[1] == pytest.approx(math.pi / 6)
    assert config.seed == 7


def test_invalid_fields_are_named():
    with pytest.raises(ConfigError, match="trials"):
        load_sweep_config(None, {"trials": 0})
    with pytest.raises(ConfigError, match="alphas"):
        load_sweep_config(None, {"alphas": [2.0]})
    with pytest.raises(ConfigError, match="colour"):
        load_sweep_config(None, {"colour": "blue"})
    with pytest.raises(ConfigError, match="not found"):
        load_sweep_config("no_such_preset")


def test_preset_must_be_a_mapping(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError, match="mapping"):
        load_sweep_config(str(path))


def test_worker_count(monkeypatch):
    monkeypatch.setenv("SECTORIX_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("SECTORIX_THREADS", "0")
    assert worker_count() == (os.cpu_count() or 1)
    monkeypatch.setenv("SECTORIX_THREADS", "many")
    with pytest.raises(ConfigError):
        worker_count()
    monkeypatch.setenv("SECTORIX_THREADS", "-1")
    with pytest.raises(ConfigError):
        worker_count()


if __name__ == "__main__":
    pytest.main([__file__])
