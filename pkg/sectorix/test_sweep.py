#!/usr/bin/env python3
"""
Tests for sweeps: parameter grids, determinism, aggregation and replay.
"""

import pytest

from sectorix.catalogue import get_entry
from sectorix.checks import CheckResult
from sectorix.config import SweepConfig, load_sweep_config
from sectorix.report import to_json
from sectorix.sweep import (
    IdStats,
    _arities,
    parameter_grid,
    parse_witness,
    replay,
    run_unit,
    sweep,
    witness_of,
)

SMALL = dict(n_values=[2, 3], alphas=[0.0, 0.6], trials=2, seed=11, workers=1)


def stats_by_id(report):
    return {item.id: item for item in report.results}


def test_parameter_grid_sizes():
    config = SweepConfig()
    assert parameter_grid(get_entry("F6"), 4, config) == [{"k": 1}, {"k": 2}, {"k": 3}, {"k": 4}]
    assert len(parameter_grid(get_entry("GA1"), 3, config)) == 3 * len(config.r_grid)
    assert len(parameter_grid(get_entry("GA2"), 2, config)) == 2 * len(config.concave)
    assert len(parameter_grid(get_entry("SVHARM"), 3, config)) == len(config.v_grid) * 3
    assert parameter_grid(get_entry("D2233"), 3, config) == [{}]
    assert parameter_grid(get_entry("F6"), 4, SweepConfig(k_policy="max")) == [{"k": 4}]


def test_arities_respect_tensor_limit():
    config = SweepConfig(arities=[1, 2, 3], max_tensor_dim=64)
    tmm = get_entry("TMM")
    assert _arities(tmm, 3, config) == [1, 2, 3]
    assert _arities(tmm, 5, config) == [1, 2]
    assert _arities(get_entry("F6"), 5, config) == [1]


def test_witness_round_trip():
    assert witness_of(7, 3, 1, 42) == "7:3:1:42"
    assert parse_witness("7:3:1:42") == (7, 3, 1, 42)


def test_single_entry_sweep_counts():
    config = SweepConfig(ids=["GA3"], n_values=[3], trials=10, k_policy="max", workers=1)
    report = sweep(config)
    item = stats_by_id(report)["GA3"]
    assert item.trials == 10
    assert item.passes == 10
    assert item.vacuous == 0
    assert item.min_slack is not None
    assert not report.has_failures


def test_trial_accounting():
    report = sweep(SweepConfig(ids=["F6", "TXR", "L13", "GA1"], **SMALL))
    for item in report.results:
        assert item.trials == item.passes + item.vacuous + item.failures + item.findings
        assert item.trials > 0


def test_sweep_is_deterministic():
    config = SweepConfig(ids=["F6", "NF1", "BK3", "TMM"], **SMALL)
    assert to_json(sweep(config)) == to_json(sweep(config))


def test_worker_count_does_not_change_report():
    serial = SweepConfig(ids=["F7", "R1", "MF2"], **SMALL)
    parallel = serial.model_copy(update={"workers": 2})
    assert to_json(sweep(serial)) == to_json(sweep(parallel))


def test_instances_do_not_depend_on_requested_ids():
    alone = stats_by_id(sweep(SweepConfig(ids=["F6"], **SMALL)))["F6"]
    mixed = stats_by_id(sweep(SweepConfig(ids=["TXR", "F6"], **SMALL)))["F6"]
    assert alone.to_dict() == mixed.to_dict()


def test_alpha_free_families_run_once_per_trial():
    report = sweep(SweepConfig(ids=["BK1"], **SMALL))
    item = stats_by_id(report)["BK1"]
    assert item.trials == len(SMALL["n_values"]) * SMALL["trials"]


def test_replay_reproduces_worst_slack():
    config = SweepConfig(ids=["F6"], **SMALL)
    item = stats_by_id(sweep(config))["F6"]
    results = replay(item.worst_seed, "F6", config)
    assert min(r.slack for r in results if r.slack is not None) == item.min_slack


def test_run_unit_skips_alpha_free_entries_above_first_angle():
    config = SweepConfig(ids=["GA3", "F6"], **SMALL)
    results, errors = run_unit(config, ["GA3", "F6"], 2, 1, 0)
    assert errors == []
    assert {r.id for r in results} == {"F6"}


def test_id_stats_tracks_worst_witness():
    stats = IdStats(id="X", section="s", conjectural=True)
    assert stats.to_dict()["min_slack"] is None
    for witness, slack, status in [("1:2:0:0", 0.5, "pass"), ("1:2:0:1", -0.1, "finding"),
                                   ("1:2:0:2", None, "vacuous")]:
        stats.add(CheckResult(id="X", hypotheses_met=status != "vacuous", reason="", lhs=None, rhs=None,
                              slack=slack, holds=None if slack is None else slack >= 0, params={},
                              witness=witness, conjectural=True, status=status))
    assert (stats.trials, stats.passes, stats.findings, stats.vacuous) == (3, 1, 1, 1)
    assert stats.min_slack == -0.1 and stats.worst_seed == "1:2:0:1"


def test_smoke_preset_has_no_failures():
    config = load_sweep_config("smoke", {"workers": 1})
    report = sweep(config)
    assert report.errors == []
    assert report.failures == []
    for finding in report.findings:
        assert finding["conjectural"]


@pytest.mark.slow
def test_paper_suite_full_sweep():
    report = sweep(load_sweep_config("paper_suite"))
    assert report.errors == []
    assert report.failures == []


if __name__ == "__main__":
    pytest.main([__file__])
