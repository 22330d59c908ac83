#!/usr/bin/env python3
"""
Tests for report rendering.
"""

import csv
import io
import json

import numpy as np
import pytest

from sectorix.checks import evaluate
from sectorix.config import SweepConfig
from sectorix.errors import ConfigError
from sectorix.instances import Instance
from sectorix.report import _clean, render, render_results, report_dict, to_csv, to_human, to_json
from sectorix.sweep import sweep


@pytest.fixture(scope="module")
def report():
    return sweep(SweepConfig(ids=["F6", "L13", "BK3"], n_values=[2, 3], alphas=[0.0, 0.5],
                             trials=2, seed=5, workers=1))


def test_json_and_csv_carry_identical_numbers(report):
    from_json = {row["id"]: row for row in json.loads(to_json(report))["results"]}
    rows = list(csv.DictReader(io.StringIO(to_csv(report))))
    assert [row["id"] for row in rows] == [item.id for item in report.results]
    for row in rows:
        expected = from_json[row["id"]]["min_slack"]
        if expected is None:
            assert row["min_slack"] == ""
        else:
            assert float(row["min_slack"]) == expected
        assert int(row["trials"]) == from_json[row["id"]]["trials"]


def test_json_omits_worker_count(report):
    payload = json.loads(to_json(report))
    assert "workers" not in payload["config"]
    assert payload["config"]["seed"] == 5
    assert "counterexamples" not in payload


def test_human_table_rounds_to_six_digits(report):
    text = to_human(report)
    item = next(i for i in report.results if i.min_slack is not None)
    assert f"{item.min_slack:.6g}" in text
    assert text.splitlines()[0].startswith("id")
    assert "failures: 0" in text


def test_unknown_format():
    with pytest.raises(ConfigError):
        render(None, "xml")
    with pytest.raises(ConfigError):
        render_results([], "yaml")


def test_clean_handles_numpy_and_non_finite_values():
    cleaned = _clean({"a": np.float64(1.5), "b": float("inf"), "c": np.int64(3),
                      "d": [np.nan, 2.0], "e": np.bool_(True), "f": 1 + 2j})
    assert cleaned == {"a": 1.5, "b": None, "c": 3, "d": [None, 2.0], "e": True, "f": {"re": 1.0, "im": 2.0}}
    json.dumps(cleaned)


def test_report_dict_is_json_safe(report):
    json.dumps(report_dict(report), allow_nan=False)


def test_single_check_rendering():
    I = np.eye(2)
    results = evaluate("F6", Instance.from_matrices([I, I]), {"k": 1})
    human = render_results(results, "human")
    assert human.startswith("F6: pass")
    rows = list(csv.DictReader(io.StringIO(render_results(results, "csv"))))
    assert float(rows[0]["slack"]) == results[0].slack
    payload = json.loads(render_results(results, "json"))
    assert payload[0]["slack"] == results[0].slack


if __name__ == "__main__":
    pytest.main([__file__])
