#!/usr/bin/env python3
"""
End-to-end tests of the command line.
"""

import csv
import io
import json
import math

import numpy as np
import pytest

from sectorix import cmat
from sectorix.cli import EXIT_INPUT, EXIT_OK, run
from sectorix.sector import SectorGenSpec, gen_sector


@pytest.fixture
def identities(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    cmat.write_matrix(np.eye(3), a)
    cmat.write_matrix(np.eye(3), b)
    return str(a), str(b)


def test_counterexample_sv(capsys):
    assert run(["counterexample", "--id", "sv"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "3.07774" in out
    assert "2.07774" in out
    assert "1.82851" in out
    assert "naive inequality VIOLATED" in out


def test_counterexample_json(capsys):
    assert run(["counterexample", "--id", "det", "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload[0]["name"] == "det"
    assert payload[0]["violated"] is True


def test_check_f6_on_identities(identities, capsys):
    a, b = identities
    assert run(["check", "--id", "F6", "--a", a, "--b", b, "--k", "2", "--format", "json"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload[0]["slack"] == pytest.approx(0.75)
    assert payload[0]["status"] == "pass"


def test_check_single_operand_uses_identity_map(identities, capsys):
    a, _ = identities
    assert run(["check", "--id", "YL1", "--a", a]) == EXIT_OK
    assert capsys.readouterr().out.startswith("YL1: pass")


def test_check_input_errors(identities, tmp_path):
    a, b = identities
    assert run(["check", "--id", "F6", "--a", str(tmp_path / "missing.json"), "--b", b]) == EXIT_INPUT
    assert run(["check", "--id", "NOT_AN_ID", "--a", a, "--b", b]) == EXIT_INPUT
    assert run(["check", "--id", "F6", "--a", a]) == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{\"n\": 2}")
    assert run(["check", "--id", "F6", "--a", str(bad), "--b", b]) == EXIT_INPUT
    assert run(["check"]) == EXIT_INPUT


def test_gen_round_trip(tmp_path):
    out = tmp_path / "A.json"
    assert run(["gen", "--kind", "sector", "--n", "4", "--alpha", "pi/4", "--seed", "3", "--out", str(out)]) == EXIT_OK
    expected = gen_sector(SectorGenSpec(n=4, alpha_max=math.pi / 4, seed=3)).A
    assert np.array_equal(cmat.read_matrix(out), expected)


def test_gen_requires_out_and_alpha(tmp_path):
    assert run(["gen", "--kind", "sector", "--n", "3", "--alpha", "pi/4"]) == EXIT_INPUT
    assert run(["gen", "--kind", "sector", "--n", "3", "--out", str(tmp_path / "x.json")]) == EXIT_INPUT


def test_angle_of_generated_matrix(tmp_path, capsys):
    out = tmp_path / "A.json"
    run(["gen", "--kind", "sector", "--n", "3", "--alpha", "pi/6", "--seed", "1", "--out", str(out)])
    capsys.readouterr()
    assert run(["angle", "--a", str(out), "--format", "json", "--grid", "2000"]) == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["accretive"] is True
    assert payload["alpha"] <= math.pi / 6 + 1e-8
    assert payload["alpha_grid"] <= payload["alpha"] + 1e-12


def test_mean_of_commuting_pair(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    cmat.write_matrix(np.diag([1.0, 4.0]), a)
    cmat.write_matrix(np.diag([4.0, 1.0]), b)
    assert run(["mean", "--a", str(a), "--b", str(b), "--kind", "harmonic"]) == EXIT_OK
    result = cmat.from_json_dict(json.loads(capsys.readouterr().out))
    np.testing.assert_allclose(result, np.diag([1.6, 1.6]), atol=1e-14)


SWEEP_ARGS = ["sweep", "--ids", "F6,L13", "--n", "2..3", "--alphas", "0,pi/4", "--trials", "2",
              "--seed", "3", "--workers", "1"]


def test_sweep_output_is_byte_identical(tmp_path):
    first = tmp_path / "one.json"
    second = tmp_path / "two.json"
    assert run(SWEEP_ARGS + ["--out", str(first)]) == EXIT_OK
    assert run(SWEEP_ARGS + ["--out", str(second)]) == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_sweep_csv_matches_json(tmp_path):
    as_json = tmp_path / "r.json"
    as_csv = tmp_path / "r.csv"
    run(SWEEP_ARGS + ["--out", str(as_json)])
    run(SWEEP_ARGS + ["--format", "csv", "--out", str(as_csv)])
    results = {row["id"]: row for row in json.loads(as_json.read_text())["results"]}
    for row in csv.DictReader(io.StringIO(as_csv.read_text())):
        assert float(row["min_slack"]) == results[row["id"]]["min_slack"]


def test_sweep_rejects_bad_config():
    assert run(["sweep", "--trials", "0"]) == EXIT_INPUT
    assert run(["sweep", "--config", "no_such_preset"]) == EXIT_INPUT
    assert run(["sweep", "--ids", "F6", "--alphas", "2.0"]) == EXIT_INPUT


if __name__ == "__main__":
    pytest.main([__file__])
