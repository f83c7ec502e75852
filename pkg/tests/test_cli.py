import json

import numpy as np
import pytest

from qpurify import random_w_form, reconstruct
from qpurify import serialize
from qpurify.cli import (EXIT_BAD_INPUT, EXIT_NOT_PURIFIABLE, EXIT_OK, main)


@pytest.fixture
def w_state_file(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(serialize.dumps_17g(
        {"kind": "w_param", "p": 0.5, "alpha": 0.6, "beta": 0.8,
         "gamma": 0.0}))
    return str(path)


@pytest.fixture
def separable_file(tmp_path):
    mat = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
    path = tmp_path / "sep.json"
    path.write_text(serialize.dumps_17g(
        {"kind": "dense", "matrix": serialize.matrix_to_pairs(mat)}))
    return str(path)


def test_analyze_w_state(w_state_file, capsys):
    assert main(["analyze", w_state_file]) == EXIT_OK
    out = capsys.readouterr().out
    assert "dim2_single_product_ray" in out
    assert "purifiable (n=2): yes" in out


def test_analyze_json_output(w_state_file, capsys):
    assert main(["analyze", w_state_file, "--json"]) == EXIT_OK
    parsed = json.loads(capsys.readouterr().out)
    assert parsed["rank"] == 2
    assert parsed["purifiable"] == {"n1": False, "n2": True}


def test_analyze_separable_exit_code(separable_file, capsys):
    assert main(["analyze", separable_file]) == EXIT_NOT_PURIFIABLE
    assert "no" in capsys.readouterr().out


def test_pair_purifiable(w_state_file, capsys):
    assert main(["pair", w_state_file, w_state_file]) == EXIT_OK
    assert "probability" in capsys.readouterr().out


def test_pair_json(w_state_file, capsys):
    assert main(["pair", w_state_file, w_state_file, "--json"]) == EXIT_OK
    parsed = json.loads(capsys.readouterr().out)
    assert parsed["verdict"] == "purifiable"
    assert 0.0 < parsed["probability"] < 1.0


def test_pair_not_purifiable(separable_file, capsys):
    assert main(["pair", separable_file, separable_file]) == EXIT_NOT_PURIFIABLE
    assert "reason" in capsys.readouterr().out


def test_bad_input_exit_code(tmp_path, capsys):
    missing = str(tmp_path / "missing.json")
    assert main(["analyze", missing]) == EXIT_BAD_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["analyze", str(bad)]) == EXIT_BAD_INPUT
    not_a_state = tmp_path / "matrix.json"
    mat = serialize.matrix_to_pairs(np.eye(4, dtype=complex))  # trace 4
    not_a_state.write_text(json.dumps({"kind": "dense", "matrix": mat}))
    assert main(["analyze", str(not_a_state)]) == EXIT_BAD_INPUT
    capsys.readouterr()


def test_search_small_budget(w_state_file, capsys):
    args = ["search", w_state_file, w_state_file,
            "--seed", "7", "--restarts", "12", "--iters", "400"]
    assert main(args) == EXIT_OK
    out = capsys.readouterr().out
    assert "analytic optimum" in out


def test_search_json_deterministic(w_state_file, capsys):
    args = ["search", w_state_file, w_state_file, "--json",
            "--seed", "3", "--restarts", "12", "--iters", "400"]
    assert main(args) == EXIT_OK
    first = capsys.readouterr().out
    assert main(args) == EXIT_OK
    second = capsys.readouterr().out
    assert first == second
    parsed = json.loads(first)
    assert parsed["feasible"] is True
    assert parsed["gap"] <= 1e-6


def test_search_infeasible_exit(separable_file, capsys):
    args = ["search", separable_file, separable_file,
            "--seed", "0", "--restarts", "4", "--iters", "100"]
    assert main(args) == EXIT_NOT_PURIFIABLE
    capsys.readouterr()
