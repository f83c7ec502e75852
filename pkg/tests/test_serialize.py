import json

import numpy as np
import pytest

from qpurify import (WCanonicalForm, purify_pair, random_w_form, reconstruct,
                     validate_density)
from qpurify import serialize
from qpurify.ranges import classify_range, purifiable_n_copies, range_basis


def test_complex_matrix_round_trip():
    rng = np.random.default_rng(0)
    mat = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    pairs = serialize.matrix_to_pairs(mat)
    np.testing.assert_array_equal(serialize.pairs_to_matrix(pairs, (4, 4)),
                                  mat)


def test_state_round_trip_dense():
    rng = np.random.default_rng(1)
    state = reconstruct(random_w_form(rng))
    obj = serialize.state_to_json(state)
    parsed = serialize.parse_state(json.loads(json.dumps(obj)))
    np.testing.assert_allclose(parsed.matrix, state.matrix, atol=1e-15)


def test_state_round_trip_w_param():
    rng = np.random.default_rng(2)
    form = random_w_form(rng)
    parsed = serialize.parse_state(serialize.form_to_json(form))
    np.testing.assert_allclose(parsed.matrix, reconstruct(form).matrix,
                               atol=1e-12)


def test_w_param_default_identity_unitaries():
    parsed = serialize.parse_state(
        {"kind": "w_param", "p": 0.5, "alpha": 0.6, "beta": 0.8,
         "gamma": 0.0})
    expected = reconstruct(WCanonicalForm(
        u_a=np.eye(2), u_b=np.eye(2), p=0.5, alpha=0.6, beta=0.8, gamma=0.0))
    np.testing.assert_allclose(parsed.matrix, expected.matrix, atol=1e-15)


def test_parse_errors():
    with pytest.raises(serialize.ParseError):
        serialize.parse_state([1, 2, 3])
    with pytest.raises(serialize.ParseError):
        serialize.parse_state({"kind": "mystery"})
    with pytest.raises(serialize.ParseError):
        serialize.parse_state({"kind": "dense", "matrix": [[0.0]]})
    with pytest.raises(serialize.ParseError):
        # Well-formed JSON but not a density matrix (trace 2).
        mat = serialize.matrix_to_pairs(np.eye(4, dtype=complex) / 2.0)
        serialize.parse_state({"kind": "dense", "matrix": mat})
    with pytest.raises(serialize.ParseError):
        serialize.parse_state({"kind": "w_param", "p": 0.5})  # missing keys
    with pytest.raises(serialize.ParseError):
        serialize.load_state("/nonexistent/state.json")


def test_classification_report_is_json_serializable():
    rng = np.random.default_rng(3)
    state = reconstruct(random_w_form(rng))
    sub = range_basis(state)
    cls = classify_range(state)
    verdicts = {n: purifiable_n_copies(state, n) for n in (1, 2)}
    obj = serialize.classification_to_json(sub, cls, verdicts, 1e-9)
    text = serialize.dumps_17g(obj)
    parsed = json.loads(text)
    assert parsed["rank"] == 2
    assert parsed["class"] == "dim2_single_product_ray"
    assert parsed["purifiable"] == {"n1": False, "n2": True}


def test_purification_report_is_json_serializable():
    rng = np.random.default_rng(4)
    ra = reconstruct(random_w_form(rng))
    rb = reconstruct(random_w_form(rng))
    report = purify_pair(ra, rb)
    parsed = json.loads(serialize.dumps_17g(serialize.report_to_json(report,
                                                                     1e-9)))
    assert parsed["verdict"] == "purifiable"
    assert parsed["operators"]["system_order"] == "AA'|BB'"
    assert len(parsed["output_vector"]) == 16


def test_dumps_17g_is_deterministic_and_full_precision():
    value = 0.1 + 0.2  # 0.30000000000000004
    obj = {"x": value, "flag": True, "none": None, "list": [1, 2.5, "s"]}
    text1 = serialize.dumps_17g(obj)
    text2 = serialize.dumps_17g(json.loads(text1))
    assert text1 == text2
    assert json.loads(text1)["x"] == value  # bit-exact float round trip


def test_dumps_17g_rejects_unknown_types():
    with pytest.raises(TypeError):
        serialize.dumps_17g({"x": object()})
