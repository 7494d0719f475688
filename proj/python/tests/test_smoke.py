import math

import numpy as np
import pytest

import twverlinde as tv


def test_weights():
    w = tv.weights("A3~2", 1)
    assert w["coordinates"] == "C2"
    assert w["weights"] == [[0, 0], [1, 0]]
    assert len(tv.weights("A2", 1)["weights"]) == 3


def test_crossed_smatrix():
    s = tv.smatrix("crossed", "D4", 2, order=3)
    h = 1 / math.sqrt(2)
    assert np.allclose(s["matrix"], [[h, h], [h, -h]], atol=1e-9)
    assert s["rows"] == [[0, 0], [0, 1]]


def test_unitary_and_symmetric():
    m = tv.smatrix("twisted", "A4~2", 2)["matrix"]
    assert np.allclose(m @ m.conj().T, np.eye(len(m)), atol=1e-8)
    assert np.allclose(m, m.T, atol=1e-8)


def test_routes_agree():
    a = tv.smatrix("twisted", "D4~3", 3)["matrix"]
    b = tv.smatrix("twisted", "D4~3", 3, via="transpose")["matrix"]
    # rows agree up to a sign fixed by the zero column
    signs = np.sign((a[:, 0] / b[:, 0]).real)
    assert np.allclose(a, signs[:, None] * b, atol=1e-8)


def test_rank():
    spec = {
        "algebra": "D4",
        "sigma_order": 3,
        "level": 2,
        "points": [{"monodromy": 1, "weight": [0, 0]}] * 3,
    }
    r = tv.rank(spec)
    assert r["rank"] == 3
    assert r["residual"] < 1e-6
    assert tv.verify_propagation(spec)["ok"]


def test_factorization():
    spec = {
        "algebra": "A3",
        "sigma_order": 2,
        "level": 1,
        "genus": 1,
        "points": [{"monodromy": 1, "weight": [0, 0]}] * 2,
    }
    rep = tv.verify_factorization(spec, 1)
    assert rep["ok"] and rep["lhs"] == rep["rhs"] == 4


def test_fusion():
    f = tv.twisted_fusion("A3", 2, 1)
    assert f["basis"]["weights"] == [[0, 0, 0], [0, 1, 0]]
    assert {"lambda": 1, "mu": 1, "nu": 0, "value": 1} in f["constants"]
    assert tv.fusion("A1", 1)["valid"]


def test_errors():
    with pytest.raises(ValueError):
        tv.weights("Q7", 1)
    with pytest.raises(tv.GroupTooLarge):
        tv.smatrix("untwisted", "A7", 1)
    with pytest.raises(tv.InvalidArgument):
        tv.rank({"algebra": "D4", "level": 1, "points": [], "colour": 1})
