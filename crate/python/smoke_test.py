"""Smoke test for the Python bindings: twisted cubic, GG9 template, Gorenstein rules."""

import pytest

import reeslab

CUBIC = ["X1*X4 - X2*X3", "X2^2 - X1*X3", "X3^2 - X2*X4"]


@pytest.fixture
def cubic():
    ring = reeslab.Ring(["X1", "X2", "X3", "X4"])
    return reeslab.Ideal(ring, CUBIC)


def test_ring_and_groebner_basis(cubic):
    assert cubic.ring.vars == ["X1", "X2", "X3", "X4"]
    assert cubic.ring.degrees == [(1, 0)] * 4
    assert len(cubic.groebner_basis()) == 3
    assert cubic.contains("X1*(X3^2 - X2*X4)")
    assert not cubic.contains("X1")


def test_hilbert_data(cubic):
    assert cubic.hilbert_series(of="ideal")["text"] == "(3s^2 - 2s^3)/((1-s)^4)"
    assert cubic.power(2).hilbert_series(of="ideal")["text"] == "(6s^4 - 6s^5 + s^6)/((1-s)^4)"
    assert cubic.hilbert_polynomial() == "3s+1"
    assert cubic.dim_mult()["dimension"] == 2


def test_betti_and_invariants(cubic):
    square = cubic.power(2).betti()
    assert square["invariants"]["a_star"] == 2
    assert square["invariants"]["reg"] == 4


def test_rees(cubic):
    r = cubic.rees()
    assert r["kernel_verified"]
    assert r["analytic_spread"] == 3
    assert r["series_text"] == "(1 - 2s^3t + s^6t^2)/((1-s)^4*(1-s^2t)^3)"


def test_fits(cubic):
    fam = reeslab.fit_hilbert_polynomials(cubic, 3, threshold=-1)
    assert fam["fit"]["window"] == [0, 1, 2, 3]
    series = reeslab.fit_hilbert_series(cubic, 3)
    assert [o["alpha"] for o in series["offsets"]] == [0, 1, 2]


def test_resolution_template():
    ring = reeslab.Ring(["X", "Y"])
    gg9 = reeslab.Ideal(ring, ["X^7", "Y^7", "X^6*Y + X^2*Y^5"])
    t = reeslab.predict_resolutions(gg9, [4, 5, 6, 7], threshold=4)
    assert t["text"] == "0 → A(−2−7j)^{15} ⊕ A(−1−7j)^{7j - 30} → A(−7j)^{7j - 14} → I^j → 0"


def test_gin_is_borel():
    ring = reeslab.Ring(["X1", "X2", "X3"])
    i = reeslab.Ideal(ring, ["X1*X2 + X3^2", "X2^2 - X1*X3"])
    g = i.gin(seed=7)
    assert g["series_preserved"]
    assert g["borel"]["is_borel"]


def test_gorenstein_diagonals():
    mm = reeslab.gorenstein_diagonals("maxminors", rows=3, cols=2)
    assert [(d["c"], d["e"]) for d in mm["diagonals"]] == [(6, 1)]
    dp = reeslab.gorenstein_diagonals("formring", n=3, d=2, height=2, a=2)
    assert [(d["c"], d["e"]) for d in dp["diagonals"]] == [(3, 1)]


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        reeslab.Ring(["x"], field="Fp:4")
    ring = reeslab.Ring(["x", "y"])
    with pytest.raises(ValueError):
        reeslab.Ideal(ring, ["x*)y"])
