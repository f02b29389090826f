"""Smoke tests for the python bindings."""

from fractions import Fraction

import pytest

import betheperm as bp

ONES3 = [[1, 1, 1], [1, 1, 1], [1, 1, 1]]
H24 = [[1, 1, 1, 0], [0, 1, 1, 1]]


def test_permanent():
    assert bp.permanent(ONES3) == 6
    assert bp.permanent(ONES3, algo="naive") == 6
    assert bp.permanent([[1, 1], [1, 0]]) == 1


def test_parse_roundtrip():
    text = "2 3\n1 0 1\n0 1 1\n"
    rows = bp.parse_dense(text)
    assert rows == [[1, 0, 1], [0, 1, 1]]
    assert bp.serialize_dense(rows) == text


def test_expand_exponents():
    h = bp.expand_exponents([[0, 0, 0, 0], [-1, 0, 1, 2], [-1, 0, 2, 1]], 3)
    assert len(h) == 9 and len(h[0]) == 12
    assert h[0][0] == 1
    assert h[3][0] == 0


def test_degree_average():
    r = bp.degree_bethe_permanent([[1, 1], [1, 1]], 2)
    assert r["mean"] == Fraction(3)
    assert r["root"] == pytest.approx(3 ** 0.5)
    assert bp.q(2, 3) == Fraction(4)
    assert bp.q2_closed(3) == 4
    assert bp.t3(1) == Fraction(4) == bp.t3_closed(1)
    assert bp.that3(2) == Fraction(6) == bp.that3_closed(2)


def test_limit_value():
    r = bp.bethe_permanent(ONES3, tol=1e-9)
    assert r["converged"]
    assert r["value"] == pytest.approx(64.0 / 27.0, abs=1e-6)
    empty = bp.bethe_permanent([[1, 1], [0, 0]])
    assert empty["value"] == 0.0


def test_vectors_and_cone():
    v = bp.perm_vector(H24, [1, 2, 3])
    assert v == [Fraction(2), Fraction(1), Fraction(1), Fraction(0)]
    cone = bp.in_fundamental_cone(H24, [2.0, 1.0, 1.0, 0.0])
    assert cone["member"]
    bad = bp.in_fundamental_cone([[1, 1, 1, 1], [0, 1, 1, 1], [0, 1, 1, 1]],
                                 [54.0, 2.0, 2.0, 2.0])
    assert not bad["member"]
    assert bp.awgnc_pseudo_weight([3.0, 1.0, 1.0, 1.0]) == pytest.approx(3.0)


def test_min_weight():
    r = bp.min_pseudo_weight(H24, family="perm")
    assert r["weight"] == Fraction(8, 3)
    assert r["beta"] == [1, 2, 3]


def test_degree_vector():
    v = bp.bethe_perm_vector_degree(H24, [1, 2, 3], 3)
    assert v[0] == pytest.approx(4 ** (1 / 3), abs=1e-12)
    assert v[1] == pytest.approx(1.0, abs=1e-12)
    assert v[3] == 0.0


def test_cofactor_inequality():
    r = bp.cofactor_inequality(ONES3, row=1)
    assert r["holds"]
    assert r["lhs"] == pytest.approx(64.0 / 27.0, abs=1e-6)
    assert r["rhs"] == pytest.approx(3.0, abs=1e-6)
