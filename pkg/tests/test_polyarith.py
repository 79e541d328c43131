import itertools

import pytest
from hypothesis import given, strategies as st

from ramseyfin.errors import ParseError
from ramseyfin.polyarith import (IDENTITY, ZERO, IntPoly, PolyFamily, deg_coef, dilate, enumerate_family,
                                 evaluate, family_size, format_poly, parse_poly, shift)

polys = st.lists(st.integers(-6, 6), min_size=0, max_size=5).map(lambda cs: IntPoly((0,) + tuple(cs)))


def naive_eval(coeffs, x):
    return sum(c * x ** k for k, c in enumerate(coeffs))


class TestIntPoly:
    def test_trailing_zeros_trimmed(self):
        assert IntPoly((0, 3, 0, 0)).coeffs == (0, 3)
        assert IntPoly(()).coeffs == (0,)

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            IntPoly((1, 2))

    def test_degree(self):
        assert ZERO.degree == 0
        assert IntPoly.monomial(3, -2).coeffs == (0, 0, 0, -2)


@pytest.mark.parametrize("coeffs,x,expected", [
    ((0, 0, 1), 3, 9),
    ((0, 3, 0, 1), -2, -14),
    ((0, 5, -7, 2), 0, 0),
])
def test_evaluate_examples(coeffs, x, expected):
    assert evaluate(IntPoly(coeffs), x) == expected


def test_shift_examples():
    assert shift(IntPoly((0, 0, 1)), 3).coeffs == (0, 6, 1)
    assert shift(IntPoly((0, 0, 0, 1)), 1).coeffs == (0, 3, 3, 1)
    p = IntPoly((0, 4, -1))
    assert shift(p, 0) == p


def test_dilate_examples():
    assert dilate(IntPoly((0, 0, 1)), 2).coeffs == (0, 0, 4)
    assert dilate(IntPoly((0, 1, 1)), 3).coeffs == (0, 3, 9)
    p = IntPoly((0, 2, 0, -5))
    assert dilate(p, 1) == p


def test_deg_coef_examples():
    assert deg_coef(IntPoly((0, 3, 0, 1))) == (3, 3)
    assert deg_coef(IntPoly((0, 0, -5))) == (2, 5)
    assert deg_coef(IDENTITY) == (1, 1)
    assert deg_coef(ZERO) == (0, 0)


@given(polys, st.integers(-20, 20), st.integers(-20, 20))
def test_shift_identity(p, y, n):
    assert evaluate(shift(p, y), n) == naive_eval(p.coeffs, n + y) - naive_eval(p.coeffs, y)
    assert shift(p, y).coeffs[0] == 0


@given(polys, st.integers(-20, 20), st.integers(-20, 20))
def test_dilate_identity(p, y, n):
    assert evaluate(dilate(p, y), n) == naive_eval(p.coeffs, y * n)


@given(polys, st.integers(-50, 50))
def test_horner_matches_naive(p, x):
    assert evaluate(p, x) == naive_eval(p.coeffs, x) == p(x)


@given(polys)
def test_format_parse_roundtrip(p):
    assert parse_poly(format_poly(p)) == p


class TestEnumerateFamily:
    def test_examples(self):
        fam = enumerate_family(1, 1)
        assert set(fam.polys) == {IntPoly((0, 1)), IntPoly((0, -1))}
        assert len(enumerate_family(2, 1).polys) == 8
        assert enumerate_family(1, 0, include_zero=True).polys == (ZERO,)

    @pytest.mark.parametrize("D,C,inc", [(1, 2, False), (2, 2, True), (3, 1, False), (2, 3, False)])
    def test_against_brute_force(self, D, C, inc):
        brute = set()
        for cs in itertools.product(range(-C, C + 1), repeat=D):
            p = IntPoly((0,) + cs)
            if inc or not p.is_zero():
                brute.add(p)
        fam = enumerate_family(D, C, include_zero=inc)
        assert len(fam.polys) == len(set(fam.polys)) == family_size(D, C, inc)
        assert set(fam.polys) == brute


class TestParse:
    @pytest.mark.parametrize("text,coeffs", [
        ("d^2+3d", (0, 3, 1)),
        ("d", (0, 1)),
        ("3*d^2 - d", (0, -1, 3)),
        ("-d^3", (0, 0, 0, -1)),
        ("2d+2d", (0, 4)),
        ("d-d", (0,)),
    ])
    def test_accepts(self, text, coeffs):
        assert parse_poly(text).coeffs == coeffs

    @pytest.mark.parametrize("text", ["5", "d+1", "", "d^", "x", "*d", "d**2"])
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_poly(text)

    def test_error_names_token(self):
        with pytest.raises(ParseError) as exc:
            parse_poly("d^2+7")
        assert exc.value.token == "7"


def test_family_rejects_duplicates():
    with pytest.raises(ValueError):
        PolyFamily((IDENTITY, IntPoly((0, 1))))
    assert PolyFamily.of("d", "d^2").labels() == ["d", "d^2"]
