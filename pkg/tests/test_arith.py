from fractions import Fraction

import pytest
import sympy

from integral_points.arith import (HomForm, SPrimeSet, divisors, factor, is_prime, is_s_unit,
                                   normalize, parse_point, s_decompose)
from integral_points.errors import AllZero, DimMismatch, NonPrimitiveForm, ParseError


@pytest.mark.parametrize("raw, want", [
    ([Fraction(1, 2), Fraction(1, 3), 0], (3, 2, 0)),
    ([2, 4, 6], (1, 2, 3)),
    ([-1, 0, 0], (1, 0, 0)),
])
def test_normalize(raw, want):
    assert normalize(raw).coords == want


def test_normalize_rejects_zero_and_bad_dim():
    with pytest.raises(AllZero):
        normalize([0, 0, 0])
    with pytest.raises(DimMismatch):
        normalize([1, 2], ambient_dim=2)


def test_parse_point():
    assert parse_point("[2:-4:6]").coords == (1, -2, 3)
    with pytest.raises(ParseError):
        parse_point("1,x,2")


@pytest.mark.parametrize("form, P, want", [
    ("x0^2 + x1^2 + x2^2 + x3^2", (1, 0, 0, 0), 1),
    ("x0*x3 - x1*x2", (1, 1, 1, 1), 0),
    ("x0", (2, 1, 1), 2),
])
def test_evaluate(form, P, want):
    assert HomForm.parse(form, len(P))(P) == want


def test_forms_must_be_primitive_and_homogeneous():
    with pytest.raises(NonPrimitiveForm):
        HomForm.parse("2*x0 + 4*x1")
    with pytest.raises(ParseError):
        HomForm.parse("x0^2 + x1")


def test_factor_examples():
    assert factor(12) == {2: 2, 3: 1}
    assert factor(-7) == {7: 1}
    assert factor(1) == {}


@pytest.mark.parametrize("n", [2**61 - 1, 600851475143, 10**18 + 9, 3 * 5 * 7 * 11 * 13 * 10007,
                               (2**31 - 1) * (2**19 - 1)])
def test_factor_matches_sympy(n):
    assert factor(n) == sympy.factorint(n)
    assert is_prime(n) == sympy.isprime(n)


def test_s_decompose():
    assert s_decompose(12, SPrimeSet.of([2])) == (4, 3)
    assert s_decompose(12, SPrimeSet.of([2, 3])) == (12, 1)
    assert s_decompose(-5, SPrimeSet()) == (-1, 5)


def test_s_units():
    S = SPrimeSet.of([2, 3])
    assert is_s_unit(Fraction(-9, 16), S)
    assert not is_s_unit(10, S)
    assert not is_s_unit(0, S)


def test_divisors():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
