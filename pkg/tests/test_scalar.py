from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vwref.errors import ParameterInDenominator, PoleAtOne, UndeclaredParameter
from vwref.scalar import (
    S,
    T,
    RatFunc,
    bar,
    cyclotomic_factorization,
    cyclotomic_poly,
    declare_parameter,
    declared_parameters,
    eval_at_t1,
    param,
    quantum_integer,
    substitute_tr,
)

from strategies import nonzero_ratfuncs, ratfuncs

# --- quantum integers ----------------------------------------------------


def test_qint_small_values():
    assert quantum_integer(0) == 0
    assert quantum_integer(1) == 1
    assert quantum_integer(2) == S + S**-1
    assert quantum_integer(3) == T + 1 + T**-1
    assert quantum_integer(-2) == -quantum_integer(2)


def test_qint_canonical_strings():
    assert quantum_integer(3).canonical() == "s^-2 * (1 + s^2 + s^4) / (1)"
    assert (1 / quantum_integer(2)).canonical() == "s^1 * (1) / (1 + s^2)"


@pytest.mark.parametrize("n", range(-6, 13))
def test_qint_at_one(n):
    assert eval_at_t1(quantum_integer(n)) == n


@given(st.integers(1, 12), st.integers(1, 12))
def test_qint_multiple_cover_identity(chi, r):
    assert substitute_tr(quantum_integer(chi), r) * quantum_integer(r) == quantum_integer(r * chi)


@given(st.integers(-8, 8), st.integers(-8, 8))
def test_qint_recursion(m, n):
    # [m+n] = t^(n/2)[m] + t^(-m/2)[n]
    lhs = quantum_integer(m + n)
    assert lhs == RatFunc.s_power(n) * quantum_integer(m) + RatFunc.s_power(-m) * quantum_integer(n)


# --- field structure -------------------------------------------------------


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@given(ratfuncs(), nonzero_ratfuncs())
def test_division_inverts_multiplication(a, b):
    assert (a * b) / b == a
    assert b * b.inverse() == 1


@given(ratfuncs())
def test_canonical_idempotent(f):
    text = f.canonical()
    g = RatFunc.parse(text)
    assert g == f
    assert g.canonical() == text


@given(ratfuncs())
def test_bar_is_an_involution(f):
    assert bar(bar(f)) == f


@given(ratfuncs(), ratfuncs())
def test_bar_is_a_ring_map(a, b):
    assert bar(a * b) == bar(a) * bar(b)
    assert bar(a + b) == bar(a) + bar(b)


@given(ratfuncs(params=False), st.integers(1, 4))
def test_substitute_tr_is_multiplicative(f, r):
    assert substitute_tr(f * f, r) == substitute_tr(f, r) ** 2


@given(ratfuncs())
def test_eval_at_t1_is_additive(f):
    assert eval_at_t1(f + f) == eval_at_t1(f) * 2


def test_denominator_normal_form():
    f = RatFunc.parse("1 / (2 - 2*t)")
    num, den = f.canonical().split(" / ")
    assert den == "(-1 + s^2)"
    assert f.den_coeffs[0] != 0
    assert f.den_coeffs[-1] > 0


def test_fractional_powers():
    assert T ** Fraction(1, 2) == S
    assert (T**3) ** Fraction(-1, 3) == T**-1
    with pytest.raises(ValueError):
        quantum_integer(2) ** Fraction(1, 2)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        RatFunc.coerce(1) / RatFunc()


# --- parameters -------------------------------------------------------------


def test_default_parameters():
    assert {"g", "c2"} <= set(declared_parameters())


def test_parameters_only_in_numerator():
    g = param("g")
    assert (g / quantum_integer(2)).canonical() == "s^1 * (g) / (1 + s^2)"
    with pytest.raises(ParameterInDenominator):
        1 / (T - g)


def test_undeclared_parameter():
    with pytest.raises(UndeclaredParameter):
        RatFunc.parse("zz + 1")
    with pytest.raises(UndeclaredParameter):
        param("zz")


def test_declare_parameter():
    declare_parameter("kappa")
    assert "kappa" in declared_parameters()
    f = RatFunc.parse("kappa * t")
    assert eval_at_t1(f).symbols() == ("kappa",)


def test_parameter_arithmetic_cancels():
    g = param("g")
    c2 = param("c2")
    f = (g * quantum_integer(3) + c2) / quantum_integer(2)
    assert f - c2 / quantum_integer(2) == g * quantum_integer(3) / quantum_integer(2)
    assert (f * 2 - f - f) == 0


# --- t = 1 ------------------------------------------------------------------


def test_eval_at_t1_removable_singularity():
    # (t - 1)/(t^2 - 1) = 1/(t + 1)
    f = (T - 1) / (T**2 - 1)
    assert eval_at_t1(f) == Fraction(1, 2)
    assert eval_at_t1(quantum_integer(6) / quantum_integer(3)) == 2


def test_eval_at_t1_pole():
    with pytest.raises(PoleAtOne):
        eval_at_t1(1 / (1 - T))


def test_eval_at_t1_with_parameters():
    g = param("g")
    v = eval_at_t1((2 - 2 * g) / quantum_integer(2) ** 3)
    assert v.evaluate({"g": 3}) == Fraction(-4, 8)


# --- poles -------------------------------------------------------------------


def test_cyclotomic_poly():
    assert cyclotomic_poly(1) == [-1, 1]
    assert cyclotomic_poly(2) == [1, 1]
    assert cyclotomic_poly(6) == [1, -1, 1]
    assert cyclotomic_poly(12) == [1, 0, -1, 0, 1]


def test_cyclotomic_factorization():
    # [6]_t = s^-5 (s^12 - 1)/(s^2 - 1), in the variable s
    assert cyclotomic_factorization(1 / quantum_integer(6)) == {3: 1, 4: 1, 6: 1, 12: 1}
    assert cyclotomic_factorization(1 / quantum_integer(2) ** 2) == {4: 2}
    assert cyclotomic_factorization(RatFunc.parse("1 / (3 + s^2)")) is None


def test_origin_pole():
    assert RatFunc.parse("s^-1").has_origin_pole()
    assert not RatFunc.parse("1 + s").has_origin_pole()
