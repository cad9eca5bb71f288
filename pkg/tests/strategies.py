"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from vwref.scalar import RatFunc, param, quantum_integer

small_int = st.integers(-6, 6)
fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4))


@st.composite
def laurent(draw, params=True):
    """A Laurent polynomial in s, optionally with g and c2 in the coefficients."""
    lo = draw(st.integers(-4, 2))
    n = draw(st.integers(0, 4))
    out = RatFunc()
    for e in range(lo, lo + n + 1):
        c = RatFunc.coerce(draw(fractions))
        if params and draw(st.booleans()):
            c = c * draw(st.sampled_from([param("g"), param("c2"), param("g") - 1]))
        out = out + c * RatFunc.s_power(e)
    return out


@st.composite
def denominators(draw):
    """Products of quantum integers and (1 + s^k), all nonzero at s = 0."""
    out = RatFunc.coerce(1)
    for _ in range(draw(st.integers(0, 2))):
        kind = draw(st.booleans())
        k = draw(st.integers(1, 4))
        out = out * (quantum_integer(k + 1) if kind else 1 + RatFunc.s_power(k))
    return out


@st.composite
def ratfuncs(draw, params=True):
    return draw(laurent(params)) / draw(denominators())


@st.composite
def nonzero_ratfuncs(draw, params=False):
    f = draw(ratfuncs(params))
    return f if f else RatFunc.coerce(draw(st.integers(1, 5)))
