from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vwref.cohring import CURVE, CXC, P1, POINT, SURFACE
from vwref.eqkth import EqKClass, line, rank2, trivial
from vwref.errors import InvalidFixedLocus, NonLineAtom, ZeroWeightDenominator
from vwref.localize import FixedLocusData, check_symmetry, chi_t, euler_oracle, pole_report
from vwref.scalar import RatFunc, eval_at_t1, param, quantum_integer

from strategies import fractions


def _point_locus(P2):
    nvir = EqKClass(POINT, [trivial(4)] * P2 + [trivial(-2, -1)] * P2)
    num = EqKClass(POINT, [trivial(-3 * P2)])
    return FixedLocusData(POINT, num, nvir, POINT.zero())


@pytest.mark.parametrize("P2", [0, 1, 2, 3])
def test_point_locus(P2):
    f = chi_t(_point_locus(P2))
    assert f == (-1) ** P2 / quantum_integer(2) ** P2
    assert eval_at_t1(f) == Fraction(-1, 2) ** P2
    assert euler_oracle(_point_locus(P2)) == Fraction(-1, 2) ** P2


def test_shifted_cotangent_p1():
    k = P1.gen("k")
    data = FixedLocusData(
        P1,
        EqKClass(P1, [line(k, 1)]),
        EqKClass(P1, [line(k, 2, -1)]),
        P1.parse("1 - k"),
    )
    f = chi_t(data)
    assert f == -quantum_integer(2)
    assert eval_at_t1(f) == -2 == euler_oracle(data)


def test_curve_line_bundle_euler_characteristic():
    # no normal bundle: chi_t reduces to Riemann-Roch, chi(L) = deg L + 1 - g
    k = CURVE.gen("k")
    data = FixedLocusData(CURVE, EqKClass(CURVE, [line(k * 2, 0)]), EqKClass(CURVE, [trivial(2, -1)]), CURVE.parse("1 - k"))
    g = param("g")
    f = chi_t(data)
    # N^vir = -t, so the denominator inverts to 1 - t^-1; chi(K^2) = 3g - 3
    assert f == (1 - RatFunc.s_power(-2)) * (3 * g - 3)


def test_prefactor_scales():
    data = _point_locus(1)
    half = FixedLocusData(data.base, data.numerator, data.nvir, data.tangent_ch, RatFunc.coerce(Fraction(1, 2)))
    assert chi_t(half) == chi_t(data) / 2
    assert euler_oracle(half) == euler_oracle(data) / 2


def test_validation_errors():
    k = CURVE.gen("k")
    with pytest.raises(InvalidFixedLocus):
        chi_t(FixedLocusData(CURVE, EqKClass(CURVE), EqKClass(CURVE), CURVE.parse("1 - k")))
    with pytest.raises(InvalidFixedLocus):
        chi_t(FixedLocusData(CURVE, EqKClass(P1), EqKClass(CURVE, [trivial(2, -1)]), CURVE.parse("1 - k")))
    with pytest.raises(ZeroWeightDenominator):
        chi_t(FixedLocusData(CURVE, EqKClass(CURVE), EqKClass(CURVE, [line(k, 0, -1)]), CURVE.parse("1 - k")))


def test_oracle_rejects_rank2_by_default():
    om = SURFACE.parse("2 + kappa + (g - 1 - 2*c2)/2 * pt")
    data = FixedLocusData(
        SURFACE,
        EqKClass(SURFACE, [trivial(0)]),
        EqKClass(SURFACE, [rank2(om, 2, -1), trivial(2), trivial(-2, -1)]),
        SURFACE.parse("2 - kappa + (g - 1 - 2*c2)/2 * pt"),
    )
    with pytest.raises(NonLineAtom):
        euler_oracle(data)
    assert RatFunc.coerce(euler_oracle(data, allow_rank2=True)) == RatFunc.coerce(eval_at_t1(chi_t(data)))


@st.composite
def curve_loci(draw, ring, dim):
    """Random line-atom fixed loci with rank(N^vir) = -dim."""
    gens = [ring.gen(b) for b in ring.basis if b != "one" and b != "vol"]

    def c1():
        return sum((g * draw(fractions) for g in gens), ring.zero())

    w = st.integers(-4, 4).filter(bool)
    n = draw(st.integers(0, 2))
    pos = [line(c1(), draw(w)) for _ in range(n)]
    neg = [line(c1(), draw(w), -1) for _ in range(n + dim)]
    num = [line(c1(), draw(st.integers(-3, 3)), draw(st.sampled_from([1, -1]))) for _ in range(draw(st.integers(0, 2)))]
    tangent = ring.parse("1 - k") if dim == 1 else ring.parse("2 - a - b")
    return FixedLocusData(ring, EqKClass(ring, num), EqKClass(ring, pos + neg), tangent)


@given(curve_loci(CURVE, 1))
def test_t1_limit_matches_euler_oracle_on_curves(data):
    assert RatFunc.coerce(eval_at_t1(chi_t(data))) == RatFunc.coerce(euler_oracle(data))


@given(curve_loci(CXC, 2))
def test_t1_limit_matches_euler_oracle_on_cxc(data):
    assert RatFunc.coerce(eval_at_t1(chi_t(data))) == RatFunc.coerce(euler_oracle(data))


def test_symmetry_and_poles():
    assert check_symmetry(quantum_integer(3) / quantum_integer(2))
    assert not check_symmetry(RatFunc.s_power(2))
    rep = pole_report(1 / quantum_integer(2) ** 3)
    assert rep == {"cyclotomic_denominator": True, "cyclotomic_factors": {"4": 3}, "origin_pole": False}
    assert pole_report(RatFunc.parse("s^-1 / (1 + t)"))["origin_pole"]
    assert pole_report(RatFunc.parse("1/(2 + t)"))["cyclotomic_denominator"] is False
