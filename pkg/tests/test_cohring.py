from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vwref.cohring import (
    CURVE,
    CXC,
    P1,
    POINT,
    SURFACE,
    chern_from_ch,
    exp_class,
    get_ring,
    integrate,
    invert_unit,
    register_ring,
    ring_names,
    todd_from_tangent_ch,
)
from vwref.errors import DimensionTooLarge, MixedRings, NonNilpotent, NotInvertible, ScenarioSchemaError
from vwref.scalar import RatFunc, param, quantum_integer

from strategies import fractions

RINGS = [POINT, CURVE, CXC, SURFACE, P1, get_ring("CXC", g=3)]


@pytest.mark.parametrize("ring", RINGS, ids=lambda r: r.label)
def test_ring_axioms(ring):
    assert ring.check_axioms() == []


def test_builtin_names():
    assert {"POINT", "CURVE", "CXC", "SURFACE"} <= set(ring_names())
    assert P1 == get_ring("CURVE", g=0)
    assert P1 != CURVE
    assert P1.label == "CURVE(g=0)"


def test_cxc_intersections():
    chi = 2 - 2 * param("g")
    a, b, D = CXC.gen("a"), CXC.gen("b"), CXC.gen("D")
    assert integrate(a * b) == chi**2
    assert integrate(D * D) == chi
    assert integrate(a * D) == -chi
    assert integrate(a * a) == 0
    assert integrate(D) == 0


def test_surface_canonical_square():
    k = SURFACE.gen("kappa")
    assert integrate(k * k) == param("g") - 1


def _classes(ring):
    gens = [ring.gen(b) for b in ring.basis[1:]]
    return st.lists(fractions, min_size=len(gens), max_size=len(gens)).map(
        lambda cs: sum((g * c for g, c in zip(gens, cs)), ring.zero())
    )


@given(_classes(CXC), _classes(CXC))
def test_exp_is_a_homomorphism(x, y):
    assert exp_class(x + y) == exp_class(x) * exp_class(y)


@given(_classes(SURFACE), fractions.filter(bool))
def test_invert_unit(x, c):
    u = x + c
    assert u * invert_unit(u) == SURFACE.one()


@given(_classes(CXC))
def test_parse_round_trip(x):
    text = " + ".join(f"({c.canonical()})*{b}" for c, b in zip(x.coeffs, CXC.basis) if c) or "0"
    text = text.replace("*one", "")
    assert CXC.parse(text) == x


def test_parse_exp_and_params():
    x = SURFACE.parse("exp(kappa)")
    assert x == SURFACE.one() + SURFACE.gen("kappa") + SURFACE.gen("pt") * (param("g") - 1) / 2
    y = CURVE.parse("qint(2) * k")
    assert y.part(2) == CURVE.gen("k") * quantum_integer(2)


def test_errors():
    with pytest.raises(NonNilpotent):
        exp_class(CURVE.one())
    with pytest.raises(NotInvertible):
        invert_unit(CURVE.gen("k"))
    with pytest.raises(MixedRings):
        CURVE.gen("k") + P1.gen("k")
    with pytest.raises(MixedRings):
        CURVE.one() * SURFACE.one()
    with pytest.raises(ScenarioSchemaError):
        get_ring("NOPE")
    with pytest.raises(ScenarioSchemaError):
        get_ring("CURVE", h=1)


# --- Todd classes, against Riemann-Roch ---------------------------------------


def test_todd_curve_gives_holomorphic_euler_characteristic():
    td = todd_from_tangent_ch(CURVE.parse("1 - k"), rank=1)
    assert integrate(td) == 1 - param("g")
    assert integrate(todd_from_tangent_ch(P1.parse("1 - k"))) == 1


def test_todd_surface_is_noether():
    # T_S: rank 2, c1 = -K, c2 = c2(S); ch2 = (K^2 - 2 c2)/2
    g, c2 = param("g"), param("c2")
    chT = SURFACE.parse("2 - kappa") + SURFACE.gen("pt") * ((g - 1) - 2 * c2) / 2
    assert chern_from_ch(chT)[1] == SURFACE.gen("pt") * c2
    assert integrate(todd_from_tangent_ch(chT, rank=2)) == (g - 1 + c2) / 12


def test_todd_product_of_curves():
    chT = CXC.parse("2 - a - b")
    assert integrate(todd_from_tangent_ch(chT)) == (1 - param("g")) ** 2


def test_todd_rank_mismatch():
    with pytest.raises(ValueError):
        todd_from_tangent_ch(CURVE.parse("1 - k"), rank=2)


def test_register_ring_and_dimension_limit():
    register_ring(
        {
            "name": "P3TEST",
            "basis": [
                {"name": "one", "degree": 0},
                {"name": "h", "degree": 2},
                {"name": "h2", "degree": 4},
                {"name": "h3", "degree": 6},
            ],
            "products": {"h*h": "h2", "h*h2": "h3"},
            "integral": {"h3": 1},
        }
    )
    R = get_ring("P3TEST")
    assert R.check_axioms() == []
    assert integrate(exp_class(R.gen("h") * 2)) == Fraction(8, 6)
    with pytest.raises(DimensionTooLarge):
        todd_from_tangent_ch(R.parse("3 + 4*h"))
