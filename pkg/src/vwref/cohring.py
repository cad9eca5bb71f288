"""Truncated even cohomology rings of small fixed loci.

A :class:`CohRing` is a finite free module with a commutative product given by
structure constants and an integration functional on the top degree.  Classes
carry :class:`~vwref.scalar.RatFunc` coefficients so that equivariant
integrands (which involve s) live in the same ring as the geometry.
"""

from __future__ import annotations

from fractions import Fraction
from importlib import resources
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import yaml

from .errors import DimensionTooLarge, MixedRings, NonNilpotent, NotInvertible, ScenarioSchemaError
from .expr import Evaluator, param_fallback, parse_scalar, scalar_functions, scalar_names
from .scalar import RatFunc

_ZERO = RatFunc()
_ONE = RatFunc.coerce(1)


class CohRing:
    """Commutative graded ring with basis ``basis[0] = 1`` and even degrees."""

    def __init__(
        self,
        name: str,
        basis: Sequence[str],
        degrees: Sequence[int],
        products: Mapping[Tuple[int, int], Mapping[int, RatFunc]],
        integral: Sequence[RatFunc],
        key: Optional[tuple] = None,
    ):
        if not basis or degrees[0] != 0:
            raise ValueError("the first basis element must be the degree-0 unit")
        if any(d % 2 for d in degrees):
            raise ValueError("only even degrees are supported")
        self.name = name
        self.basis = tuple(basis)
        self.degrees = tuple(degrees)
        self.complex_dim = max(degrees) // 2
        self.key = key if key is not None else (name,)
        n = len(basis)
        table: Dict[Tuple[int, int], Dict[int, RatFunc]] = {}
        for i in range(n):
            table[(0, i)] = table[(i, 0)] = {i: _ONE}
        for (i, j), out in products.items():
            clean = {k: RatFunc.coerce(v) for k, v in out.items() if v}
            for k in clean:
                if degrees[k] != degrees[i] + degrees[j]:
                    raise ValueError(f"product {basis[i]}*{basis[j]} is not homogeneous")
            table[(i, j)] = table[(j, i)] = clean
        self._table = table
        top = 2 * self.complex_dim
        self.integral = tuple(RatFunc.coerce(w) for w in integral)
        for w, d in zip(self.integral, degrees):
            if w and d != top:
                raise ValueError("the integral must vanish below the top degree")

    def __eq__(self, other):
        return isinstance(other, CohRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"CohRing({self.label})"

    @property
    def label(self) -> str:
        if len(self.key) == 1:
            return self.name
        args = ", ".join(f"{k}={v}" for k, v in self.key[1])
        return f"{self.name}({args})"

    def index(self, name: str) -> int:
        return self.basis.index(name)

    def product_of(self, i: int, j: int) -> Dict[int, RatFunc]:
        return self._table.get((i, j), {})

    # -- constructors -------------------------------------------------------
    def zero(self) -> "CohClass":
        return CohClass(self, [_ZERO] * len(self.basis))

    def one(self) -> "CohClass":
        return self.scalar(1)

    def scalar(self, c) -> "CohClass":
        coeffs = [_ZERO] * len(self.basis)
        coeffs[0] = RatFunc.coerce(c)
        return CohClass(self, coeffs)

    def gen(self, name: str) -> "CohClass":
        coeffs = [_ZERO] * len(self.basis)
        coeffs[self.index(name)] = _ONE
        return CohClass(self, coeffs)

    def parse(self, text, bindings: Optional[Mapping[str, object]] = None) -> "CohClass":
        """Parse a class expression over the basis names, e.g. ``"3/2*a - D"``."""
        if isinstance(text, CohClass):
            return text
        if isinstance(text, (int, Fraction)):
            return self.scalar(text)
        names = scalar_names(bindings)
        names.update({b: self.gen(b) for b in self.basis})
        funcs = scalar_functions()
        funcs["exp"] = lambda x: exp_class(self._lift(x))
        v = Evaluator(names, funcs, param_fallback)(str(text))
        return self._lift(v)

    def _lift(self, v) -> "CohClass":
        if isinstance(v, CohClass):
            v._check(self)
            return v
        return self.scalar(v)

    def check_axioms(self) -> List[str]:
        """Return a list of violated ring axioms (empty when the table is sound)."""
        problems = []
        gens = [self.gen(b) for b in self.basis]
        for x in gens:
            for y in gens:
                if x * y != y * x:
                    problems.append(f"{x} * {y} not commutative")
                for z in gens:
                    if (x * y) * z != x * (y * z):
                        problems.append(f"({x}*{y})*{z} not associative")
        return problems


class CohClass:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: CohRing, coeffs: Sequence):
        if len(coeffs) != len(ring.basis):
            raise ValueError("coefficient count does not match the ring basis")
        self.ring = ring
        self.coeffs = tuple(RatFunc.coerce(c) for c in coeffs)

    def _check(self, ring: CohRing) -> None:
        if self.ring != ring:
            raise MixedRings(f"{self.ring.label} vs {ring.label}")

    def _other(self, other) -> "CohClass":
        if isinstance(other, CohClass):
            other._check(self.ring)
            return other
        return self.ring.scalar(other)

    def __add__(self, other):
        try:
            other = self._other(other)
        except TypeError:
            return NotImplemented
        return CohClass(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CohClass(self.ring, [-a for a in self.coeffs])

    def __sub__(self, other):
        try:
            other = self._other(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, CohClass):
            try:
                c = RatFunc.coerce(other)
            except TypeError:
                return NotImplemented
            return CohClass(self.ring, [a * c for a in self.coeffs])
        other._check(self.ring)
        out = [_ZERO] * len(self.coeffs)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                ab = None
                for k, c in self.ring.product_of(i, j).items():
                    if ab is None:
                        ab = a * b
                    out[k] = out[k] + ab * c
        return CohClass(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, CohClass):
            return self * invert_unit(other)
        try:
            c = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        inv = c.inverse()
        return CohClass(self.ring, [a * inv for a in self.coeffs])

    def __rtruediv__(self, other):
        return self._other(other) * invert_unit(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("class powers must be integers")
        if n < 0:
            return invert_unit(self) ** (-n)
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, CohClass):
            return self.ring == other.ring and self.coeffs == other.coeffs
        try:
            return self == self.ring.scalar(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def part(self, degree: int) -> "CohClass":
        """Homogeneous component of the given real degree."""
        return CohClass(self.ring, [c if d == degree else _ZERO for c, d in zip(self.coeffs, self.ring.degrees)])

    @property
    def degree0(self) -> RatFunc:
        return self.coeffs[0]

    def map_coeffs(self, fn) -> "CohClass":
        return CohClass(self.ring, [fn(c) for c in self.coeffs])

    def __str__(self):
        parts = []
        for name, c in zip(self.ring.basis, self.coeffs):
            if c:
                parts.append(f"({c})" if name == self.ring.basis[0] else f"({c})*{name}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"CohClass[{self.ring.label}]({self})"


def integrate(x: CohClass) -> RatFunc:
    """Apply the integration functional (only top-degree terms survive)."""
    total = _ZERO
    for c, w in zip(x.coeffs, x.ring.integral):
        if c and w:
            total = total + c * w
    return total


def exp_class(x: CohClass) -> CohClass:
    if x.degree0:
        raise NonNilpotent(str(x))
    out = x.ring.one()
    term = x.ring.one()
    for k in range(1, x.ring.complex_dim + 1):
        term = term * x
        if not term:
            break
        out = out + term * Fraction(1, factorial(k))
    return out


def invert_unit(x: CohClass) -> CohClass:
    c = x.degree0
    if not c:
        raise NotInvertible(str(x))
    cinv = c.inverse()
    u = x * cinv - 1  # nilpotent
    out = x.ring.one()
    term = x.ring.one()
    for _ in range(x.ring.complex_dim):
        term = term * (-u)
        if not term:
            break
        out = out + term
    return out * cinv


def chern_from_ch(ch: CohClass) -> Tuple[CohClass, CohClass]:
    """(c1, c2) from a Chern character, via ch2 = (c1^2 - 2 c2)/2."""
    if ch.ring.complex_dim > 2:
        raise DimensionTooLarge(ch.ring.label)
    c1 = ch.part(2)
    c2 = (c1 * c1 - ch.part(4) * 2) * Fraction(1, 2)
    return c1, c2


def todd_from_tangent_ch(chT: CohClass, rank: Optional[int] = None) -> CohClass:
    if chT.ring.complex_dim > 2:
        raise DimensionTooLarge(chT.ring.label)
    if rank is not None and chT.degree0 != RatFunc.coerce(rank):
        raise ValueError(f"degree-0 part of {chT} is not the rank {rank}")
    c1, c2 = chern_from_ch(chT)
    return chT.ring.one() + c1 * Fraction(1, 2) + (c1 * c1 + c2) * Fraction(1, 12)


# ---------------------------------------------------------------------------
# ring definitions


def ring_from_definition(defn: Mapping, overrides: Optional[Mapping[str, object]] = None) -> CohRing:
    """Build a ring from a declarative record (see ``data/rings.yaml``).

    ``overrides`` fix some of the ring's parameters to numbers, e.g. ``{"g": 0}``
    turns the genus-g curve into the projective line.
    """
    try:
        name = defn["name"]
        basis_spec = defn["basis"]
    except (KeyError, TypeError) as exc:
        raise ScenarioSchemaError(f"ring definition missing {exc}") from None
    overrides = dict(overrides or {})
    params = list(defn.get("params", []))
    unknown = set(overrides) - set(params)
    if unknown:
        raise ScenarioSchemaError(f"ring {name} has no parameters {sorted(unknown)}")
    env: Dict[str, object] = {k: parse_scalar(str(v)) for k, v in overrides.items()}
    for k, v in (defn.get("let") or {}).items():
        env[k] = parse_scalar(str(v), env)
    basis = [b["name"] for b in basis_spec]
    degrees = [int(b["degree"]) for b in basis_spec]
    names = {b: i for i, b in enumerate(basis)}

    # products are written as "x*y": expression over basis names
    protoring = CohRing(name, basis, degrees, {}, [0] * len(basis))

    def lin(text) -> Dict[int, RatFunc]:
        cls = protoring.parse(str(text), env)
        return {i: c for i, c in enumerate(cls.coeffs) if c}

    products: Dict[Tuple[int, int], Dict[int, RatFunc]] = {}
    for lhs, rhs in (defn.get("products") or {}).items():
        x, y = (p.strip() for p in str(lhs).split("*"))
        products[(names[x], names[y])] = lin(rhs)
    integral = [RatFunc()] * len(basis)
    for b, w in (defn.get("integral") or {}).items():
        integral[names[b]] = parse_scalar(str(w), env)
    key = (name, tuple(sorted((k, str(v)) for k, v in overrides.items())))
    if not overrides:
        key = (name,)
    return CohRing(name, basis, degrees, products, integral, key)


def _builtin_definitions() -> Dict[str, Mapping]:
    text = resources.files("vwref").joinpath("data/rings.yaml").read_text()
    return {d["name"]: d for d in yaml.safe_load(text)}


_DEFS = _builtin_definitions()
_CACHE: Dict[tuple, CohRing] = {}


def register_ring(defn: Mapping) -> None:
    """Add or replace a ring definition by name."""
    ring_from_definition(defn)  # validate
    _DEFS[defn["name"]] = dict(defn)
    for k in [k for k in _CACHE if k[0] == defn["name"]]:
        del _CACHE[k]


def ring_names() -> Tuple[str, ...]:
    return tuple(_DEFS)


def ring_params(name: str) -> Tuple[str, ...]:
    if name not in _DEFS:
        raise ScenarioSchemaError(f"unknown ring {name!r}")
    return tuple(_DEFS[name].get("params", []))


def get_ring(name: str, **overrides) -> CohRing:
    """Built-in (or registered) ring, optionally with some parameters fixed."""
    if name not in _DEFS:
        raise ScenarioSchemaError(f"unknown ring {name!r}")
    key = (name, tuple(sorted((k, str(v)) for k, v in overrides.items())))
    if key not in _CACHE:
        _CACHE[key] = ring_from_definition(_DEFS[name], overrides)
    return _CACHE[key]


POINT = get_ring("POINT")
CURVE = get_ring("CURVE")
CXC = get_ring("CXC")
SURFACE = get_ring("SURFACE")
P1 = get_ring("CURVE", g=0)
