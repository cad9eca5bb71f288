"""Exact scalars: parameter polynomials and rational functions in s = t^(1/2).

Every refined invariant lives in Q(t^(1/2)) with coefficients that may depend
polynomially on a few symbolic surface invariants (the genus ``g`` of the
canonical curve, ``c2``).  We write ``s`` for ``t^(1/2)`` so that all Laurent
arithmetic has integer exponents; a T-weight ``w`` becomes the s-exponent
``2*w``.

Denominators never contain parameters.  That keeps gcd reduction a
one-variable problem over Q and gives every :class:`RatFunc` a unique
canonical form.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import ParameterInDenominator, PoleAtOne, UndeclaredParameter

Number = Union[int, Fraction]
Monomial = Tuple[Tuple[int, int], ...]  # ((parameter index, exponent), ...)

_REGISTRY: List[str] = ["g", "c2"]


def declare_parameter(name: str) -> None:
    """Add a symbolic parameter to the registry (idempotent)."""
    if not name.isidentifier():
        raise ValueError(f"invalid parameter name {name!r}")
    if name in ("s", "t", "q"):
        raise ValueError(f"{name!r} is reserved")
    if name not in _REGISTRY:
        _REGISTRY.append(name)


def declared_parameters() -> Tuple[str, ...]:
    return tuple(_REGISTRY)


def _num(c) -> Number:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for i, e in b:
        d[i] = d.get(i, 0) + e
    return tuple(sorted(d.items()))


def _mono_key(m: Monomial):
    # ascending total degree, then larger powers of earlier parameters first
    n = len(_REGISTRY)
    vec = [0] * n
    for i, e in m:
        vec[i] = e
    return (sum(vec), [-e for e in vec])


def _mono_str(m: Monomial) -> str:
    parts = []
    for i, e in m:
        name = _REGISTRY[i]
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


class ParamPoly:
    """Polynomial in the declared parameters with exact rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Number]] = None):
        clean: Dict[Monomial, Number] = {}
        if terms:
            for m, c in terms.items():
                c = _num(c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, terms: Dict[Monomial, Number]) -> "ParamPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Number) -> "ParamPoly":
        c = _num(c)
        return cls._wrap({(): c} if c else {})

    @classmethod
    def symbol(cls, name: str) -> "ParamPoly":
        try:
            i = _REGISTRY.index(name)
        except ValueError:
            raise UndeclaredParameter(name) from None
        return cls._wrap({((i, 1),): 1})

    @classmethod
    def coerce(cls, x) -> "ParamPoly":
        if isinstance(x, ParamPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to ParamPoly")

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Number]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant(self) -> Number:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), 0)

    def symbols(self) -> Tuple[str, ...]:
        idx = sorted({i for m in self._terms for i, _ in m})
        return tuple(_REGISTRY[i] for i in idx)

    def value_at_one(self) -> Number:
        """Sum of coefficients (every parameter set to 1)."""
        return _num(sum(self._terms.values(), Fraction(0)))

    def evaluate(self, values: Mapping[str, Number]) -> Number:
        total = Fraction(0)
        for m, c in self._terms.items():
            term = Fraction(c)
            for i, e in m:
                term *= Fraction(values[_REGISTRY[i]]) ** e
            total += term
        return _num(total)

    def subs(self, values: Mapping[str, "ParamPoly | Number"]) -> "ParamPoly":
        out = ParamPoly()
        for m, c in self._terms.items():
            term = ParamPoly.const(c)
            for i, e in m:
                name = _REGISTRY[i]
                base = ParamPoly.coerce(values[name]) if name in values else ParamPoly._wrap({((i, 1),): 1})
                term = term * base ** e
            out = out + term
        return out

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ParamPoly):
            if isinstance(other, (int, Fraction)):
                other = ParamPoly.const(other)
            else:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = _num(v) if isinstance(v, Fraction) else v
            else:
                out.pop(m, None)
        return ParamPoly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (ParamPoly, int, Fraction)):
            return NotImplemented
        return self + (-ParamPoly.coerce(other))

    def __rsub__(self, other):
        return ParamPoly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _num(other)
            if not other:
                return ParamPoly()
            if other == 1:
                return self
            return ParamPoly._wrap({m: _num(c * other) for m, c in self._terms.items()})
        if not isinstance(other, ParamPoly):
            return NotImplemented
        a, b = self._terms, other._terms
        if not a or not b:
            return ParamPoly()
        if len(b) == 1 and () in b:
            return self * b[()]
        if len(a) == 1 and () in a:
            return other * a[()]
        out: Dict[Monomial, Number] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return ParamPoly({m: c for m, c in out.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError
            return self * (1 / Fraction(other))
        if isinstance(other, ParamPoly) and other.is_constant():
            return self / other.constant()
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("ParamPoly powers must be non-negative integers")
        out = ParamPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- printing -----------------------------------------------------------
    def sorted_terms(self) -> List[Tuple[Monomial, Number]]:
        return sorted(self._terms.items(), key=lambda mc: _mono_key(mc[0]))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            mag = -c if neg else c
            ms = _mono_str(m)
            if not ms:
                body = str(mag)
            elif mag == 1:
                body = ms
            else:
                body = f"{mag}*{ms}"
            if k == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self) -> str:
        return f"ParamPoly({str(self)!r})"


_ZERO_PP = ParamPoly()
_ONE_PP = ParamPoly.const(1)


# ---------------------------------------------------------------------------
# dense one-variable polynomials over Q, lowest degree first


def _trim(p: List) -> List:
    while p and not p[-1]:
        p.pop()
    return p


def _pmul(a: Sequence[Number], b: Sequence[Number]) -> List[Number]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _pdivmod(a: Sequence[Number], b: Sequence[Number]) -> Tuple[List[Fraction], List[Fraction]]:
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    _trim(a)
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    return _trim(q), _trim(a[: len(b) - 1])


def _pgcd(a: Sequence[Number], b: Sequence[Number]) -> List[Fraction]:
    a = _trim([Fraction(x) for x in a])
    b = _trim([Fraction(x) for x in b])
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [x / lead for x in a]


def _pexact_div(a: Sequence[Number], b: Sequence[Number]) -> List[Fraction]:
    q, r = _pdivmod(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def _primitive(p: Sequence[Number]) -> Tuple[Tuple[int, ...], Fraction]:
    """Return (integer primitive polynomial with positive lead, factor) with p = factor * prim."""
    fr = [Fraction(x) for x in p]
    lcm = 1
    for x in fr:
        lcm = lcm * x.denominator // gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in fr]
    cont = reduce(gcd, (abs(x) for x in ints), 0)
    if ints[-1] < 0:
        cont = -cont
    prim = tuple(x // cont for x in ints)
    return prim, Fraction(cont, lcm)


# ---------------------------------------------------------------------------


class HalfLaurent:
    """Laurent polynomial in s = t^(1/2) with :class:`ParamPoly` coefficients."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Optional[Mapping[int, object]] = None):
        clean: Dict[int, ParamPoly] = {}
        if coeffs:
            for e, c in coeffs.items():
                c = ParamPoly.coerce(c)
                if c:
                    clean[int(e)] = c
        self._c = clean
        self._hash = None

    @classmethod
    def _wrap(cls, c: Dict[int, ParamPoly]) -> "HalfLaurent":
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, e: int, c=1) -> "HalfLaurent":
        return cls({e: c})

    @classmethod
    def from_dense(cls, dense: Sequence[Number], shift: int = 0) -> "HalfLaurent":
        return cls._wrap({i + shift: ParamPoly.const(x) for i, x in enumerate(dense) if x})

    def items(self):
        return sorted(self._c.items())

    def __bool__(self):
        return bool(self._c)

    def __getitem__(self, e: int) -> ParamPoly:
        return self._c.get(e, _ZERO_PP)

    @property
    def min_exp(self) -> int:
        return min(self._c)

    @property
    def max_exp(self) -> int:
        return max(self._c)

    def is_param_free(self) -> bool:
        return all(c.is_constant() for c in self._c.values())

    def dense(self) -> Tuple[int, List[Number]]:
        """(lowest exponent, coefficient list) for a parameter-free Laurent polynomial."""
        if not self._c:
            return 0, []
        lo, hi = self.min_exp, self.max_exp
        out: List[Number] = [0] * (hi - lo + 1)
        for e, c in self._c.items():
            out[e - lo] = c.constant()
        return lo, out

    def components(self) -> Dict[Monomial, Dict[int, Number]]:
        """Split by parameter monomial: {monomial: {exponent: rational}}."""
        comps: Dict[Monomial, Dict[int, Number]] = {}
        for e, c in self._c.items():
            for m, v in c.items():
                comps.setdefault(m, {})[e] = v
        return comps

    def at_one(self) -> ParamPoly:
        out = ParamPoly()
        for c in self._c.values():
            out = out + c
        return out

    def shift(self, k: int) -> "HalfLaurent":
        if not k:
            return self
        return HalfLaurent._wrap({e + k: c for e, c in self._c.items()})

    def subst_power(self, r: int) -> "HalfLaurent":
        return HalfLaurent._wrap({e * r: c for e, c in self._c.items()})

    def scale(self, x) -> "HalfLaurent":
        if isinstance(x, (int, Fraction)):
            if not x:
                return HalfLaurent()
            if x == 1:
                return self
        return HalfLaurent({e: c * x for e, c in self._c.items()})

    def __add__(self, other: "HalfLaurent") -> "HalfLaurent":
        out = dict(self._c)
        for e, c in other._c.items():
            v = out[e] + c if e in out else c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return HalfLaurent._wrap(out)

    def __neg__(self):
        return HalfLaurent._wrap({e: -c for e, c in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "HalfLaurent") -> "HalfLaurent":
        if not isinstance(other, HalfLaurent):
            return self.scale(other)
        out: Dict[int, ParamPoly] = {}
        for e1, c1 in self._c.items():
            for e2, c2 in other._c.items():
                e = e1 + e2
                p = c1 * c2
                out[e] = out[e] + p if e in out else p
        return HalfLaurent._wrap({e: c for e, c in out.items() if c})

    def mul_dense(self, dense: Sequence[int]) -> "HalfLaurent":
        out: Dict[int, ParamPoly] = {}
        for e1, c1 in self._c.items():
            for j, x in enumerate(dense):
                if x:
                    e = e1 + j
                    p = c1 * x
                    out[e] = out[e] + p if e in out else p
        return HalfLaurent._wrap({e: c for e, c in out.items() if c})

    def __eq__(self, other):
        if not isinstance(other, HalfLaurent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __str__(self) -> str:
        return _laurent_str(self, 0)

    def __repr__(self):
        return f"HalfLaurent({str(self)!r})"


def _laurent_str(p: HalfLaurent, shift: int) -> str:
    if not p:
        return "0"
    out = []
    for k, (e, c) in enumerate(p.items()):
        e -= shift
        sp = "" if e == 0 else ("s" if e == 1 else f"s^{e}")
        terms = c.sorted_terms()
        if len(terms) == 1:
            m, v = terms[0]
            neg = v < 0
            mag = -v if neg else v
            parts = []
            if mag != 1 or (not m and not sp):
                parts.append(str(mag))
            if m:
                parts.append(_mono_str(m))
            if sp:
                parts.append(sp)
            body = "*".join(parts)
        elif not sp and len(p._c) == 1:
            neg = False
            body = str(c)
        else:
            neg = False
            body = f"({c})" + (f"*{sp}" if sp else "")
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


class RatFunc:
    """Element of Q[params](s) with a parameter-free denominator, in canonical form.

    The stored denominator is an integer polynomial with nonzero constant term,
    content 1 and positive leading coefficient; any power of ``s`` lives in the
    numerator.  Numerator and denominator are coprime over Q[s].
    """

    __slots__ = ("num", "_den", "_hash")

    def __init__(self, num=0, den=None):
        n = _as_laurent(num)
        if den is None:
            d_shift, d = 0, [1]
        else:
            dl = _as_laurent(den)
            if not dl:
                raise ZeroDivisionError("RatFunc with zero denominator")
            if not dl.is_param_free():
                raise ParameterInDenominator(str(dl))
            d_shift, d = dl.dense()
        num_c, den_c = _normalize(n, d, d_shift)
        self.num = num_c
        self._den = den_c
        self._hash = None

    @classmethod
    def _raw(cls, num: HalfLaurent, den: Tuple[int, ...]) -> "RatFunc":
        obj = cls.__new__(cls)
        obj.num = num
        obj._den = den
        obj._hash = None
        return obj

    @classmethod
    def _make(cls, num: HalfLaurent, den: Sequence[Number], shift: int = 0) -> "RatFunc":
        n, d = _normalize(num, list(den), shift)
        return cls._raw(n, d)

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, (int, Fraction, ParamPoly)):
            return cls._raw(_as_laurent(x), (1,))
        if isinstance(x, HalfLaurent):
            return cls._raw(x, (1,))
        raise TypeError(f"cannot coerce {type(x).__name__} to RatFunc")

    @classmethod
    def s_power(cls, e: int, c=1) -> "RatFunc":
        return cls._raw(HalfLaurent.monomial(e, c), (1,))

    @classmethod
    def parse(cls, text: str, bindings: Optional[Mapping[str, Number]] = None) -> "RatFunc":
        from .expr import parse_scalar

        return parse_scalar(text, bindings)

    # -- inspection ---------------------------------------------------------
    @property
    def den(self) -> HalfLaurent:
        return HalfLaurent.from_dense(self._den)

    @property
    def den_coeffs(self) -> Tuple[int, ...]:
        return self._den

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self) -> bool:
        return self._den == (1,)

    def is_param_free(self) -> bool:
        return self.num.is_param_free()

    def is_constant(self) -> bool:
        return self._den == (1,) and (not self.num or set(self.num._c) == {0})

    def constant(self) -> ParamPoly:
        if not self.is_constant():
            raise ValueError(f"{self} depends on s")
        return self.num[0]

    def has_origin_pole(self) -> bool:
        return bool(self.num) and self.num.min_exp < 0

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        d1, d2 = self._den, other._den
        if d1 == d2:
            if d1 == (1,):
                return RatFunc._raw(self.num + other.num, (1,))
            return RatFunc._make(self.num + other.num, d1)
        g = _pgcd(d1, d2)
        if len(g) > 1:
            a = _pexact_div(d1, g)
            b = _pexact_div(d2, g)
        else:
            a, b = d1, d2
        num = self.num.mul_dense(b) + other.num.mul_dense(a)
        return RatFunc._make(num, _pmul(a, d2))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self._den)

    def __sub__(self, other):
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return RatFunc.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RatFunc()
            return RatFunc._raw(self.num.scale(other), self._den)
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num or not other.num:
            return RatFunc()
        num = self.num * other.num
        if self._den == (1,) and other._den == (1,):
            return RatFunc._raw(num, (1,))
        return RatFunc._make(num, _pmul(self._den, other._den))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero RatFunc")
        if not self.num.is_param_free():
            raise ParameterInDenominator(f"cannot invert {self}")
        lo, dense = self.num.dense()
        return RatFunc._make(HalfLaurent.from_dense(self._den), dense, lo)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError
            return RatFunc._raw(self.num.scale(1 / Fraction(other)), self._den)
        try:
            other = RatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc.coerce(other) * self.inverse()

    def __pow__(self, n):
        if isinstance(n, Fraction) and n.denominator == 1:
            n = n.numerator
        if isinstance(n, Fraction):
            # only pure s-powers admit fractional exponents (t^(1/2) = s)
            if self._den == (1,) and len(self.num._c) == 1:
                (e, c), = self.num._c.items()
                if c == _ONE_PP and (e * n).denominator == 1:
                    return RatFunc.s_power(int(e * n))
            raise ValueError(f"fractional power of {self}")
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        out = RatFunc.coerce(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly, HalfLaurent)):
            other = RatFunc.coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self._den == other._den and self.num == other.num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self._den))
        return self._hash

    # -- printing -----------------------------------------------------------
    def canonical(self) -> str:
        """Canonical string ``s^k * (N) / (D)``; N and D have lowest s-exponent 0."""
        if not self.num:
            return "0"
        k = self.num.min_exp
        n = _laurent_str(self.num, k)
        d = _laurent_str(HalfLaurent.from_dense(self._den), 0)
        return f"s^{k} * ({n}) / ({d})"

    __str__ = canonical

    def __repr__(self):
        return f"RatFunc({self.canonical()!r})"


def _as_laurent(x) -> HalfLaurent:
    if isinstance(x, HalfLaurent):
        return x
    if isinstance(x, (int, Fraction, ParamPoly)):
        p = ParamPoly.coerce(x)
        return HalfLaurent._wrap({0: p} if p else {})
    raise TypeError(f"cannot coerce {type(x).__name__} to HalfLaurent")


def _normalize(num: HalfLaurent, den: List[Number], shift: int) -> Tuple[HalfLaurent, Tuple[int, ...]]:
    """Reduce num / (s^shift * den) to canonical (num, integer den)."""
    den = _trim(list(den))
    if not den:
        raise ZeroDivisionError("zero denominator")
    z = 0
    while not den[z]:
        z += 1
    if z:
        den = den[z:]
    shift += z
    if not num:
        return HalfLaurent(), (1,)
    if shift:
        num = num.shift(-shift)
    if len(den) > 1:
        g = [Fraction(x) for x in den]
        comps = num.components()
        lo = num.min_exp
        dense_comps = {}
        for m, d in comps.items():
            hi = max(d)
            arr = [Fraction(0)] * (hi - lo + 1)
            for e, v in d.items():
                arr[e - lo] = Fraction(v)
            dense_comps[m] = arr
            if len(g) > 1:
                g = _pgcd(g, arr)
        if len(g) > 1:
            den = _pexact_div(den, g)
            rebuilt: Dict[int, Dict[Monomial, Number]] = {}
            for m, arr in dense_comps.items():
                for i, v in enumerate(_pexact_div(arr, g)):
                    if v:
                        rebuilt.setdefault(i + lo, {})[m] = v
            num = HalfLaurent._wrap({e: ParamPoly(t) for e, t in rebuilt.items()})
    prim, factor = _primitive(den)
    if factor != 1:
        num = num.scale(1 / factor)
    return num, prim


# ---------------------------------------------------------------------------
# named operations


def quantum_integer(n: int) -> RatFunc:
    """Symmetric quantum integer [n]_t = s^(1-n) + s^(3-n) + ... + s^(n-1)."""
    if n == 0:
        return RatFunc()
    if n < 0:
        return -quantum_integer(-n)
    return RatFunc._raw(HalfLaurent._wrap({-(n - 1) + 2 * j: _ONE_PP for j in range(n)}), (1,))


def bar(f: RatFunc) -> RatFunc:
    """The involution s -> 1/s."""
    f = RatFunc.coerce(f)
    if not f.num:
        return f
    deg = len(f.den_coeffs) - 1
    num = HalfLaurent._wrap({deg - e: c for e, c in f.num._c.items()})
    return RatFunc._make(num, list(reversed(f.den_coeffs)))


def substitute_tr(f: RatFunc, r: int) -> RatFunc:
    """t -> t^r, i.e. s -> s^r."""
    if r < 1:
        raise ValueError("substitute_tr needs r >= 1")
    f = RatFunc.coerce(f)
    if r == 1:
        return f
    den = [0] * ((len(f.den_coeffs) - 1) * r + 1)
    for i, c in enumerate(f.den_coeffs):
        den[i * r] = c
    return RatFunc._make(f.num.subst_power(r), den)


def eval_at_t1(f: RatFunc) -> ParamPoly:
    """Value at t = 1 after cancelling removable factors of (s - 1)."""
    f = RatFunc.coerce(f)
    num = f.num
    den = [Fraction(x) for x in f.den_coeffs]
    while sum(den) == 0:
        if num.at_one():
            raise PoleAtOne(f.canonical())
        num = _divide_by_s_minus_one(num)
        den = _pexact_div(den, [-1, 1])
    return num.at_one() / sum(den)


def _divide_by_s_minus_one(p: HalfLaurent) -> HalfLaurent:
    lo = p.min_exp
    comps = p.components()
    out: Dict[int, Dict[Monomial, Number]] = {}
    for m, d in comps.items():
        arr = [0] * (max(d) - lo + 1)
        for e, v in d.items():
            arr[e - lo] = v
        for i, v in enumerate(_pexact_div(arr, [-1, 1])):
            if v:
                out.setdefault(i + lo, {})[m] = v
    return HalfLaurent._wrap({e: ParamPoly(t) for e, t in out.items()})


S = RatFunc.s_power(1)
T = RatFunc.s_power(2)


def param(name: str) -> RatFunc:
    return RatFunc.coerce(ParamPoly.symbol(name))


def cyclotomic_factorization(f: RatFunc) -> Optional[Dict[int, int]]:
    """Factor the denominator into cyclotomic polynomials Phi_n(s).

    Returns {n: multiplicity}, or None when some factor is not cyclotomic
    (i.e. a pole away from the roots of unity and the origin).
    """
    rem = [Fraction(x) for x in RatFunc.coerce(f).den_coeffs]
    deg = len(rem) - 1
    found: Dict[int, int] = {}
    n = 1
    bound = 2 * deg * deg + 2
    while len(rem) > 1 and n <= bound:
        phi = cyclotomic_poly(n)
        if len(phi) - 1 <= len(rem) - 1:
            while True:
                q, r = _pdivmod(rem, phi)
                if r:
                    break
                rem = q
                found[n] = found.get(n, 0) + 1
        n += 1
    return found if len(rem) == 1 else None


_CYCLO: Dict[int, List[int]] = {}


def cyclotomic_poly(n: int) -> List[int]:
    if n not in _CYCLO:
        p: List[Number] = [-1] + [0] * (n - 1) + [1]
        for d in range(1, n):
            if n % d == 0:
                p = _pexact_div(p, cyclotomic_poly(d))
        _CYCLO[n] = [int(x) for x in p]
    return _CYCLO[n]
