"""Equivariant K-theory classes on a fixed locus.

A class is a signed list of atoms: a line bundle, a rank-2 bundle (known by its
Chern character and determinant), or a trivial line, each twisted by a torus
character recorded as an s-exponent (twice the t-weight).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Tuple

from .cohring import CohClass, CohRing, exp_class, invert_unit
from .errors import MixedRings, ZeroWeightDenominator
from .scalar import RatFunc

LINE = "LINE"
RANK2 = "RANK2"
TRIVIAL = "TRIVIAL"
KINDS = (LINE, RANK2, TRIVIAL)


@dataclass(frozen=True)
class Atom:
    kind: str
    weight: int
    sign: int = 1
    c1: Optional[CohClass] = None  # LINE: first Chern class; RANK2: c1 of the determinant
    ch: Optional[CohClass] = None  # RANK2 only

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if self.sign not in (1, -1):
            raise ValueError("atom sign must be +1 or -1")
        if self.kind == LINE and self.c1 is None:
            raise ValueError("LINE atom needs c1")
        if self.kind == RANK2:
            if self.ch is None or self.c1 is None:
                raise ValueError("RANK2 atom needs ch and det c1")
            if self.ch.degree0 != RatFunc.coerce(2):
                raise ValueError("RANK2 Chern character must have rank 2")
            if self.ch.part(2) != self.c1:
                raise ValueError("RANK2 det c1 must equal the degree-2 part of ch")

    @property
    def rank(self) -> int:
        return 2 if self.kind == RANK2 else 1

    def det_c1(self, ring: CohRing) -> CohClass:
        return ring.zero() if self.kind == TRIVIAL else self.c1

    def chern(self, ring: CohRing) -> CohClass:
        """Unsigned, untwisted Chern character."""
        if self.kind == LINE:
            return exp_class(self.c1)
        if self.kind == RANK2:
            return self.ch
        return ring.one()

    def negated(self) -> "Atom":
        return Atom(self.kind, self.weight, -self.sign, self.c1, self.ch)

    def twisted(self, k: int) -> "Atom":
        return Atom(self.kind, self.weight + k, self.sign, self.c1, self.ch)

    def dual(self) -> "Atom":
        if self.kind == TRIVIAL:
            return Atom(TRIVIAL, -self.weight, self.sign)
        if self.kind == LINE:
            return Atom(LINE, -self.weight, self.sign, -self.c1)
        # ch(E^*) = rank - ch1 + ch2 in complex dimension <= 2
        ch = self.ch - self.ch.part(2) * 2
        return Atom(RANK2, -self.weight, self.sign, -self.c1, ch)


def line(c1: CohClass, weight: int, sign: int = 1) -> Atom:
    return Atom(LINE, weight, sign, c1)


def trivial(weight: int, sign: int = 1) -> Atom:
    return Atom(TRIVIAL, weight, sign)


def rank2(ch: CohClass, weight: int, sign: int = 1) -> Atom:
    return Atom(RANK2, weight, sign, ch.part(2), ch)


class EqKClass:
    __slots__ = ("ring", "atoms")

    def __init__(self, ring: CohRing, atoms: Iterable[Atom] = ()):
        atoms = tuple(atoms)
        for a in atoms:
            for cls in (a.c1, a.ch):
                if cls is not None and cls.ring != ring:
                    raise MixedRings(f"atom over {cls.ring.label} in a class over {ring.label}")
        self.ring = ring
        self.atoms = atoms

    def __add__(self, other: "EqKClass") -> "EqKClass":
        if other.ring != self.ring:
            raise MixedRings(f"{self.ring.label} vs {other.ring.label}")
        return EqKClass(self.ring, self.atoms + other.atoms)

    def __neg__(self) -> "EqKClass":
        return EqKClass(self.ring, [a.negated() for a in self.atoms])

    def __sub__(self, other: "EqKClass") -> "EqKClass":
        return self + (-other)

    def __mul__(self, n: int) -> "EqKClass":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (-self) * (-n)
        return EqKClass(self.ring, self.atoms * n)

    __rmul__ = __mul__

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __repr__(self):
        return f"EqKClass[{self.ring.label}]({len(self.atoms)} atoms, rank {self.rank})"

    @property
    def rank(self) -> int:
        return sum(a.sign * a.rank for a in self.atoms)

    def twisted(self, k: int) -> "EqKClass":
        """Tensor every atom by the character s^k."""
        return EqKClass(self.ring, [a.twisted(k) for a in self.atoms])

    def weights(self) -> Tuple[int, ...]:
        return tuple(a.weight for a in self.atoms)


def ch(x: EqKClass) -> CohClass:
    out = x.ring.zero()
    for a, n in Counter(x.atoms).items():
        out = out + a.chern(x.ring) * RatFunc.s_power(a.weight, a.sign * n)
    return out


def _lambda_factor(a: Atom, ring: CohRing) -> CohClass:
    s_e = RatFunc.s_power(a.weight)
    if a.kind == RANK2:
        return ring.one() - a.ch * s_e + exp_class(a.c1) * RatFunc.s_power(2 * a.weight)
    return ring.one() - a.chern(ring) * s_e


def lambda_minus_one(x: EqKClass) -> CohClass:
    """ch of the alternating exterior algebra, multiplicative over atoms."""
    out = x.ring.one()
    for a, n in Counter(x.atoms).items():
        f = _lambda_factor(a, x.ring)
        if a.sign < 0:
            if a.weight == 0:
                raise ZeroWeightDenominator(f"{a.kind} atom of weight 0 must be inverted")
            f = invert_unit(f)
        for _ in range(n):
            out = out * f
    return out


def dual(x: EqKClass) -> EqKClass:
    return EqKClass(x.ring, [a.dual() for a in x.atoms])


def det(x: EqKClass) -> Tuple[CohClass, int]:
    """Determinant line of the whole class as (c1, s-exponent)."""
    c1 = x.ring.zero()
    e = 0
    for a in x.atoms:
        c1 = c1 + a.det_c1(x.ring) * a.sign
        e += a.sign * a.rank * a.weight
    return c1, e


def sqrt_Kvir(e_dot: EqKClass) -> Tuple[CohClass, int]:
    """Canonical square root of the virtual canonical bundle on the fixed locus.

    Takes the weight-graded restriction of the virtual cotangent complex and
    returns det of its non-negative weight part, twisted by t^(r/2) where r is
    that part's signed rank.
    """
    nonneg = EqKClass(e_dot.ring, [a for a in e_dot.atoms if a.weight >= 0])
    c1, e = det(nonneg)
    return c1, e + nonneg.rank
