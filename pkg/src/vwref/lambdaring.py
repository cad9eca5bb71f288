"""Split K-theory with lambda and symmetric powers, via Chern roots.

Bundles are modelled by their Chern roots: a rank-r bundle is a sum of r line
classes, each a Laurent monomial in invertible root variables.  Virtual
classes allow negative multiplicities, and Lambda_u / Sym_u extend to them as
power series in u.
"""

from __future__ import annotations

from collections import Counter
from itertools import permutations
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .errors import RankOrder

Mono = Tuple[int, ...]


class RootPoly:
    """Integer Laurent polynomial in a fixed number of root variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Mono, int] = None):
        self.nvars = nvars
        self.terms: Dict[Mono, int] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, nvars: int, c: int = 1) -> "RootPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def mono(cls, m: Mono, c: int = 1) -> "RootPoly":
        return cls(len(m), {tuple(m): c})

    def __add__(self, other: "RootPoly") -> "RootPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return RootPoly(self.nvars, out)

    def __neg__(self):
        return RootPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return RootPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        out: Dict[Mono, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return RootPoly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = RootPoly.const(self.nvars, other)
        return isinstance(other, RootPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def permuted(self, perm: Sequence[int]) -> "RootPoly":
        """Relabel variables: variable i becomes variable perm[i]."""
        out = {}
        for m, c in self.terms.items():
            new = [0] * self.nvars
            for i, e in enumerate(m):
                new[perm[i]] = e
            out[tuple(new)] = c
        return RootPoly(self.nvars, out)

    def __repr__(self):
        return f"RootPoly({len(self.terms)} terms)"


class RootRing:
    """Root variables x_1..x_r0 (for E0) followed by y_1..y_r1 (for E1)."""

    def __init__(self, r0: int, r1: int):
        self.r0 = r0
        self.r1 = r1
        self.nvars = r0 + r1

    def _root(self, i: int) -> Mono:
        m = [0] * self.nvars
        m[i] = 1
        return tuple(m)

    def x(self, i: int) -> Mono:
        return self._root(i)

    def y(self, j: int) -> Mono:
        return self._root(self.r0 + j)

    def E0(self) -> "VirtualClass":
        return VirtualClass(self.nvars, {self.x(i): 1 for i in range(self.r0)})

    def E1(self) -> "VirtualClass":
        return VirtualClass(self.nvars, {self.y(j): 1 for j in range(self.r1)})

    def one(self) -> RootPoly:
        return RootPoly.const(self.nvars)

    def blocks(self) -> Tuple[range, range]:
        return range(self.r0), range(self.r0, self.nvars)


class VirtualClass:
    """Formal Z-linear combination of line classes (Laurent monomials)."""

    __slots__ = ("nvars", "lines")

    def __init__(self, nvars: int, lines: Mapping[Mono, int] = None):
        self.nvars = nvars
        self.lines: Dict[Mono, int] = {m: n for m, n in (lines or {}).items() if n}

    def __add__(self, other):
        c = Counter(self.lines)
        c.update(other.lines)
        return VirtualClass(self.nvars, c)

    def __neg__(self):
        return VirtualClass(self.nvars, {m: -n for m, n in self.lines.items()})

    def __sub__(self, other):
        return self + (-other)

    @property
    def rank(self) -> int:
        return sum(self.lines.values())

    def dual(self) -> "VirtualClass":
        return VirtualClass(self.nvars, {tuple(-e for e in m): n for m, n in self.lines.items()})

    def det(self) -> RootPoly:
        m = [0] * self.nvars
        for line, n in self.lines.items():
            for i, e in enumerate(line):
                m[i] += n * e
        return RootPoly.mono(tuple(m))

    def as_poly(self) -> RootPoly:
        return RootPoly(self.nvars, dict(self.lines))

    @classmethod
    def trivial(cls, nvars: int, n: int = 1) -> "VirtualClass":
        return cls(nvars, {(0,) * nvars: n})


def _series_mul(a: List[RootPoly], b: List[RootPoly], order: int) -> List[RootPoly]:
    out = [RootPoly(a[0].nvars) for _ in range(order + 1)]
    for i, x in enumerate(a):
        if not x.terms:
            continue
        for j in range(0, order + 1 - i):
            if b[j].terms:
                out[i + j] = out[i + j] + x * b[j]
    return out


def lambda_series(v: VirtualClass, order: int, sign: int = 1) -> List[RootPoly]:
    """Coefficients of Lambda_{sign*u}(v) up to u^order.

    Lambda_u(L) = 1 + uL and Lambda_u(-L) = sum_j (-u)^j L^j.
    """
    n = v.nvars
    out = [RootPoly.const(n)] + [RootPoly(n) for _ in range(order)]
    for line, mult in v.lines.items():
        L = RootPoly.mono(line)
        if mult > 0:
            factor = [RootPoly.const(n), L * sign] + [RootPoly(n)] * (order - 1)
        else:
            factor = [RootPoly.const(n)]
            p = RootPoly.const(n)
            for j in range(1, order + 1):
                p = p * L
                factor.append(p * ((-sign) ** j))
        for _ in range(abs(mult)):
            out = _series_mul(out, factor[: order + 1], order)
    return out


def exterior(k: int, v: VirtualClass) -> RootPoly:
    if k < 0:
        raise ValueError("k must be non-negative")
    return lambda_series(v, k)[k]


def symmetric(k: int, v: VirtualClass) -> RootPoly:
    """h_k extended to virtual classes through Sym_u = 1 / Lambda_{-u}."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return lambda_series(-v, k, sign=-1)[k]


def lambda_total(v: VirtualClass) -> RootPoly:
    """Lambda_{-1}(v) = sum_i (-1)^i Lambda^i v for an honest (non-negative) class."""
    if any(n < 0 for n in v.lines.values()):
        raise ValueError("lambda_total needs a non-negative class")
    coeffs = lambda_series(v, v.rank)
    out = RootPoly(v.nvars)
    for i, c in enumerate(coeffs):
        out = out + c * ((-1) ** i)
    return out


def is_block_symmetric(p: RootPoly, block: Sequence[int]) -> bool:
    """Invariance under every permutation of the variables in ``block``."""
    block = list(block)
    base = list(range(p.nvars))
    for perm in permutations(block):
        full = list(base)
        for src, dst in zip(block, perm):
            full[src] = dst
        if p.permuted(full) != p:
            return False
    return True


# ---------------------------------------------------------------------------
# Eagon-Northcott pushforward identity


def en_pushforward(ring: RootRing) -> RootPoly:
    """Koszul pushforward side: 1 + sum_{i=r0}^{r1} (-1)^(i+1-r0) Lambda^i(E1^*) Sym^(i-r0)(E0) det(E0)."""
    E0, E1 = ring.E0(), ring.E1()
    lam = lambda_series(E1.dual(), ring.r1)
    detE0 = E0.det()
    out = ring.one()
    for i in range(ring.r0, ring.r1 + 1):
        term = lam[i] * symmetric(i - ring.r0, E0) * detE0
        out = out + term * ((-1) ** (i + 1 - ring.r0))
    return out


def en_closed_form(ring: RootRing) -> RootPoly:
    """1 - det(E0) det(E1)^(-1) Lambda^(r1-r0)(E1 - E0)."""
    E0, E1 = ring.E0(), ring.E1()
    r = ring.r1 - ring.r0
    return ring.one() - E0.det() * E1.dual().det() * exterior(r, E1 - E0)


def _virtual_exterior_expansion(ring: RootRing, r: int) -> RootPoly:
    E0, E1 = ring.E0(), ring.E1()
    out = RootPoly(ring.nvars)
    for j in range(r + 1):
        out = out + exterior(r - j, E1) * symmetric(j, E0) * ((-1) ** j)
    return out


def eagon_northcott_report(r0: int, r1: int) -> Dict[str, bool]:
    if r0 > r1:
        raise RankOrder(f"r0={r0} > r1={r1}")
    if r0 < 1:
        raise ValueError("r0 must be at least 1")
    ring = RootRing(r0, r1)
    r = r1 - r0
    lhs = en_pushforward(ring)
    rhs = en_closed_form(ring)
    E0, E1 = ring.E0(), ring.E1()
    x_block, y_block = ring.blocks()
    return {
        "pushforward_equals_closed_form": lhs == rhs,
        "virtual_exterior_expansion": _virtual_exterior_expansion(ring, r) == exterior(r, E1 - E0),
        "closed_form_symmetric": is_block_symmetric(rhs, x_block) and is_block_symmetric(rhs, y_block),
    }


def eagon_northcott_check(r0: int, r1: int) -> bool:
    return all(eagon_northcott_report(r0, r1).values())


def corollary_check(rank: int) -> Dict[str, bool]:
    """Degeneracy locus of a section O -> V of a split bundle V of the given rank.

    Checks 1 - det(V^*) Lambda^(rank-1)(V - O) = Lambda_{-1}(V^*) and the
    alternating-sum form 1 - sum_{i=0}^{rank-1} (-1)^i Lambda^(i+1)(V^*).
    """
    if rank < 1:
        raise ValueError("rank must be at least 1")
    ring = RootRing(0, rank)
    V = ring.E1()
    O = VirtualClass.trivial(ring.nvars)
    koszul = lambda_total(V.dual())
    closed = ring.one() - V.dual().det() * exterior(rank - 1, V - O)
    lam = lambda_series(V.dual(), rank)
    alt = ring.one()
    for i in range(rank):
        alt = alt - lam[i + 1] * ((-1) ** i)
    return {"closed_form": closed == koszul, "alternating_sum": alt == koszul}


def duality_check(rank: int) -> bool:
    """prod(1 - L_i^(-1)) = (-1)^rank prod(1 - L_i) prod L_i^(-1) for split classes."""
    ring = RootRing(0, rank)
    V = ring.E1()
    lhs = lambda_total(V.dual())
    rhs = lambda_total(V) * V.dual().det() * ((-1) ** rank)
    return lhs == rhs
