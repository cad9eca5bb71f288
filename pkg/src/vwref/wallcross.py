"""Refined Joyce-Song pairs and Vafa-Witten invariants.

Pairs invariants P are expressed through VW invariants of the multiples
(m/N)alpha of a charge alpha of divisibility N.  Going the other way solves the
same sum triangularly, one multiple at a time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterator, Mapping, Optional, Tuple

from .errors import DivisionByZeroQuantum, MissingCharge
from .qseries import multiple_cover
from .scalar import RatFunc, quantum_integer, substitute_tr


@dataclass(frozen=True)
class ChargeProfile:
    """Divisibility N of alpha, chi((m/N) alpha(n)) for 1 <= m <= N, and whether H^{0,1} = H^{0,2} = 0."""

    N: int
    chi_of_multiple: Mapping[int, int] = field(default_factory=dict)
    hzero: bool = True

    def chi(self, m: int) -> int:
        if m not in self.chi_of_multiple:
            raise MissingCharge(f"chi of multiple {m} not given")
        return self.chi_of_multiple[m]


def compositions(n: int) -> Iterator[Tuple[int, ...]]:
    """Ordered tuples of positive integers summing to n."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def _weight(chi: int) -> RatFunc:
    return quantum_integer(chi) * (-1) ** (chi % 2)


def _vw(vw: Mapping[int, RatFunc], m: int) -> RatFunc:
    if m not in vw:
        raise MissingCharge(f"VW of multiple {m} not given")
    return RatFunc.coerce(vw[m])


def pairs_at(profile: ChargeProfile, vw: Mapping[int, RatFunc], m: int) -> RatFunc:
    """Pairs invariant of the multiple (m/N) alpha."""
    if not profile.hzero:
        chi = profile.chi(m)
        return -_weight(chi) * _vw(vw, m)
    total = RatFunc()
    for parts in compositions(m):
        ell = len(parts)
        term = RatFunc.coerce(Fraction((-1) ** ell, factorial(ell)))
        for p in parts:
            term = term * _weight(profile.chi(p)) * _vw(vw, p)
        total = total + term
    return total


def pairs_from_vw(profile: ChargeProfile, vw: Mapping[int, RatFunc]) -> RatFunc:
    return pairs_at(profile, vw, profile.N)


def pairs_map(profile: ChargeProfile, vw: Mapping[int, RatFunc]) -> Dict[int, RatFunc]:
    return {m: pairs_at(profile, vw, m) for m in range(1, profile.N + 1)}


def vw_from_pairs(profile: ChargeProfile, pairs: Mapping[int, RatFunc]) -> Dict[int, RatFunc]:
    """Invert the pairs sum level by level.

    Without the vanishing hypothesis only the top multiple is needed; otherwise
    every multiple 1..N is solved in increasing order.
    """
    levels = range(1, profile.N + 1) if profile.hzero else [profile.N]
    vw: Dict[int, RatFunc] = {}
    for m in levels:
        if m not in pairs:
            raise MissingCharge(f"pairs invariant of multiple {m} not given")
        chi = profile.chi(m)
        if chi == 0:
            raise DivisionByZeroQuantum(f"[0]_t at multiple {m}")
        vw[m] = RatFunc()
        rest = pairs_at(profile, vw, m) if profile.hzero else RatFunc()
        # the single-part term is -(-1)^chi [chi]_t VW(m)
        vw[m] = (RatFunc.coerce(pairs[m]) - rest) / (-_weight(chi))
    return vw


def uniform_contribution(r: int, vd: int, chi_ralpha_n: int, chivir_series) -> RatFunc:
    """Contribution of uniform pairs on an r-fold thickening.

    (-1)^(chi - 1) [r]_t^(-1) t^(-r vd / 2) times the virtual chi_{-t^r} genus
    of the primitive pairs space, passed in already evaluated at t^r.
    """
    sign = -1 if chi_ralpha_n % 2 == 0 else 1
    return RatFunc.coerce(chivir_series) * RatFunc.s_power(-r * vd, sign) / quantum_integer(r)


def projective_bundle_chi(chi0: int, base_chi) -> RatFunc:
    """chi_{-t} of a P^(chi0 - 1) bundle: (1 + t + ... + t^(chi0 - 1)) times that of the base."""
    geo = sum((RatFunc.s_power(2 * j) for j in range(chi0)), RatFunc())
    return geo * RatFunc.coerce(base_chi)


def primitive_vw(vd: int, chi0: int, chivir) -> RatFunc:
    """VW of a primitive charge from its pairs space: t^(-vd/2) chi^vir / [chi0]_t."""
    return RatFunc.coerce(chivir) * RatFunc.s_power(-vd) / quantum_integer(chi0)


def ball_identity(r: int, chi0: int, vd: int, chivir) -> Tuple[RatFunc, RatFunc]:
    """Both sides of the uniform-cover identity for the charge r * alpha0.

    Left: the direct uniform contribution.  Right: the single-term pairs sum
    applied to the multiple cover of the primitive invariant.
    """
    chivir = RatFunc.coerce(chivir)
    lhs = uniform_contribution(r, vd, r * chi0, substitute_tr(chivir, r))
    vw1 = primitive_vw(vd, chi0, chivir)
    profile = ChargeProfile(N=r, chi_of_multiple={r: r * chi0}, hzero=False)
    rhs = pairs_from_vw(profile, {r: multiple_cover(vw1, r)})
    return lhs, rhs


def nis_pairs(chi_alpha: int, components: Mapping[int, Tuple[int, object]]) -> RatFunc:
    """Pairs invariant summed over uniform covers r | alpha.

    ``components[r] = (vd, chivir)`` describes the pairs space of alpha / r.
    """
    sign = -1 if chi_alpha % 2 == 0 else 1
    total = RatFunc()
    for r, (vd, chivir) in sorted(components.items()):
        total = total + substitute_tr(RatFunc.coerce(chivir), r) * RatFunc.s_power(-r * vd) / quantum_integer(r)
    return total * sign


def projective_space_chi(m: int, y) -> RatFunc:
    """chi_{-y}(P^m) = sum_p (-y)^p chi(Omega^p) = sum_p y^p, from h^{p,p} = 1."""
    y = RatFunc.coerce(y)
    return sum((y**p for p in range(m + 1)), RatFunc())


def pairs_pg(p_g: int, chi: int) -> Dict[str, RatFunc]:
    """General type surface, charge (2, 0, 0): pairs and VW invariants.

    The pairs invariant is assembled from its factors on a P^(chi - 1) fibre:
    -p_g t^(chi - 1 + p_g/2) (1 + t)^(-p_g) chi_{t^2}(P^(chi-1)) t^(2 - 2 chi).
    The VW invariant comes from inverting the single-term pairs sum with
    chi(alpha(n)) = 2 chi.
    """
    if p_g < 1 or chi < 1:
        raise ValueError("p_g and chi must be positive")
    t = RatFunc.s_power(2)
    P = (
        RatFunc.s_power(2 * (chi - 1) + p_g, -p_g)
        / (1 + t) ** p_g
        * projective_space_chi(chi - 1, t * t)
        * RatFunc.s_power(4 - 4 * chi)
    )
    profile = ChargeProfile(N=1, chi_of_multiple={1: 2 * chi}, hzero=False)
    vw = vw_from_pairs(profile, {1: P})[1]
    return {"pairs": P, "vw": vw}


def proof_status(profile: ChargeProfile, *, stable: bool = False, k3_prime: bool = False, negative_canonical: bool = False) -> str:
    """'proven' when the pairs/VW relation is a theorem for this input, else 'conjectural'."""
    if profile.N == 1 or stable or k3_prime or negative_canonical:
        return "proven"
    return "conjectural"


def pairs_numeric(profile: ChargeProfile, vw: Mapping[int, Fraction], m: Optional[int] = None) -> Fraction:
    """The same pairs sum at t = 1, where every [chi]_t becomes chi."""
    m = profile.N if m is None else m

    def w(chi: int) -> Fraction:
        return Fraction((-1) ** (chi % 2) * chi)

    if not profile.hzero:
        return -w(profile.chi(m)) * Fraction(vw[m])
    total = Fraction(0)
    for parts in compositions(m):
        term = Fraction((-1) ** len(parts), factorial(len(parts)))
        for p in parts:
            term *= w(profile.chi(p)) * Fraction(vw[p])
        total += term
    return total
