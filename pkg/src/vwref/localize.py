"""K-theoretic localization on a fixed locus and its t = 1 Euler-class shadow."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from .cohring import CohClass, CohRing, chern_from_ch, integrate, invert_unit, todd_from_tangent_ch
from .eqkth import LINE, RANK2, TRIVIAL, EqKClass, ch, dual, lambda_minus_one
from .errors import InvalidFixedLocus, NonLineAtom, ResidualTau, ZeroWeightDenominator
from .scalar import ParamPoly, RatFunc, bar, cyclotomic_factorization, eval_at_t1


@dataclass(frozen=True)
class FixedLocusData:
    base: CohRing
    numerator: EqKClass
    nvir: EqKClass
    tangent_ch: CohClass
    prefactor: RatFunc = field(default_factory=lambda: RatFunc.coerce(1))

    def validate(self) -> None:
        for part in (self.numerator, self.nvir):
            if part.ring != self.base:
                raise InvalidFixedLocus(f"class over {part.ring.label}, base is {self.base.label}")
        if self.tangent_ch.ring != self.base:
            raise InvalidFixedLocus("tangent Chern character lives on another ring")
        for a in self.nvir.atoms:
            if a.weight == 0:
                raise ZeroWeightDenominator("virtual normal bundle has a weight-0 atom")
        dim = self.tangent_ch.degree0
        if RatFunc.coerce(-self.nvir.rank) != dim:
            raise InvalidFixedLocus(
                f"rank of the virtual normal bundle is {self.nvir.rank}, expected -({dim})"
            )


def chi_t(data: FixedLocusData) -> RatFunc:
    """prefactor * integral of ch(numerator) / ch(Lambda_{-1} N^vir dual) * Td."""
    data.validate()
    denom = lambda_minus_one(dual(data.nvir))
    integrand = ch(data.numerator) * invert_unit(denom) * todd_from_tangent_ch(data.tangent_ch)
    return data.prefactor * integrate(integrand)


def _euler_factor(atom, ring: CohRing, tau: RatFunc) -> CohClass:
    w = Fraction(atom.weight, 2)
    wt = tau * w
    if atom.kind == TRIVIAL:
        return ring.scalar(wt)
    if atom.kind == LINE:
        return atom.c1 + wt
    c1, c2 = chern_from_ch(atom.ch)
    return c2 + c1 * wt + wt * wt


def euler_oracle(data: FixedLocusData, allow_rank2: bool = False) -> ParamPoly:
    """t = 1 value predicted by integrating 1/e(N^vir) with a formal equivariant parameter.

    The parameter tau is carried as the variable of a RatFunc, independent of
    the K-theoretic path.  Rank-2 atoms use their Chern classes directly when
    ``allow_rank2`` is set.
    """
    data.validate()
    ring = data.base
    tau = RatFunc.s_power(1)
    e = ring.one()
    for a in data.nvir.atoms:
        if a.kind == RANK2 and not allow_rank2:
            raise NonLineAtom("rank-2 atom in the virtual normal bundle")
        f = _euler_factor(a, ring, tau)
        e = e * (invert_unit(f) if a.sign > 0 else f)
    val = integrate(e)
    if not val.is_constant():
        raise ResidualTau(val.canonical())
    return val.constant() * eval_at_t1(data.prefactor) * data.numerator.rank


def check_symmetry(f: RatFunc) -> bool:
    return bar(f) == f


def pole_report(f: RatFunc) -> Dict[str, object]:
    """Where the poles of f sit: cyclotomic factors of the denominator and the origin."""
    factors = cyclotomic_factorization(f)
    return {
        "cyclotomic_denominator": factors is not None,
        "cyclotomic_factors": {str(k): v for k, v in sorted((factors or {}).items())},
        "origin_pole": f.has_origin_pole(),
    }
