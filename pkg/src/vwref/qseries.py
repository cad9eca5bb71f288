"""Truncated q-series with rational-function coefficients.

Covers the K3 Jacobi form Delta~(q, t), the chi_{-t} genera of Hilbert schemes
of points it generates, the rank-r generating series built from them and the
refined multiple cover formula.
"""

from __future__ import annotations

from typing import Callable, Dict, Iterable, List, Mapping, Optional

from .errors import OrderTooLow
from .scalar import HalfLaurent, ParamPoly, RatFunc, bar, eval_at_t1, quantum_integer, substitute_tr

IntLaurent = Dict[int, int]  # s-exponent -> integer


class QSeries:
    """Sum of c_k q^k for k < prec; coefficients at and above prec are unknown."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Mapping[int, object], prec: int):
        self.coeffs: Dict[int, RatFunc] = {}
        for k, c in coeffs.items():
            c = RatFunc.coerce(c)
            if c and k < prec:
                self.coeffs[int(k)] = c
        self.prec = prec

    @property
    def valuation(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def __getitem__(self, k: int) -> RatFunc:
        if k >= self.prec:
            raise OrderTooLow(f"coefficient of q^{k} requested, series known below q^{self.prec}")
        return self.coeffs.get(k, RatFunc())

    def exponents(self) -> List[int]:
        return sorted(self.coeffs)

    def __add__(self, other: "QSeries") -> "QSeries":
        prec = min(self.prec, other.prec)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return QSeries(out, prec)

    def __neg__(self):
        return QSeries({k: -c for k, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "QSeries":
        c = RatFunc.coerce(c)
        return QSeries({k: v * c for k, v in self.coeffs.items()}, self.prec)

    def shift(self, n: int) -> "QSeries":
        """Multiply by q^n."""
        return QSeries({k + n: c for k, c in self.coeffs.items()}, self.prec + n)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.scale(other)
        va = self.valuation
        vb = other.valuation
        if va is None or vb is None:
            return QSeries({}, min(self.prec + (vb or 0), other.prec + (va or 0)))
        prec = min(self.prec + vb, other.prec + va)
        out: Dict[int, RatFunc] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if i + j < prec:
                    out[i + j] = out[i + j] + a * b if i + j in out else a * b
        return QSeries(out, prec)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        fast = _to_int_series(self)
        if fast is not None:
            return _from_int_series(*_int_inverse(*fast))
        return self.inverse_generic()

    def inverse_generic(self) -> "QSeries":
        v = self.valuation
        if v is None:
            raise ZeroDivisionError("inverse of the zero series")
        n = self.prec - v
        a = [self.coeffs.get(v + i, RatFunc()) for i in range(n)]
        b0 = a[0].inverse()
        b = [b0]
        for m in range(1, n):
            acc = RatFunc()
            for i in range(1, m + 1):
                if a[i]:
                    acc = acc + a[i] * b[m - i]
            b.append(-acc * b0)
        return QSeries({i - v: c for i, c in enumerate(b)}, n - v)

    def subst_q_power(self, r: int) -> "QSeries":
        """q -> q^r."""
        return QSeries({k * r: c for k, c in self.coeffs.items()}, (self.prec - 1) * r + 1)

    def map_coeffs(self, fn: Callable[[RatFunc], RatFunc]) -> "QSeries":
        return QSeries({k: fn(c) for k, c in self.coeffs.items()}, self.prec)

    def truncate(self, prec: int) -> "QSeries":
        return QSeries(self.coeffs, min(prec, self.prec))

    def is_bar_symmetric(self) -> bool:
        return all(bar(c) == c for c in self.coeffs.values())

    def at_t1(self) -> Dict[int, ParamPoly]:
        return {k: eval_at_t1(c) for k, c in sorted(self.coeffs.items())}

    def table(self) -> Dict[int, str]:
        return {k: c.canonical() for k, c in sorted(self.coeffs.items())}

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        prec = min(self.prec, other.prec)
        a = {k: c for k, c in self.coeffs.items() if k < prec}
        b = {k: c for k, c in other.coeffs.items() if k < prec}
        return a == b

    def __repr__(self):
        return f"QSeries({len(self.coeffs)} terms, prec={self.prec})"


# ---------------------------------------------------------------------------
# integer Laurent fast path


def _il_mul(a: IntLaurent, b: IntLaurent) -> IntLaurent:
    out: IntLaurent = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _il_add_into(acc: IntLaurent, b: IntLaurent, scale: int = 1) -> None:
    for e, c in b.items():
        v = acc.get(e, 0) + scale * c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


def _to_int_series(f: QSeries):
    v = f.valuation
    if v is None:
        return None
    out: List[IntLaurent] = []
    for k in range(v, f.prec):
        c = f.coeffs.get(k)
        if c is None:
            out.append({})
            continue
        if not c.is_laurent():
            return None
        d: IntLaurent = {}
        for e, p in c.num.items():
            if not p.is_constant():
                return None
            x = p.constant()
            if not isinstance(x, int):
                return None
            d[e] = x
        out.append(d)
    lead = out[0]
    if len(lead) != 1 or abs(next(iter(lead.values()))) != 1:
        return None
    return out, v


def _from_int_series(coeffs: List[IntLaurent], v: int) -> QSeries:
    out = {}
    for i, d in enumerate(coeffs):
        if d:
            out[v + i] = RatFunc._raw(HalfLaurent({e: c for e, c in d.items()}), (1,))
    return QSeries(out, v + len(coeffs))


def _int_inverse(a: List[IntLaurent], v: int):
    """Inverse of q^v * sum a_i q^i whose leading coefficient is a unit +-s^e."""
    ((e0, c0),) = a[0].items()
    inv0 = {-e0: c0}  # c0 is +-1
    n = len(a)
    b = [inv0]
    for m in range(1, n):
        acc: IntLaurent = {}
        for i in range(1, m + 1):
            if a[i] and b[m - i]:
                _il_add_into(acc, _il_mul(a[i], b[m - i]))
        b.append({e: -c for e, c in _il_mul(acc, inv0).items()})
    return b, -v


def _times_linear(a: List[IntLaurent], k: int, mono_exp: int, sign: int = 1) -> None:
    """In place: a *= (1 - sign * s^mono_exp * q^k), truncated to len(a)."""
    for n in range(len(a) - 1, k - 1, -1):
        src = a[n - k]
        if src:
            _il_add_into(a[n], {e + mono_exp: c for e, c in src.items()}, -sign)


def delta_tilde(order: int, q_sign: int = 1) -> QSeries:
    """q prod_k (1-q^k)^20 (1-t q^k)^2 (1-t^-1 q^k)^2 through q^order.

    ``q_sign = -1`` evaluates the same product at -q.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if q_sign not in (1, -1):
        raise ValueError("q_sign must be +1 or -1")
    a: List[IntLaurent] = [{0: 1}] + [{} for _ in range(order - 1)]
    for k in range(1, order):
        sg = q_sign**k
        for _ in range(20):
            _times_linear(a, k, 0, sg)
        for _ in range(2):
            _times_linear(a, k, 2, sg)
            _times_linear(a, k, -2, sg)
    if q_sign < 0:
        a = [{e: -c for e, c in d.items()} for d in a]
    return _from_int_series(a, 1)


def eta24(order: int) -> Dict[int, int]:
    """Integer coefficients of q prod (1-q^k)^24 through q^order (t-free check)."""
    a = [1] + [0] * (order - 1)
    for k in range(1, order):
        for _ in range(24):
            for n in range(order - 1, k - 1, -1):
                a[n] -= a[n - k]
    return {i + 1: c for i, c in enumerate(a) if c}


# ---------------------------------------------------------------------------
# K3 series

_INV_CACHE: Dict[str, QSeries] = {}


def delta_tilde_inverse(order: int) -> QSeries:
    """Delta~^(-1) = sum_{k >= -1} t^(-k-1) chi_{-t}(Hilb^(k+1)) q^k, through q^order."""
    cached = _INV_CACHE.get("inv")
    if cached is None or cached.prec < order + 1:
        cached = delta_tilde(order + 2).inverse()
        _INV_CACHE["inv"] = cached
    return cached.truncate(order + 1)


def hilb_chi(n: int, order: Optional[int] = None) -> RatFunc:
    """chi_{-t} genus of the Hilbert scheme of n points on a K3 surface."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if order is not None and n > order:
        raise OrderTooLow(f"hilb_chi({n}) needs order >= {n}")
    return delta_tilde_inverse(n - 1)[n - 1] * RatFunc.s_power(2 * n)


def _divisors(r: int) -> List[int]:
    return [d for d in range(1, r + 1) if r % d == 0]


def is_prime(r: int) -> bool:
    return r >= 2 and all(r % p for p in range(2, int(r**0.5) + 1))


def vw_k3_series(r: int, order: int) -> QSeries:
    """Sum_n VW_{r,n}(t) q^n through q^order, from the Hilbert-scheme expansion.

    For each d | r the root-of-unity average over Delta~^(-1) is realised by
    keeping only the Hilbert schemes whose index is 1 mod r/d.
    """
    if r < 1:
        raise ValueError("rank must be positive")
    out: Dict[int, RatFunc] = {}
    for d in _divisors(r):
        weight = quantum_integer(d) ** -2
        m = -1 if d == r else 0
        while m * d + r <= order:
            n = (r // d) * m + 1
            term = substitute_tr(hilb_chi(n), d) * RatFunc.s_power(-2 * (m * r + d)) * weight
            k = m * d + r
            out[k] = out[k] + term if k in out else term
            m += 1
    return QSeries(out, order + 1)


def gk_rhs(r: int, order: int) -> QSeries:
    """Prime-rank closed form: [r]^-2 q^r D(q^r, t^r) + (1/r) q^r sum_j D(zeta^j q^(1/r), t).

    D is Delta~^(-1).  The second term is the part of D whose q-exponents are
    divisible by r, rescaled k -> k/r.
    """
    if not is_prime(r):
        raise ValueError(f"closed form is stated for prime rank, got {r}")
    need = max(order * r, order)
    D = delta_tilde_inverse(need)
    first = D.map_coeffs(lambda c: substitute_tr(c, r)).subst_q_power(r).scale(quantum_integer(r) ** -2).shift(r)
    sel = {k // r: c for k, c in D.coeffs.items() if k % r == 0}
    second = QSeries(sel, (D.prec - 1) // r + 1).shift(r)
    return (first + second).truncate(order + 1)


def gk_rhs_literal_rank2(order: int) -> QSeries:
    """r = 2 second term by literal averaging (D(u) + D(-u))/2 with u = q^(1/2)."""
    need = 2 * order
    Dp = delta_tilde(need + 2).inverse()
    Dm = delta_tilde(need + 2, q_sign=-1).inverse()
    avg = (Dp + Dm).scale(RatFunc.coerce(1) / 2)
    halved = {k // 2: c for k, c in avg.coeffs.items()}
    if any(k % 2 for k in avg.coeffs):
        raise ArithmeticError("odd powers survived the average")
    D = delta_tilde_inverse(need)
    first = D.map_coeffs(lambda c: substitute_tr(c, 2)).subst_q_power(2).scale(quantum_integer(2) ** -2).shift(2)
    second = QSeries(halved, (avg.prec - 1) // 2 + 1).shift(2)
    return (first + second).truncate(order + 1)


def multiple_cover(vw1, r: int) -> RatFunc:
    """VW for r times a charge from VW of the charge itself: vw1(t^r) / [r]_t^2."""
    if r < 1:
        raise ValueError("r must be positive")
    return substitute_tr(RatFunc.coerce(vw1), r) * quantum_integer(r) ** -2


def gen_type_series(P2: int, order: int = 2, registry=None) -> QSeries:
    """Monopole-branch generating series for a general type surface through q^order.

    Coefficients come from localization on the fixed loci registered as
    scenarios; the q^2 term adds the horizontal and vertical pieces.
    """
    if order > 2:
        raise OrderTooLow("only the terms through q^2 are available")
    if order < 0:
        raise ValueError("order must be non-negative")
    from .scenarios import default_registry

    reg = registry or default_registry()
    b = {"P2": P2}
    coeffs = {0: reg.evaluate("gt_horizontal_n0", b)}
    if order >= 1:
        coeffs[1] = reg.evaluate("gt_horizontal_n1", b)
    if order >= 2:
        coeffs[2] = reg.evaluate("gt_horizontal_n2", b) + reg.evaluate("gt_vertical_n2", b)
    return QSeries(coeffs, order + 1)


K3_HODGE = ((1, 0, 1), (0, 20, 0), (1, 0, 1))


def chi_minus_t_from_hodge(hodge) -> RatFunc:
    """chi_{-t} = sum_p t^p sum_q (-1)^(p+q) h^{p,q}."""
    out = RatFunc()
    for p, row in enumerate(hodge):
        c = sum((-1) ** (p + q) * h for q, h in enumerate(row))
        out = out + RatFunc.s_power(2 * p, c)
    return out


def euler_hilb_k3(n: int) -> int:
    """Euler characteristic of Hilb^n(K3): coefficient of q^n in prod (1-q^k)^(-24)."""
    a = [1] + [0] * n
    for k in range(1, n + 1):
        for _ in range(24):
            for m in range(k, n + 1):
                a[m] += a[m - k]
    return a[n]
