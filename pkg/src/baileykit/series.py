"""Exact rational arithmetic and truncated Laurent series in t = q^(1/2).

All exponents throughout the package are measured in t-units, where t is the
square root of the base variable q; ordinary powers of q therefore sit on even
t-exponents.  A TSeries knows its coefficients exactly for exponents
min_exp..order and nothing above order ("unknown", not zero).
"""

from __future__ import annotations

from typing import Iterable, Sequence, Union

import gmpy2
from gmpy2 import mpq

from .errors import ZeroSeriesInversion

Rat = mpq

RatLike = Union[int, str, Rat]


def rat(p: RatLike, q: int = 1) -> Rat:
    """Coerce to an exact rational."""
    if q != 1:
        return mpq(p, q)
    return mpq(p)


def _lcm_denoms(coeffs: Sequence[Rat]) -> "gmpy2.mpz":
    d = gmpy2.mpz(1)
    for c in coeffs:
        cd = c.denominator
        if cd != 1:
            d = gmpy2.lcm(d, cd)
    return d


class Monomial:
    """c * t^e with exact rational c; the admissible form of free parameters.

    The zero monomial has coeff 0 (texp fixed at 0).  A distinguished
    INFINITY marker exists for limit specializations; it never takes part in
    series arithmetic and is only consumed by transform constructors.
    """

    __slots__ = ("coeff", "texp", "infinite")

    def __init__(self, coeff: RatLike, texp: int = 0, *, infinite: bool = False):
        if infinite:
            self.coeff = mpq(0)
            self.texp = 0
            self.infinite = True
            return
        c = rat(coeff)
        self.coeff = c
        self.texp = int(texp) if c else 0
        self.infinite = False

    def is_zero(self) -> bool:
        return not self.infinite and self.coeff == 0

    def is_one(self) -> bool:
        return not self.infinite and self.coeff == 1 and self.texp == 0

    def valuation(self) -> int:
        """t-valuation; only meaningful for nonzero finite monomials."""
        if self.infinite or self.is_zero():
            raise ValueError("valuation undefined for zero/INFINITY monomial")
        return self.texp

    def __mul__(self, other: "Monomial") -> "Monomial":
        if self.infinite or other.infinite:
            raise ValueError("cannot multiply INFINITY monomials")
        return Monomial(self.coeff * other.coeff, self.texp + other.texp)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        if self.infinite or other.infinite:
            raise ValueError("cannot divide INFINITY monomials")
        if other.coeff == 0:
            raise ZeroDivisionError("division by zero monomial")
        return Monomial(self.coeff / other.coeff, self.texp - other.texp)

    def __pow__(self, n: int) -> "Monomial":
        if self.infinite:
            raise ValueError("cannot exponentiate INFINITY")
        if n == 0:
            return Monomial(1, 0)
        if self.coeff == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of zero monomial")
            return Monomial(0, 0)
        return Monomial(self.coeff ** n, self.texp * n)

    def __neg__(self) -> "Monomial":
        if self.infinite:
            raise ValueError("cannot negate INFINITY")
        return Monomial(-self.coeff, self.texp)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Monomial):
            return NotImplemented
        if self.infinite or other.infinite:
            return self.infinite == other.infinite
        return self.coeff == other.coeff and self.texp == other.texp

    def __hash__(self) -> int:
        return hash(("Monomial", self.infinite, self.coeff, self.texp))

    def __repr__(self) -> str:
        if self.infinite:
            return "Monomial(INFINITY)"
        return f"Monomial({self.coeff}, t^{self.texp})"

    def to_series(self, order: int) -> "TSeries":
        if self.infinite:
            raise ValueError("INFINITY has no series form")
        if self.coeff == 0:
            return TSeries.zero(order)
        return TSeries.term(self.coeff, self.texp, order)


INFINITY = Monomial(0, 0, infinite=True)


def mono(coeff: RatLike, texp: int = 0) -> Monomial:
    return Monomial(coeff, texp)


def qmono(coeff: RatLike, qexp: int = 0) -> Monomial:
    """Monomial given in whole-q units (q^k sits at t-exponent 2k)."""
    return Monomial(coeff, 2 * qexp)


class TSeries:
    """Truncated formal Laurent series in t.

    Invariants: min_exp <= order + 1; an empty coefficient tuple means the
    series is 0 up to order; otherwise coeffs[0] (the coefficient at min_exp)
    is nonzero and coeffs runs densely from min_exp to order.
    """

    __slots__ = ("min_exp", "coeffs", "order")

    def __init__(self, min_exp: int, coeffs: Iterable[RatLike], order: int):
        cs = [rat(c) for c in coeffs]
        if min_exp + len(cs) - 1 > order:
            cs = cs[: order - min_exp + 1]
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        if i == len(cs):
            self.min_exp = order + 1
            self.coeffs = ()
        else:
            min_exp += i
            cs = cs[i:]
            cs.extend(mpq(0) for _ in range(order - min_exp + 1 - len(cs)))
            self.min_exp = min_exp
            self.coeffs = tuple(cs)
        self.order = order

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(order: int) -> "TSeries":
        return TSeries(order + 1, (), order)

    @staticmethod
    def one(order: int) -> "TSeries":
        return TSeries.term(1, 0, order)

    @staticmethod
    def term(coeff: RatLike, texp: int, order: int) -> "TSeries":
        c = rat(coeff)
        if c == 0 or texp > order:
            return TSeries.zero(order)
        return TSeries(texp, [c], order)

    # -- predicates / access ------------------------------------------

    def is_zero(self) -> bool:
        """True if the series is 0 on its whole known range."""
        return not self.coeffs

    def valuation(self):
        """Smallest known exponent with nonzero coefficient, or None."""
        return self.min_exp if self.coeffs else None

    def coeff(self, texp: int) -> Rat:
        """Coefficient at a known exponent (texp must be <= order)."""
        if texp > self.order:
            raise ValueError(f"coefficient at t^{texp} above truncation order {self.order}")
        if texp < self.min_exp:
            return mpq(0)
        return self.coeffs[texp - self.min_exp]

    def items(self):
        """Yield (texp, coeff) for nonzero known coefficients."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.min_exp + i, c

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "TSeries") -> "TSeries":
        order = min(self.order, other.order)
        if not self.coeffs:
            return other.truncate(order)
        if not other.coeffs:
            return self.truncate(order)
        lo = min(self.min_exp, other.min_exp)
        out = [mpq(0)] * (order - lo + 1)
        for i, c in enumerate(self.coeffs):
            e = self.min_exp + i
            if e > order:
                break
            out[e - lo] = c
        for i, c in enumerate(other.coeffs):
            e = other.min_exp + i
            if e > order:
                break
            out[e - lo] += c
        return TSeries(lo, out, order)

    def __neg__(self) -> "TSeries":
        return TSeries(self.min_exp, [-c for c in self.coeffs], self.order)

    def __sub__(self, other: "TSeries") -> "TSeries":
        return self + (-other)

    def __mul__(self, other: "TSeries") -> "TSeries":
        m1 = self.min_exp if self.coeffs else self.order + 1
        m2 = other.min_exp if other.coeffs else other.order + 1
        order = min(self.order + m2, other.order + m1)
        if not self.coeffs or not other.coeffs:
            return TSeries.zero(order)
        n = order - (m1 + m2) + 1
        da = _lcm_denoms(self.coeffs)
        db = _lcm_denoms(other.coeffs)
        A = [c.numerator * (da // c.denominator) for c in self.coeffs[:n]]
        B = [c.numerator * (db // c.denominator) for c in other.coeffs[:n]]
        res = [gmpy2.mpz(0)] * n
        lb = len(B)
        for i, ai in enumerate(A):
            if not ai:
                continue
            stop = min(n - i, lb)
            for j in range(stop):
                res[i + j] += ai * B[j]
        d = da * db
        return TSeries(m1 + m2, [mpq(r, d) for r in res], order)

    def scaled(self, c: RatLike) -> "TSeries":
        c = rat(c)
        if c == 0:
            return TSeries.zero(self.order)
        return TSeries(self.min_exp, [c * x for x in self.coeffs], self.order)

    def shift(self, coeff: RatLike, texp: int) -> "TSeries":
        """Exact multiplication by the monomial coeff * t^texp."""
        c = rat(coeff)
        if c == 0:
            return TSeries.zero(self.order + texp)
        return TSeries(self.min_exp + texp, [c * x for x in self.coeffs], self.order + texp)

    def mul_one_minus(self, c: RatLike, texp: int) -> "TSeries":
        """Exact multiplication by the two-term factor (1 - c*t^texp); O(len)."""
        c = rat(c)
        if c == 0:
            return self
        if not self.coeffs:
            return TSeries.zero(self.order + min(0, texp))
        m, o = self.min_exp, self.order
        new_m = m + min(0, texp)
        new_o = o + min(0, texp)
        out = [mpq(0)] * (new_o - new_m + 1)
        off = m - new_m
        for i, x in enumerate(self.coeffs):
            if off + i > new_o - new_m:
                break
            out[off + i] = x
        off2 = m + texp - new_m
        hi = new_o - new_m
        for i, x in enumerate(self.coeffs):
            j = off2 + i
            if j > hi:
                break
            if x:
                out[j] -= c * x
        return TSeries(new_m, out, new_o)

    def div_one_minus(self, c: RatLike, texp: int) -> "TSeries":
        """Exact division by (1 - c*t^texp); O(len). Inverse of mul_one_minus."""
        c = rat(c)
        if c == 0:
            return self
        if texp == 0:
            if c == 1:
                raise ZeroSeriesInversion("division by the zero factor (1 - 1)")
            return self.scaled(1 / (1 - c))
        if texp < 0:
            # 1 - c t^e = -c t^e (1 - (1/c) t^{-e}); peel the monomial first.
            return self.shift(-1 / c, -texp).div_one_minus(1 / c, -texp)
        if not self.coeffs:
            return TSeries.zero(self.order)
        m, o = self.min_exp, self.order
        out = [mpq(0)] * (o - m + 1)
        for i, x in enumerate(self.coeffs):
            out[i] = x
        # g_i = p_i + c*g_{i-texp}
        for i in range(texp, len(out)):
            prev = out[i - texp]
            if prev:
                out[i] += c * prev
        return TSeries(m, out, o)

    def inv(self) -> "TSeries":
        """Multiplicative inverse, exact to the derivable order."""
        if not self.coeffs:
            raise ZeroSeriesInversion("cannot invert a series that is 0 up to its order")
        m = self.min_exp
        rel = self.coeffs
        n = len(rel)
        c0 = rel[0]
        out = [mpq(0)] * n
        out[0] = 1 / c0
        for i in range(1, n):
            acc = mpq(0)
            for j in range(1, i + 1):
                cj = rel[j]
                if cj:
                    acc += cj * out[i - j]
            out[i] = -acc / c0
        return TSeries(-m, out, self.order - 2 * m)

    def scale_base(self, k: int, order: int | None = None) -> "TSeries":
        """Substitute t -> t^k (every exponent e becomes k*e)."""
        if k < 1:
            raise ValueError("scale factor must be a positive integer")
        natural = k * self.order + k - 1
        if order is None:
            order = natural
        order = min(order, natural)
        if not self.coeffs:
            return TSeries.zero(order)
        lo = k * self.min_exp
        out = [mpq(0)] * (order - lo + 1)
        for i, c in enumerate(self.coeffs):
            e = k * (self.min_exp + i)
            if e > order:
                break
            out[e - lo] = c
        return TSeries(lo, out, order)

    def truncate(self, order: int) -> "TSeries":
        # Truncation order can only be lowered; raising it would claim
        # knowledge we do not have, so that is a no-op.
        if order >= self.order:
            return self
        return TSeries(self.min_exp, self.coeffs[: max(0, order - self.min_exp + 1)], order)

    # -- comparison ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TSeries):
            return NotImplemented
        return (
            self.min_exp == other.min_exp
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.min_exp, self.coeffs, self.order))

    def __repr__(self) -> str:
        parts = []
        for e, c in list(self.items())[:8]:
            parts.append(f"{c}*t^{e}")
        body = " + ".join(parts) if parts else "0"
        if len(self.coeffs) > 8:
            body += " + ..."
        return f"TSeries({body}; order={self.order})"


def eq_up_to(f: TSeries, g: TSeries, order: int | None = None):
    """Compare coefficientwise on the common known range.

    Returns None if equal, else the smallest t-exponent where they differ.
    """
    hi = min(f.order, g.order)
    if order is not None:
        hi = min(hi, order)
    lo = min(f.min_exp if f.coeffs else hi + 1, g.min_exp if g.coeffs else hi + 1)
    for e in range(lo, hi + 1):
        if f.coeff(e) != g.coeff(e):
            return e
    return None


def series_sum(terms: Iterable[TSeries], order: int) -> TSeries:
    total = TSeries.zero(order)
    for t in terms:
        total = total + t
    return total
