"""q-Pochhammer symbols, Gaussian binomials, triple products, and windowed
evaluation of unilateral/bilateral hypergeometric-type sums.

The base of a Pochhammer symbol is t^base_texp; ordinary base q corresponds
to base_texp = 2.  Negative-index symbols follow (a)_{-k} = 1/(a*base^{-k})_k.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence, Union

from .errors import FormalDivergence, ZeroSeriesInversion
from .series import INFINITY, Monomial, Rat, TSeries, rat

Value = Union[Monomial, TSeries]


@dataclass(frozen=True)
class PochhammerArg:
    """Argument of a q-shifted factorial together with its base."""

    value: Value
    base_texp: int = 2


class TermCounter:
    """Mutable tally of summation terms evaluated."""

    __slots__ = ("count",)

    def __init__(self) -> None:
        self.count = 0

    def add(self, k: int = 1) -> None:
        self.count += k


def _valuation(value: Value):
    if isinstance(value, Monomial):
        if value.infinite:
            raise ValueError("INFINITY is not a series value")
        return None if value.is_zero() else value.texp
    return value.valuation()


def _is_zero_value(value: Value) -> bool:
    return _valuation(value) is None


def _factor_series(value: Value, shift_texp: int, order: int) -> TSeries:
    """The factor 1 - value*t^shift_texp as a series at the given order."""
    if isinstance(value, Monomial):
        return TSeries.one(order).mul_one_minus(value.coeff, value.texp + shift_texp)
    shifted = value.shift(1, shift_texp)
    return TSeries.one(min(order, shifted.order)) - shifted


def poch(value: Value, k: int, *, base_texp: int = 2, order: int) -> TSeries:
    """(a; base)_k for any integer k."""
    if k == 0 or _is_zero_value(value):
        return TSeries.one(order)
    b = base_texp
    if isinstance(value, Monomial):
        c, e = value.coeff, value.texp
        if k > 0:
            pad = sum(max(0, -(e + b * j)) for j in range(k))
            f = TSeries.one(order + pad)
            for j in range(k):
                f = f.mul_one_minus(c, e + b * j)
            return f.truncate(order)
        kk = -k
        den = TSeries.one(order)
        for i in range(1, kk + 1):
            den = den.mul_one_minus(c, e - b * i)
        return den.inv().truncate(order)
    # series-valued argument: generic (dense) path
    if k > 0:
        f = TSeries.one(order)
        for j in range(k):
            f = f * _factor_series(value, b * j, order)
        return f.truncate(order)
    kk = -k
    den = TSeries.one(order)
    for i in range(1, kk + 1):
        den = den * _factor_series(value, -b * i, order)
    return den.inv().truncate(order)


def poch_recip(value: Value, k: int, *, base_texp: int = 2, order: int) -> TSeries:
    """1/(a; base)_k, computed without inverting when k < 0 (where the
    reciprocal is itself a finite product and may legitimately vanish)."""
    if k == 0 or _is_zero_value(value):
        return TSeries.one(order)
    b = base_texp
    if k < 0:
        kk = -k
        if isinstance(value, Monomial):
            c, e = value.coeff, value.texp
            pad = sum(max(0, -(e - b * i)) for i in range(1, kk + 1))
            f = TSeries.one(order + pad)
            for i in range(1, kk + 1):
                f = f.mul_one_minus(c, e - b * i)
            return f.truncate(order)
        f = TSeries.one(order)
        for i in range(1, kk + 1):
            f = f * _factor_series(value, -b * i, order)
        return f.truncate(order)
    return poch(value, k, base_texp=base_texp, order=order).inv().truncate(order)


def poch_inf(value: Value, order: int, *, base_texp: int = 2) -> TSeries:
    """(a; base)_infinity, truncated once a*base^j has valuation > order.

    Requires valuation(a) >= 1; otherwise the construction is rejected with
    FormalDivergence (see poch_inf_ext for the Laurent-peeling variant used
    by identity builders).
    """
    v = _valuation(value)
    if v is None:
        return TSeries.one(order)
    if v <= 0:
        raise FormalDivergence(
            f"infinite product needs argument valuation >= 1, got {v}"
        )
    b = base_texp
    if isinstance(value, Monomial):
        f = TSeries.one(order)
        j = 0
        while value.texp + b * j <= order:
            f = f.mul_one_minus(value.coeff, value.texp + b * j)
            j += 1
        return f
    f = TSeries.one(order)
    j = 0
    while v + b * j <= order:
        f = f * _factor_series(value, b * j, order)
        j += 1
    return f.truncate(order)


def poch_inf_ext(value: Value, order: int, *, base_texp: int = 2) -> TSeries:
    """(a; base)_infinity for arguments of any valuation.

    Finitely many leading factors with valuation <= 0 are peeled off exactly
    (they may make the product identically zero); the tail is a plain
    poch_inf.  This is what the identity builders use for product sides with
    nonpositive exponents.
    """
    v = _valuation(value)
    if v is None:
        return TSeries.one(order)
    b = base_texp
    if isinstance(value, Monomial):
        c, e = value.coeff, value.texp
        peel = []
        j = 0
        while e + b * j <= 0:
            if c == 1 and e + b * j == 0:
                return TSeries.zero(order)
            peel.append(e + b * j)
            j += 1
        pad = sum(-p for p in peel if p < 0)
        f = TSeries.one(order + pad)
        for p in peel:
            f = f.mul_one_minus(c, p)
        tail = poch_inf(Monomial(c, e + b * j), order + pad, base_texp=b)
        return (f * tail).truncate(order)
    # series argument
    f = TSeries.one(order)
    j = 0
    while v + b * j <= 0:
        fac = _factor_series(value, b * j, order)
        if fac.is_zero():
            return TSeries.zero(order)
        f = f * fac
        j += 1
    tail_arg = value.shift(1, b * j)
    return (f * poch_inf(tail_arg, order, base_texp=b)).truncate(order)


def qpow_inf(texp: int, base_texp: int, order: int, coeff: Rat | int = 1) -> TSeries:
    """(coeff * t^texp; t^base_texp)_infinity for any integer texp."""
    return poch_inf_ext(Monomial(coeff, texp), order, base_texp=base_texp)


def poch_multi(args: Iterable[PochhammerArg | Value], k: int | None, *, order: int) -> TSeries:
    """Product of q-shifted factorials (a_1)_k ... (a_m)_k; k = None means
    infinity."""
    f = TSeries.one(order)
    for a in args:
        arg = a if isinstance(a, PochhammerArg) else PochhammerArg(a)
        if k is None:
            f = f * poch_inf(arg.value, order, base_texp=arg.base_texp)
        else:
            f = f * poch(arg.value, k, base_texp=arg.base_texp, order=order)
    return f.truncate(order)


@lru_cache(maxsize=None)
def _gauss_units(n: int, k: int) -> tuple:
    """Gaussian binomial [n, k] as integer coefficients in whole-base units."""
    if k < 0 or k > n:
        return ()
    k = min(k, n - k)
    c = [1]
    for j in range(1, k + 1):
        e = n - k + j
        res = c + [0] * e
        for i, ci in enumerate(c):
            res[i + e] -= ci
        c = res
    for j in range(1, k + 1):
        for i in range(j, len(c)):
            c[i] += c[i - j]
        while c and c[-1] == 0:
            c.pop()
    return tuple(c)


def qbinom(n: int, k: int, base_texp: int = 2, order: int | None = None) -> TSeries:
    """The Gaussian polynomial [n, k] in base t^base_texp; the zero series
    when k < 0 or k > n."""
    units = _gauss_units(n, k)
    deg = (len(units) - 1) * base_texp if units else 0
    if order is None:
        order = deg
    if not units:
        return TSeries.zero(order)
    coeffs = [0] * (min(order, deg) + 1)
    for i, u in enumerate(units):
        e = i * base_texp
        if e <= order:
            coeffs[e] = u
    return TSeries(0, coeffs, order)


def triple_product(z: Monomial, modulus_texp: int, order: int) -> TSeries:
    """(base, z, base/z; base)_infinity with base = t^modulus_texp."""
    v = _valuation(z)
    if v is None or not (0 < v < modulus_texp):
        raise FormalDivergence(
            f"triple product needs 0 < val(z) < {modulus_texp}, got {v}"
        )
    base = Monomial(1, modulus_texp)
    f = poch_inf(base, order, base_texp=modulus_texp)
    f = f * poch_inf(z, order, base_texp=modulus_texp)
    f = f * poch_inf(base / z, order, base_texp=modulus_texp)
    return f.truncate(order)


# ---------------------------------------------------------------------------
# Windowed summation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SumWindow:
    """Initial summation bounds; adaptive windows extend until the stop rule
    (stall_cap consecutive over-order terms with nondecreasing valuations)
    fires."""

    lo: int = 0
    hi: int = 8
    adaptive: bool = True
    stall_cap: int = 3

    def scaled(self, factor: int) -> "SumWindow":
        return SumWindow(self.lo * factor, self.hi * factor, self.adaptive, self.stall_cap)


def _collect_direction(
    term: Callable[[int], TSeries],
    start: int,
    initial_end: int,
    step: int,
    window: SumWindow,
    order: int,
    counter: TermCounter | None,
):
    """Evaluate terms in one direction until the stall rule fires."""
    cap = window.stall_cap
    width = abs(initial_end - start) + 1
    budget = 4 * cap * max(width, cap)
    out = []
    run = 0
    last = None
    n = start
    while True:
        past_initial = (n - initial_end) * step > 0
        if past_initial:
            if not window.adaptive:
                break
            if run >= cap:
                break
            if abs(n - initial_end) > budget:
                raise FormalDivergence(
                    f"stop rule did not fire within {budget} terms past the "
                    f"initial window at index {n}"
                )
        t = term(n)
        if counter is not None:
            counter.add()
        out.append(t)
        v = t.valuation()
        veff = math.inf if v is None else v
        if veff > order and (last is None or veff >= last):
            run += 1
            last = veff
        elif veff > order:
            run = 1
            last = veff
        else:
            run = 0
            last = None
        n += step
    return out


def sum_unilateral(
    term: Callable[[int], TSeries],
    window: SumWindow,
    order: int,
    *,
    counter: TermCounter | None = None,
    reverse: bool = False,
) -> TSeries:
    """Sum term(n) over n >= window.lo, truncated at order."""
    terms = _collect_direction(term, window.lo, window.hi, +1, window, order, counter)
    if reverse:
        terms = list(reversed(terms))
    total = TSeries.zero(order)
    for t in terms:
        total = total + t
    return total.truncate(order)


def sum_bilateral(
    term: Callable[[int], TSeries],
    window: SumWindow,
    order: int,
    *,
    counter: TermCounter | None = None,
    reverse: bool = False,
) -> TSeries:
    """Sum term(n) over all integers n, truncated at order.  The adaptive
    stop rule is applied independently in each direction."""
    ups = _collect_direction(term, 0, max(window.hi, 0), +1, window, order, counter)
    downs = _collect_direction(term, -1, min(window.lo, -1), -1, window, order, counter)
    terms = ups + downs
    if reverse:
        terms = list(reversed(terms))
    total = TSeries.zero(order)
    for t in terms:
        total = total + t
    return total.truncate(order)


# ---------------------------------------------------------------------------
# Incremental Pochhammer families and hypergeometric term generators
# ---------------------------------------------------------------------------


class PochFamily:
    """Cache of (a; base)_k over varying integer k at a fixed order.

    Products are extended one factor at a time (O(len) per step); negative
    indices use the finite-product form of the reciprocal so that a genuinely
    vanishing 1/(a)_k comes out as the zero series rather than an error.
    """

    def __init__(self, value: Value, order: int, *, base_texp: int = 2):
        self.value = value
        self.order = order
        self.base_texp = base_texp
        self.zero_arg = _is_zero_value(value)
        self._mono = isinstance(value, Monomial) and not value.infinite
        if self._mono and not self.zero_arg:
            c, e = value.coeff, value.texp
            pad = 0
            j = 0
            while e + base_texp * j < 0:
                pad += -(e + base_texp * j)
                j += 1
            self._pad_up = pad
        else:
            self._pad_up = 0
        self._up = {0: TSeries.one(order + self._pad_up)}
        self._dn = {0: TSeries.one(order)}
        self._at = {}
        self._recip = {}

    def _ensure_up(self, k: int) -> TSeries:
        top = max(self._up)
        while top < k:
            f = self._up[top]
            if self._mono:
                f = f.mul_one_minus(self.value.coeff, self.value.texp + self.base_texp * top)
            else:
                f = f * _factor_series(self.value, self.base_texp * top, self.order)
            top += 1
            self._up[top] = f
        return self._up[k]

    def _ensure_dn(self, k: int) -> TSeries:
        # dn[-kk] = prod_{i=1..kk} (1 - a*base^{-i}) = 1/(a)_{-kk}
        bot = min(self._dn)
        while bot > k:
            f = self._dn[bot]
            i = -bot + 1
            if self._mono:
                f = f.mul_one_minus(self.value.coeff, self.value.texp - self.base_texp * i)
            else:
                f = f * _factor_series(self.value, -self.base_texp * i, self.order)
            bot -= 1
            self._dn[bot] = f
        return self._dn[k]

    def at(self, k: int) -> TSeries:
        """(a)_k truncated at the family order."""
        if self.zero_arg:
            return TSeries.one(self.order)
        got = self._at.get(k)
        if got is None:
            if k >= 0:
                got = self._ensure_up(k).truncate(self.order)
            else:
                den = self._ensure_dn(k)
                if den.is_zero():
                    raise ZeroSeriesInversion(
                        f"(a)_{k} is infinite: reciprocal product vanishes"
                    )
                got = den.inv().truncate(self.order)
            self._at[k] = got
        return got

    def recip_at(self, k: int) -> TSeries:
        """1/(a)_k truncated at the family order (zero series allowed for
        negative k)."""
        if self.zero_arg:
            return TSeries.one(self.order)
        got = self._recip.get(k)
        if got is None:
            if k < 0:
                got = self._ensure_dn(k).truncate(self.order)
            else:
                up = self._ensure_up(k)
                if up.is_zero():
                    raise ZeroSeriesInversion(f"(a)_{k} vanishes; reciprocal undefined")
                got = up.inv().truncate(self.order)
            self._recip[k] = got
        return got


class TermFamily:
    """Incremental generator of bilateral hypergeometric-type terms

        T(k) = prefactor * W(k) * z^k
               * prod (u; base)_k / prod (l; base)_k
               * prod (x; base)_{2k} / prod (y; base)_{2k}

    with W(0) = 1 and W(k)/W(k-1) = weight_ratio(k), a Monomial.  Each step
    to an adjacent k costs O(len) per parameter.  A vanishing factor entering
    from a lower-row product makes all further terms in that direction
    exactly zero; a vanishing divisor raises ZeroSeriesInversion (a genuine
    pole of the term).
    """

    def __init__(
        self,
        order: int,
        *,
        base_texp: int = 2,
        uppers: Sequence[Monomial] = (),
        lowers: Sequence[Monomial] = (),
        uppers2: Sequence[Monomial] = (),
        lowers2: Sequence[Monomial] = (),
        z: Monomial | None = None,
        weight_ratio: Callable[[int], Monomial] | None = None,
        prefactor: TSeries | None = None,
    ):
        self.order = order
        self.b = base_texp
        self.uppers = tuple(uppers)
        self.lowers = tuple(lowers)
        self.uppers2 = tuple(uppers2)
        self.lowers2 = tuple(lowers2)
        self.z = z if z is not None else Monomial(1, 0)
        self.wr = weight_ratio
        base = prefactor if prefactor is not None else TSeries.one(order)
        self._memo = {0: base}
        self._dead_up = None
        self._dead_dn = None

    def _mul_factor(self, f: TSeries, value: Monomial, texp_shift: int):
        if value.is_zero():
            return f, False
        e = value.texp + texp_shift
        if value.coeff == 1 and e == 0:
            return TSeries.zero(self.order), True
        return f.mul_one_minus(value.coeff, e), False

    def _div_factor(self, f: TSeries, value: Monomial, texp_shift: int) -> TSeries:
        if value.is_zero():
            return f
        e = value.texp + texp_shift
        if value.coeff == 1 and e == 0:
            raise ZeroSeriesInversion("term has a pole: dividing by the zero factor")
        return f.div_one_minus(value.coeff, e)

    def _step_up(self, f: TSeries, k: int) -> TSeries:
        # from T(k-1) to T(k)
        b = self.b
        dead = False
        for u in self.uppers:
            f, d = self._mul_factor(f, u, b * (k - 1))
            dead = dead or d
        for x in self.uppers2:
            f, d = self._mul_factor(f, x, b * (2 * k - 2))
            dead = dead or d
            f, d = self._mul_factor(f, x, b * (2 * k - 1))
            dead = dead or d
        if dead:
            self._dead_up = k
            return TSeries.zero(self.order)
        for l in self.lowers:
            f = self._div_factor(f, l, b * (k - 1))
        for y in self.lowers2:
            f = self._div_factor(f, y, b * (2 * k - 2))
            f = self._div_factor(f, y, b * (2 * k - 1))
        if not self.z.is_one():
            f = f.shift(self.z.coeff, self.z.texp)
        if self.wr is not None:
            w = self.wr(k)
            f = f.shift(w.coeff, w.texp)
        return f

    def _step_dn(self, f: TSeries, k: int) -> TSeries:
        # from T(k+1) to T(k); inverse of _step_up at index k+1
        b = self.b
        kk = k + 1
        dead = False
        for l in self.lowers:
            f, d = self._mul_factor(f, l, b * (kk - 1))
            dead = dead or d
        for y in self.lowers2:
            f, d = self._mul_factor(f, y, b * (2 * kk - 2))
            dead = dead or d
            f, d = self._mul_factor(f, y, b * (2 * kk - 1))
            dead = dead or d
        if dead:
            self._dead_dn = k
            return TSeries.zero(self.order)
        for u in self.uppers:
            f = self._div_factor(f, u, b * (kk - 1))
        for x in self.uppers2:
            f = self._div_factor(f, x, b * (2 * kk - 2))
            f = self._div_factor(f, x, b * (2 * kk - 1))
        if not self.z.is_one():
            f = f.shift(1 / self.z.coeff, -self.z.texp)
        if self.wr is not None:
            w = self.wr(kk)
            f = f.shift(1 / w.coeff, -w.texp)
        return f

    def at(self, k: int) -> TSeries:
        if self._dead_up is not None and k >= self._dead_up:
            return TSeries.zero(self.order)
        if self._dead_dn is not None and k <= self._dead_dn:
            return TSeries.zero(self.order)
        got = self._memo.get(k)
        if got is not None:
            return got
        if k > 0:
            top = max(i for i in self._memo if i <= k)
            f = self._memo[top]
            for i in range(top + 1, k + 1):
                f = self._step_up(f, i)
                if f.is_zero() and self._dead_up is not None:
                    return TSeries.zero(self.order)
                self._memo[i] = f
        else:
            bot = min(i for i in self._memo if i >= k)
            f = self._memo[bot]
            for i in range(bot - 1, k - 1, -1):
                f = self._step_dn(f, i)
                if f.is_zero() and self._dead_dn is not None:
                    return TSeries.zero(self.order)
                self._memo[i] = f
        return self._memo[k]


def vwp_factor(term: TSeries, a: Monomial, k: int, inv_one_minus_a: TSeries, base_texp: int = 2) -> TSeries:
    """Multiply a term by the very-well-poised factor (1 - a*q^{2k})/(1 - a)."""
    if a.is_zero():
        return term
    return term.mul_one_minus(a.coeff, a.texp + 2 * base_texp * k) * inv_one_minus_a


def inv_one_minus(a: Monomial, order: int) -> TSeries:
    """1/(1 - a) as a series (a a nonone monomial)."""
    if a.is_zero():
        return TSeries.one(order)
    if a.coeff == 1 and a.texp == 0:
        raise ZeroSeriesInversion("1 - a vanishes")
    pad = max(0, -a.texp)
    return TSeries.one(order + 2 * pad).mul_one_minus(a.coeff, a.texp).inv().truncate(order + pad)
