"""Bailey pairs (classical/bilateral/shifted) and well-poised variants:
indexed term generators, the lemma transforms, defining-relation checkers,
and inversions.

A pair related to base b = t^base_texp and a = b^m exposes alpha(n, order)
and beta(n, order) generators (memoized); beta_floor is the provable lower
support bound (beta_n = 0 whenever 2n + m < 0, and constructors may report a
tighter floor).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import (
    DegenerateParameter,
    EvaluationError,
    FormalDivergence,
    UnsupportedShift,
    ZeroSeriesInversion,
)
from .qfunctions import PochFamily, poch, poch_recip, qbinom
from .series import INFINITY, Monomial, TSeries, eq_up_to, mono


def _at_order(build: Callable[[int], TSeries], order: int, pad: int = 0) -> TSeries:
    """Evaluate build at padded orders until the result is exact to order."""
    for _ in range(6):
        res = build(order + pad)
        if res.order >= order:
            return res.truncate(order)
        pad = 2 * (pad + (order - res.order)) + 4
    raise EvaluationError("could not reach requested truncation order")


class BaileyPair:
    """Bilateral pair related to a = base^m, base = t^base_texp."""

    def __init__(
        self,
        m: int,
        base_texp: int,
        alpha_fn: Callable[[int, int], TSeries],
        beta_fn: Callable[[int, int], TSeries],
        beta_floor: int,
    ):
        self.m = m
        self.base_texp = base_texp
        self.beta_floor = beta_floor
        self._alpha_fn = alpha_fn
        self._beta_fn = beta_fn
        self._ca: dict = {}
        self._cb: dict = {}

    def beta_is_zero(self, n: int) -> bool:
        """Whether beta_n is provably the zero series."""
        return n < self.beta_floor

    def alpha(self, n: int, order: int) -> TSeries:
        key = (n, order)
        got = self._ca.get(key)
        if got is None:
            got = self._ca[key] = _at_order(lambda o: self._alpha_fn(n, o), order)
        return got

    def beta(self, n: int, order: int) -> TSeries:
        if n < self.beta_floor:
            return TSeries.zero(order)
        key = (n, order)
        got = self._cb.get(key)
        if got is None:
            got = self._cb[key] = _at_order(lambda o: self._beta_fn(n, o), order)
        return got


class WPBaileyPair(BaileyPair):
    """Well-poised bilateral pair related to a = q^m and the extra parameter
    alpha_param (a monomial; the zero monomial embeds a classical pair)."""

    def __init__(self, m, alpha_param: Monomial, alpha_fn, beta_fn, beta_floor):
        super().__init__(m, 2, alpha_fn, beta_fn, beta_floor)
        self.alpha_param = alpha_param


@dataclass
class CheckEntry:
    n: int
    status: str  # "pass" | "fail" | "skipped"
    mismatch_texp: Optional[int] = None
    reason: str = ""


@dataclass
class CheckReport:
    entries: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(e.status != "fail" for e in self.entries)

    @property
    def first_failure(self) -> Optional[CheckEntry]:
        for e in self.entries:
            if e.status == "fail":
                return e
        return None

    @property
    def skipped(self) -> list:
        return [e for e in self.entries if e.status == "skipped"]


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def shifted_pair(m: int) -> BaileyPair:
    """The closed-form shifted pair at a = q^m:
    alpha_n = (-1)^n q^{n(n-1)/2}, beta_n = (q)_m (-1)^n q^{n(n-1)/2} [m+n, m+2n]_q."""
    if m < 0:
        raise UnsupportedShift("shift must be a nonnegative integer")

    def alpha(n: int, order: int) -> TSeries:
        return TSeries.term(-1 if n % 2 else 1, n * (n - 1), order)

    def beta(n: int, order: int) -> TSeries:
        if m + 2 * n < 0 or n > 0:
            return TSeries.zero(order)
        f = poch(mono(1, 2), m, order=order)
        f = f * qbinom(m + n, m + 2 * n, 2, order)
        return f.shift(-1 if n % 2 else 1, n * (n - 1))

    return BaileyPair(m, 2, alpha, beta, -(m // 2))


def unit_pair(m: int) -> BaileyPair:
    """The classical unit pair: beta_n = delta_{n,0}.  At m = 0 it is
    realized as shifted_pair(0); at m = 1 as the closed alpha with the
    (1 - q^{2n+1})/(1 - q) factor."""
    if m == 0:
        return shifted_pair(0)
    if m != 1:
        raise UnsupportedShift("unit pair is only defined for m in {0, 1}")

    def alpha(n: int, order: int) -> TSeries:
        if n < 0:
            return TSeries.zero(order)
        f = TSeries.term(-1 if n % 2 else 1, n * (n - 1), order)
        return f.mul_one_minus(1, 4 * n + 2).div_one_minus(1, 2)

    def beta(n: int, order: int) -> TSeries:
        return TSeries.one(order) if n == 0 else TSeries.zero(order)

    return BaileyPair(1, 2, alpha, beta, 0)


# ---------------------------------------------------------------------------
# Relation checks
# ---------------------------------------------------------------------------


def check_pair(
    p: BaileyPair, n_lo: Optional[int] = None, n_hi: Optional[int] = None, order: int = 60
) -> CheckReport:
    """Recompute the defining sum over r in [-m-n, n] and compare with beta_n.

    The default range n in [-m-2, m+4] covers the support boundary
    2n + m = 0 on both sides."""
    b = p.base_texp
    m = p.m
    n_lo = -m - 2 if n_lo is None else n_lo
    n_hi = m + 4 if n_hi is None else n_hi
    fq = PochFamily(Monomial(1, b), order, base_texp=b)
    faq = PochFamily(Monomial(1, b * (m + 1)), order, base_texp=b)
    report = CheckReport()
    for n in range(n_lo, n_hi + 1):
        rhs = TSeries.zero(order)
        for r in range(-m - n, n + 1):
            term = p.alpha(r, order) * fq.recip_at(n - r)
            term = term * faq.recip_at(n + r)
            rhs = rhs + term
        lhs = p.beta(n, order)
        bad = eq_up_to(lhs, rhs, order)
        if bad is None:
            report.entries.append(CheckEntry(n, "pass"))
        else:
            report.entries.append(CheckEntry(n, "fail", bad))
    return report


def check_wp_pair(
    p: WPBaileyPair, n_lo: Optional[int] = None, n_hi: Optional[int] = None, order: int = 60
) -> CheckReport:
    """check_pair with the well-poised kernel."""
    m = p.m
    al = p.alpha_param
    n_lo = -m - 2 if n_lo is None else n_lo
    n_hi = m + 4 if n_hi is None else n_hi
    fq = PochFamily(Monomial(1, 2), order)
    faq = PochFamily(Monomial(1, 2 * (m + 1)), order)
    fal = PochFamily(al, order)
    f_ala = PochFamily(Monomial(al.coeff, al.texp - 2 * m) if not al.is_zero() else al, order)
    report = CheckReport()
    for n in range(n_lo, n_hi + 1):
        rhs = TSeries.zero(order)
        for r in range(-m - n, n + 1):
            term = p.alpha(r, order) * f_ala.at(n - r)
            term = term * fal.at(n + r)
            term = term * fq.recip_at(n - r)
            term = term * faq.recip_at(n + r)
            rhs = rhs + term
        lhs = p.beta(n, order)
        bad = eq_up_to(lhs, rhs, order)
        report.entries.append(
            CheckEntry(n, "pass") if bad is None else CheckEntry(n, "fail", bad)
        )
    return report


# ---------------------------------------------------------------------------
# Transforms (classical / bilateral)
# ---------------------------------------------------------------------------


def _fam_cache():
    cache: dict = {}

    def get(value: Monomial, order: int, base_texp: int) -> PochFamily:
        key = (value, order, base_texp)
        fam = cache.get(key)
        if fam is None:
            fam = cache[key] = PochFamily(value, order, base_texp=base_texp)
        return fam

    return get


def apply_lemma(p: BaileyPair, rho1: Monomial, rho2: Monomial) -> BaileyPair:
    """The bilateral lemma transform with free parameters rho1, rho2 (either
    may be INFINITY; both INFINITY coincides with apply_s1)."""
    if rho1.infinite and rho2.infinite:
        return apply_s1(p)
    if rho1.infinite:
        rho1, rho2 = rho2, rho1
    if rho2.infinite:
        return _lemma_one_inf(p, rho1)
    return _lemma_finite(p, rho1, rho2)


def _lemma_finite(p: BaileyPair, rho1: Monomial, rho2: Monomial) -> BaileyPair:
    b = p.base_texp
    m = p.m
    aq = Monomial(1, b * (m + 1))
    aq1 = aq / rho1
    aq2 = aq / rho2
    arr = aq / (rho1 * rho2)
    fams = _fam_cache()

    def alpha(n: int, order: int) -> TSeries:
        o = order + abs(n) * (abs(arr.texp) + abs(aq1.texp) + abs(aq2.texp) + 3 * b)
        f = fams(rho1, o, b).at(n) * fams(rho2, o, b).at(n)
        f = f.shift(arr.coeff ** n, arr.texp * n)
        f = f * fams(aq1, o, b).recip_at(n)
        f = f * fams(aq2, o, b).recip_at(n)
        return (f * p.alpha(n, o)).truncate(order)

    def beta(n: int, order: int) -> TSeries:
        o = order + abs(n) * (abs(arr.texp) + abs(aq1.texp) + abs(aq2.texp) + 3 * b) + b * (
            abs(p.beta_floor) * (abs(arr.texp) + 2)
        )
        f1 = fams(rho1, o, b)
        f2 = fams(rho2, o, b)
        farr = fams(arr, o, b)
        fq = fams(Monomial(1, b), o, b)
        acc = TSeries.zero(o)
        for j in range(p.beta_floor, n + 1):
            t = f1.at(j) * f2.at(j)
            t = t.shift(arr.coeff ** j, arr.texp * j)
            t = t * farr.at(n - j)
            t = t * fq.recip_at(n - j)
            acc = acc + t * p.beta(j, o)
        acc = acc * fams(aq1, o, b).recip_at(n)
        acc = acc * fams(aq2, o, b).recip_at(n)
        return acc.truncate(order)

    return BaileyPair(m, b, alpha, beta, p.beta_floor)


def _lemma_one_inf(p: BaileyPair, rho: Monomial) -> BaileyPair:
    b = p.base_texp
    m = p.m
    aq = Monomial(1, b * (m + 1))
    aqr = aq / rho
    fams = _fam_cache()

    def wfac(k: int) -> Monomial:
        # (-1)^k q^{k(k-1)/2} (aq/rho)^k
        return Monomial(
            (-1 if k % 2 else 1) * aqr.coeff ** k, b * (k * (k - 1) // 2) + aqr.texp * k
        )

    def alpha(n: int, order: int) -> TSeries:
        w = wfac(n)
        o = order + abs(n) * (abs(rho.texp) + abs(aqr.texp) + 3 * b) + max(0, -w.texp)
        f = fams(rho, o, b).at(n)
        f = f.shift(w.coeff, w.texp)
        f = f * fams(aqr, o, b).recip_at(n)
        return (f * p.alpha(n, o)).truncate(order)

    def beta(n: int, order: int) -> TSeries:
        o = order + (abs(n) + abs(p.beta_floor)) * (abs(rho.texp) + abs(aqr.texp) + 3 * b)
        fr = fams(rho, o, b)
        fq = fams(Monomial(1, b), o, b)
        acc = TSeries.zero(o)
        for j in range(p.beta_floor, n + 1):
            w = wfac(j)
            t = fr.at(j).shift(w.coeff, w.texp)
            t = t * fq.recip_at(n - j)
            acc = acc + t * p.beta(j, o)
        acc = acc * fams(aqr, o, b).recip_at(n)
        return acc.truncate(order)

    return BaileyPair(m, b, alpha, beta, p.beta_floor)


def apply_s1(p: BaileyPair) -> BaileyPair:
    """rho1, rho2 -> infinity: alpha'_n = q^{n^2} a^n alpha_n."""
    b = p.base_texp
    m = p.m
    fams = _fam_cache()

    def alpha(n: int, order: int) -> TSeries:
        e = b * (n * n + m * n)
        return p.alpha(n, order + max(0, -e)).shift(1, e).truncate(order)

    def beta(n: int, order: int) -> TSeries:
        o = order + b * abs(p.beta_floor) * (abs(m) + abs(p.beta_floor))
        fq = fams(Monomial(1, b), o, b)
        acc = TSeries.zero(o)
        for j in range(p.beta_floor, n + 1):
            t = p.beta(j, o).shift(1, b * (j * j + m * j))
            acc = acc + t * fq.recip_at(n - j)
        return acc.truncate(order)

    return BaileyPair(m, b, alpha, beta, p.beta_floor)


def apply_s2(p: BaileyPair) -> BaileyPair:
    """rho1 = -sqrt(aq), rho2 -> infinity: alpha'_n = q^{n^2/2} a^{n/2} alpha_n.

    Requires base_texp*(m+1) even so that sqrt(aq) lives on the t-grid."""
    b = p.base_texp
    m = p.m
    if (b * (m + 1)) % 2:
        raise UnsupportedShift("sqrt(aq) is off the t-grid for this pair")
    s = (b * (m + 1)) // 2
    w = Monomial(-1, s)  # -sqrt(aq)
    fams = _fam_cache()

    def halfexp(n: int) -> int:
        # t-exponent of q^{n^2/2} a^{n/2}
        return (b * (n * n + m * n)) // 2

    def alpha(n: int, order: int) -> TSeries:
        e = halfexp(n)
        return p.alpha(n, order + max(0, -e)).shift(1, e).truncate(order)

    def beta(n: int, order: int) -> TSeries:
        o = order + b * abs(p.beta_floor) * (abs(m) + abs(p.beta_floor)) + s * (abs(n) + 2)
        fw = fams(w, o, b)
        fq = fams(Monomial(1, b), o, b)
        acc = TSeries.zero(o)
        for j in range(p.beta_floor, n + 1):
            t = p.beta(j, o).shift(1, halfexp(j))
            t = t * fw.at(j)
            t = t * fq.recip_at(n - j)
            acc = acc + t
        acc = acc * fw.recip_at(n)
        return acc.truncate(order)

    return BaileyPair(m, b, alpha, beta, p.beta_floor)


def pair_scale_base(p: BaileyPair, k: int) -> BaileyPair:
    """Substitute t -> t^k in both generators (the (a^k, q^k) version of p)."""

    def alpha(n: int, order: int) -> TSeries:
        return p.alpha(n, order // k).scale_base(k, order)

    def beta(n: int, order: int) -> TSeries:
        return p.beta(n, order // k).scale_base(k, order)

    return BaileyPair(p.m, p.base_texp * k, alpha, beta, p.beta_floor)


def change_base(p: BaileyPair, b_param: Monomial) -> BaileyPair:
    """Base-halving transform: the input pair is related to (a^2, q^2)
    (base_texp doubled, e.g. via pair_scale_base); the output is related to
    (a, q).  b_param may be INFINITY."""
    B = p.base_texp
    if B % 2:
        raise UnsupportedShift("input pair must live in a doubled base")
    h = B // 2
    m = p.m
    fams = _fam_cache()
    naq = Monomial(-1, h * (m + 1))  # -aq in the output base

    if b_param.infinite:

        def alpha(n: int, order: int) -> TSeries:
            return p.alpha(n, order)

        def beta(n: int, order: int) -> TSeries:
            o = order + 2 * h * (abs(p.beta_floor) + 1) * (m + abs(p.beta_floor) + 2)
            fnaq = fams(naq, o, h)
            fq2 = fams(Monomial(1, B), o, B)
            acc = TSeries.zero(o)
            for j in range(p.beta_floor, n + 1):
                t = fnaq.at(2 * j).shift(1, h * (n - j))
                t = t * fq2.recip_at(n - j)
                acc = acc + t * p.beta(j, o)
            return acc.truncate(order)

        return BaileyPair(m, h, alpha, beta, p.beta_floor)

    bb = b_param
    nab = naq / bb  # -aq/b

    def alpha(n: int, order: int) -> TSeries:
        e = -bb.texp * n - h * (n * (n - 1) // 2)
        o = order + abs(n) * (abs(bb.texp) + abs(nab.texp) + 3 * h) + max(0, -e)
        f = fams(-bb, o, h).at(n)
        f = f.shift(bb.coeff ** (-n), e)
        f = f * fams(nab, o, h).recip_at(n)
        return (f * p.alpha(n, o)).truncate(order)

    def beta(n: int, order: int) -> TSeries:
        depth = (abs(n) + abs(p.beta_floor) + 2) * (abs(bb.texp) + 2 * h * (m + 2))
        o = order + depth
        fnaq = fams(naq, o, h)
        fb2 = fams(bb * bb, o, B)
        fq2 = fams(Monomial(1, B), o, B)
        acc = TSeries.zero(o)
        for j in range(p.beta_floor, n + 1):
            t = fnaq.at(2 * j) * fb2.at(j)
            qmj = Monomial(1 / bb.coeff, -h * j - bb.texp)  # q^{-j}/b
            bqj = Monomial(bb.coeff, bb.texp + h * (j + 1))  # b q^{j+1}
            t = t * poch(qmj, n - j, base_texp=h, order=o)
            t = t * poch(bqj, n - j, base_texp=h, order=o)
            t = t * fq2.recip_at(n - j)
            t = t.shift(bb.coeff ** (-j), -bb.texp * j - h * (j * (j - 1) // 2))
            acc = acc + t * p.beta(j, o)
        acc = acc * fams(bb, o, h).recip_at(n)
        acc = acc * fams(nab, o, h).recip_at(n)
        return acc.truncate(order)

    return BaileyPair(m, h, alpha, beta, p.beta_floor)


# ---------------------------------------------------------------------------
# Well-poised pairs
# ---------------------------------------------------------------------------


def _wp_guard_param(alpha: Monomial, *, allow_zero: bool = False) -> None:
    if alpha.infinite:
        raise DegenerateParameter("INFINITY is not admissible here")
    if alpha.is_zero() and not allow_zero:
        raise DegenerateParameter("parameter must be a nonzero monomial")


def wp_unit_pair(m: int, alpha: Monomial) -> WPBaileyPair:
    """Unit well-poised pair at a = q^m: beta_n = delta_{n,0}, alpha from the
    matrix inversion of the defining relation (the a = 1 case is the usual
    limit form)."""
    if m < 0:
        raise UnsupportedShift("shift must be a nonnegative integer")
    _wp_guard_param(alpha)
    inv_alpha = Monomial(1, 0) / alpha
    aoalpha = Monomial(1, 2 * m) / alpha  # a/alpha
    alq = Monomial(alpha.coeff, alpha.texp + 2)  # alpha*q
    al_shift = Monomial(alpha.coeff, alpha.texp - 2 * m)  # alpha*q^{-m}

    def alpha_fn(n: int, order: int) -> TSeries:
        if n < 0:
            return TSeries.zero(order)
        if n == 0:
            return TSeries.one(order)
        e = al_shift.texp * n
        o = order + abs(e) + 4 * n + 4 * m + 4
        if m == 0:
            f = poch(inv_alpha, n, order=o)
            f = f.shift(alpha.coeff ** n, alpha.texp * n)
            f = f * poch(alq, n, order=o).inv()
            f = f.mul_one_minus(-1, 2 * n)  # (1 + q^n)
            return f.truncate(order)
        f = poch(Monomial(1, 2 * m), n, order=o)
        f = f * poch(aoalpha, n, order=o)
        f = f.shift(al_shift.coeff ** n, e)
        f = f * poch_recip(Monomial(1, 2), n, order=o)
        f = f * poch(alq, n, order=o).inv()
        f = f.mul_one_minus(1, 2 * m + 4 * n).div_one_minus(1, 2 * m)
        return f.truncate(order)

    def beta_fn(n: int, order: int) -> TSeries:
        return TSeries.one(order) if n == 0 else TSeries.zero(order)

    return WPBaileyPair(m, alpha, alpha_fn, beta_fn, 0)


def wp_shifted_pair(m: int, alpha: Monomial) -> WPBaileyPair:
    """Closed-form well-poised shifted pair at a = q^m with parameter alpha:

        alpha_n = (q^m/alpha)_n / (alpha q^{-m})_n * (alpha q^{-m})^n
        beta_n  = (q)_m (q/alpha)_{m-n} (alpha^2 q^{-2m})_{m+2n}
                  / ((q/alpha, alpha q^{-m})_m (alpha q^{1-m})_{m+n})
                  * [m+n, m+2n]_q * (q^m/alpha)^n
    """
    if m < 0:
        raise UnsupportedShift("shift must be a nonnegative integer")
    _wp_guard_param(alpha)
    qm_over = Monomial(1, 2 * m) / alpha          # q^m / alpha
    al_dn = Monomial(alpha.coeff, alpha.texp - 2 * m)   # alpha q^{-m}
    q_over = Monomial(1, 2) / alpha               # q / alpha
    al2 = Monomial(alpha.coeff ** 2, 2 * alpha.texp - 4 * m)  # alpha^2 q^{-2m}
    al_up = Monomial(alpha.coeff, alpha.texp + 2 - 2 * m)     # alpha q^{1-m}
    fams = _fam_cache()

    def alpha_fn(n: int, order: int) -> TSeries:
        e = al_dn.texp * n
        o = order + abs(n) * (abs(qm_over.texp) + abs(al_dn.texp) + 6) + abs(e)
        f = fams(qm_over, o, 2).at(n)
        f = f * fams(al_dn, o, 2).recip_at(n)
        return f.shift(al_dn.coeff ** n, e).truncate(order)

    def beta_fn(n: int, order: int) -> TSeries:
        if m + 2 * n < 0 or n > 0:
            return TSeries.zero(order)
        e = qm_over.texp * n
        o = order + abs(e) + 2 * m * (abs(alpha.texp) + 4) + 8
        f = poch(Monomial(1, 2), m, order=o)
        f = f * poch(q_over, m - n, order=o)
        f = f * poch(al2, m + 2 * n, order=o)
        f = f * qbinom(m + n, m + 2 * n, 2, o)
        den = poch(q_over, m, order=o) * poch(al_dn, m, order=o)
        den = den * poch(al_up, m + n, order=o)
        f = f * den.inv()
        return f.shift(qm_over.coeff ** n, e).truncate(order)

    return WPBaileyPair(m, alpha, alpha_fn, beta_fn, -(m // 2))


def wp_shifted_family(m: int) -> Callable[[Monomial], WPBaileyPair]:
    """The Prop-style shifted family as a function of the well-poised
    parameter; at parameter 0 it degenerates to the classical shifted pair
    (embedded with alpha_param = 0)."""

    def family(alpha: Monomial) -> WPBaileyPair:
        if alpha.is_zero():
            base = shifted_pair(m)
            return WPBaileyPair(
                m, Monomial(0), base._alpha_fn, base._beta_fn, base.beta_floor
            )
        return wp_shifted_pair(m, alpha)

    return family


def _vwp(f: TSeries, c: Monomial, k: int) -> TSeries:
    """Multiply by (1 - c q^{2k})/(1 - c); identity when c = 0."""
    if c.is_zero():
        return f
    return f.mul_one_minus(c.coeff, c.texp + 4 * k).div_one_minus(c.coeff, c.texp)


def wp_lemma_first(
    family: Callable[[Monomial], WPBaileyPair],
    m: int,
    rho1: Monomial,
    rho2: Monomial,
    alpha: Monomial,
) -> WPBaileyPair:
    """First well-poised lemma transform: evaluates the input family at
    c = alpha*rho1*rho2/(a q) and produces a pair at parameter alpha.  At
    alpha = 0 this reduces to the bilateral lemma transform."""
    _wp_guard_param(rho1)
    _wp_guard_param(rho2)
    if alpha.infinite:
        raise DegenerateParameter("INFINITY target parameter")
    aq = Monomial(1, 2 * (m + 1))
    c = alpha * rho1 * rho2 / aq
    pc = family(c)
    if pc.m != m:
        raise DegenerateParameter("family shift does not match m")
    aoc = aq / (rho1 * rho2)  # alpha/c, symbolically
    aq1 = aq / rho1
    aq2 = aq / rho2
    a = Monomial(1, 2 * m)
    ar1 = alpha * rho1 / a
    ar2 = alpha * rho2 / a
    qc = Monomial(c.coeff, c.texp + 2) if not c.is_zero() else c
    fams = _fam_cache()

    def alpha_fn(n: int, order: int) -> TSeries:
        o = order + abs(n) * (
            abs(aoc.texp) + abs(aq1.texp) + abs(aq2.texp) + abs(rho1.texp) + abs(rho2.texp) + 8
        )
        f = fams(rho1, o, 2).at(n) * fams(rho2, o, 2).at(n)
        f = f.shift(aoc.coeff ** n, aoc.texp * n)
        f = f * fams(aq1, o, 2).recip_at(n)
        f = f * fams(aq2, o, 2).recip_at(n)
        return (f * pc.alpha(n, o)).truncate(order)

    def beta_fn(n: int, order: int) -> TSeries:
        span = abs(n) + abs(pc.beta_floor) + 2
        o = order + span * (
            abs(aoc.texp) + abs(ar1.texp) + abs(ar2.texp) + abs(c.texp if not c.is_zero() else 0) + 10
        )
        f1 = fams(rho1, o, 2)
        f2 = fams(rho2, o, 2)
        fa1 = fams(ar1, o, 2)
        fa2 = fams(ar2, o, 2)
        faoc = fams(aoc, o, 2)
        fal = fams(alpha, o, 2)
        fqc = fams(qc, o, 2)
        fq = fams(Monomial(1, 2), o, 2)
        acc = TSeries.zero(o)
        for j in range(pc.beta_floor, n + 1):
            t = f1.at(j) * f2.at(j)
            t = t * fa1.recip_at(j)
            t = t * fa2.recip_at(j)
            t = _vwp(t, c, j)
            t = t * faoc.at(n - j)
            t = t * fal.at(n + j)
            t = t * fq.recip_at(n - j)
            t = t * fqc.recip_at(n + j)
            t = t.shift(aoc.coeff ** j, aoc.texp * j)
            acc = acc + t * pc.beta(j, o)
        acc = acc * fa1.at(n) * fa2.at(n)
        acc = acc * fams(aq1, o, 2).recip_at(n)
        acc = acc * fams(aq2, o, 2).recip_at(n)
        return acc.truncate(order)

    return WPBaileyPair(m, alpha, alpha_fn, beta_fn, pc.beta_floor)


def wp_lemma_second(
    family: Callable[[Monomial], WPBaileyPair], m: int, alpha: Monomial
) -> WPBaileyPair:
    """Second well-poised lemma transform: evaluates the family at
    q a^2/alpha and produces a pair at parameter alpha.  The construction's
    convergence condition reads val(alpha^2/(q a^2)) >= 1 on the t-grid."""
    _wp_guard_param(alpha)
    if 2 * alpha.texp - 2 - 4 * m < 1:
        raise FormalDivergence(
            "target parameter valuation too low for the second construction"
        )
    qa2 = Monomial(1, 2 + 4 * m)
    c2 = qa2 / alpha
    pc = family(c2)
    if pc.m != m:
        raise DegenerateParameter("family shift does not match m")
    r = alpha * alpha / qa2  # alpha^2 / (q a^2)
    fams = _fam_cache()

    def alpha_fn(n: int, order: int) -> TSeries:
        o = order + abs(n) * (abs(c2.texp) + abs(alpha.texp) + abs(r.texp) + 8)
        f = fams(c2, o, 2).at(2 * n)
        f = f * fams(alpha, o, 2).recip_at(2 * n)
        f = f.shift(r.coeff ** n, r.texp * n)
        return (f * pc.alpha(n, o)).truncate(order)

    def beta_fn(n: int, order: int) -> TSeries:
        span = abs(n) + abs(pc.beta_floor) + 2
        o = order + span * (abs(r.texp) + 6)
        fr = fams(r, o, 2)
        fq = fams(Monomial(1, 2), o, 2)
        acc = TSeries.zero(o)
        for j in range(pc.beta_floor, n + 1):
            t = fr.at(n - j) * fq.recip_at(n - j)
            t = t.shift(r.coeff ** j, r.texp * j)
            acc = acc + t * pc.beta(j, o)
        return acc.truncate(order)

    return WPBaileyPair(m, alpha, alpha_fn, beta_fn, pc.beta_floor)


# ---------------------------------------------------------------------------
# Inversions
# ---------------------------------------------------------------------------


def _inversion_G(m: int, n: int, r: int, order: int) -> TSeries:
    """The a-dependent part (1 - a q^{2n}) (a)_{n+r} / (1 - a) of the
    inversion kernel, evaluated at a = q^m with the cancellation between the
    numerator and the reciprocal product carried out symbolically before
    specializing.  Raises ZeroSeriesInversion where the specialization has a
    genuine pole."""
    k = n + r
    if m == 0:
        # limit a -> 1
        if k >= 1:
            return poch(Monomial(1, 2), k - 1, order=order).mul_one_minus(1, 4 * n)
        if n == 0:
            # (1 - a)/(1 - a) cancels; (1)_k = 1/prod_{i=1..-k}(1 - q^{-i})
            f = TSeries.one(order)
            for i in range(1, -k + 1):
                f = f.mul_one_minus(1, -2 * i)
            return f.inv().truncate(order)
        raise ZeroSeriesInversion("inversion kernel degenerates at a = 1")
    if k >= 0:
        f = poch(Monomial(1, 2 * m), k, order=order)
        return f.mul_one_minus(1, 2 * m + 4 * n).div_one_minus(1, 2 * m)
    kk = -k
    cancel = -2 * n if (n < 0 and 1 <= -2 * n <= kk) else None
    if any(i == m for i in range(1, kk + 1) if i != cancel):
        raise ZeroSeriesInversion("inversion kernel has a pole at a = q^m")
    pad = sum(max(0, 2 * (i - m)) for i in range(1, kk + 1) if i != cancel)
    den = TSeries.one(order + pad)
    for i in range(1, kk + 1):
        if i != cancel:
            den = den.mul_one_minus(1, 2 * (m - i))
    f = den.inv().truncate(order)
    if cancel is None:
        f = f.mul_one_minus(1, 2 * m + 4 * n)
    return f.div_one_minus(1, 2 * m)


def wp_inversion_check(p: WPBaileyPair, n_lo: int, n_hi: int, order: int) -> CheckReport:
    """Round-trip the pair through the matrix-inversion kernel.

    For each n, alpha is first reconstructed from beta.  When the
    reconstruction reproduces p.alpha(n) exactly the entry passes as
    "pass"; otherwise the mutual-inverse composition is verified instead:
    pushing the reconstructed alpha back through the defining relation must
    reproduce beta_n ("composed").  At a = q^m the exact direction is only
    attainable for pairs whose alpha is supported above the beta floor (the
    unit family); the composition is the inversion content that survives
    specialization.  Kernel poles at a = q^m are reported as skipped."""
    m = p.m
    al = p.alpha_param
    a = Monomial(1, 2 * m)
    report = CheckReport()
    fq = PochFamily(Monomial(1, 2), order)
    falq = PochFamily(
        Monomial(al.coeff, al.texp + 2) if not al.is_zero() else al, order
    )
    aoal = (a / al) if not al.is_zero() else Monomial(0)

    def reconstruct(n: int):
        acc = TSeries.zero(order)
        for rr in range(p.beta_floor, n + 1):
            br = p.beta(rr, order)
            if br.is_zero():
                continue
            t = _inversion_G(m, n, rr, order)
            t = t * fq.recip_at(n - rr)
            if al.is_zero():
                t = t.shift(-1 if (n - rr) % 2 else 1, (n - rr) * (n - rr - 1))
            else:
                t = t * poch(aoal, n - rr, order=order)
                t = t * falq.recip_at(n + rr)
                t = _vwp(t, al, rr)
                w = (al / a) ** (n - rr)
                t = t.shift(w.coeff, w.texp)
            acc = acc + t * br
        return acc.truncate(order)

    abar: dict = {}
    degenerate: set = set()
    for n in range(p.beta_floor, n_hi + 1):
        try:
            abar[n] = reconstruct(n)
        except ZeroSeriesInversion:
            degenerate.add(n)

    # relation kernel for the composed check
    faq = PochFamily(Monomial(1, 2 * (m + 1)), order)
    fal = PochFamily(al, order)
    fala = PochFamily(
        Monomial(al.coeff, al.texp - 2 * m) if not al.is_zero() else al, order
    )

    def beta_from_abar(n: int):
        acc = TSeries.zero(order)
        for rr in range(max(-m - n, p.beta_floor), n + 1):
            ab = abar.get(rr)
            if ab is None:
                raise ZeroSeriesInversion("degenerate reconstruction feeds the composition")
            t = ab * fala.at(n - rr) * fal.at(n + rr)
            t = t * fq.recip_at(n - rr) * faq.recip_at(n + rr)
            acc = acc + t
        return acc.truncate(order)

    for n in range(n_lo, n_hi + 1):
        if n < p.beta_floor:
            if p.alpha(n, order).is_zero():
                report.entries.append(CheckEntry(n, "pass"))
            else:
                report.entries.append(
                    CheckEntry(n, "skipped", reason="alpha not reconstructible below beta support")
                )
            continue
        if n in degenerate:
            report.entries.append(
                CheckEntry(n, "skipped", reason="kernel degenerates at a = q^m")
            )
            continue
        bad = eq_up_to(abar[n], p.alpha(n, order), order)
        if bad is None:
            report.entries.append(CheckEntry(n, "pass"))
            continue
        try:
            comp = beta_from_abar(n)
        except ZeroSeriesInversion:
            report.entries.append(
                CheckEntry(n, "skipped", reason="composition blocked by degenerate kernel")
            )
            continue
        bad2 = eq_up_to(comp, p.beta(n, order), order)
        if bad2 is None:
            report.entries.append(CheckEntry(n, "composed"))
        else:
            report.entries.append(CheckEntry(n, "fail", bad))
    return report


def classical_inversion_check(
    a_seq: Callable[[int, int], TSeries],
    b_seq: Callable[[int, int], TSeries],
    m_max: int,
    order: int,
) -> CheckReport:
    """Verify that the sequences are a classical inversion pair:

        b_m = sum_{j<=m} a_j / ((q)_{m-j} (q^2)_{m+j})
        a_m = (1-q^{2m+1})/(1-q) * sum_{j<=m} (-1)^{m-j} q^{C(m-j,2)}
              (q)_{m+j}/(q)_{m-j} * b_j
    """
    fq = PochFamily(Monomial(1, 2), order)
    fq2 = PochFamily(Monomial(1, 4), order)
    report = CheckReport()
    for mm in range(m_max + 1):
        acc = TSeries.zero(order)
        for j in range(mm + 1):
            acc = acc + a_seq(j, order) * fq.recip_at(mm - j) * fq2.recip_at(mm + j)
        bad = eq_up_to(acc, b_seq(mm, order), order)
        report.entries.append(
            CheckEntry(mm, "pass") if bad is None else CheckEntry(mm, "fail", bad)
        )
        acc = TSeries.zero(order)
        for j in range(mm + 1):
            d = mm - j
            t = b_seq(j, order) * fq.at(mm + j) * fq.recip_at(d)
            t = t.shift(-1 if d % 2 else 1, d * (d - 1))
            acc = acc + t
        acc = acc.mul_one_minus(1, 4 * mm + 2).div_one_minus(1, 2)
        bad = eq_up_to(acc, a_seq(mm, order), order)
        report.entries.append(
            CheckEntry(-(mm + 1), "pass" if bad is None else "fail", bad)
        )
    return report
