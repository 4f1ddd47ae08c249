import pytest
from hypothesis import given, strategies as st

from baileykit.errors import FormalDivergence, ZeroSeriesInversion
from baileykit.oracle import pentagonal_expansion
from baileykit.qfunctions import (
    PochFamily,
    PochhammerArg,
    SumWindow,
    TermFamily,
    poch,
    poch_inf,
    poch_inf_ext,
    poch_multi,
    poch_recip,
    qbinom,
    qpow_inf,
    sum_bilateral,
    sum_unilateral,
    triple_product,
)
from baileykit.series import Monomial, TSeries, eq_up_to, mono, qmono, rat

from conftest import monomials


def qcoeffs(f):
    return [(e, c) for e, c in f.items()]


def test_poch_direct_expansion():
    # (q)_3 = 1 - q - q^2 + q^4 + q^5 - q^6
    p = poch(qmono(1, 1), 3, order=20)
    assert qcoeffs(p) == [(0, 1), (2, -1), (4, -1), (8, 1), (10, 1), (12, -1)]
    assert eq_up_to(poch(mono(7, 5), 0, order=6), TSeries.one(6)) is None


def test_poch_negative_index():
    p = poch(mono(2), -1, order=12)
    assert qcoeffs(p) == [(2, rat(-1, 2)), (4, rat(-1, 4)), (6, rat(-1, 8)),
                          (8, rat(-1, 16)), (10, rat(-1, 32)), (12, rat(-1, 64))]
    with pytest.raises(ZeroSeriesInversion):
        poch(qmono(1, 1), -1, order=8)


@given(monomials(min_texp=1), st.integers(min_value=-6, max_value=6))
def test_poch_recurrence(a, k):
    order = 40
    lhs = poch(a, k + 1, order=order)
    rhs = poch(a, k, order=order).mul_one_minus(a.coeff, a.texp + 2 * k)
    assert eq_up_to(lhs, rhs, order - 2 * abs(a.texp + 2 * k)) is None


@given(monomials(min_texp=1), st.integers(min_value=1, max_value=6))
def test_poch_negative_reciprocal_law(a, k):
    order = 30
    lhs = poch(a, -k, order=order + 4 * k * (a.texp + 2 * k))
    shifted = Monomial(a.coeff, a.texp - 2 * k)
    prod = lhs * poch(shifted, k, order=order + 4 * k * (a.texp + 2 * k))
    assert eq_up_to(prod, TSeries.one(order), order) is None


def test_poch_inf_pentagonal():
    f = poch_inf(qmono(1, 1), 80)
    assert eq_up_to(f, pentagonal_expansion(80)) is None
    assert eq_up_to(poch_inf(Monomial(0), 10), TSeries.one(10)) is None
    with pytest.raises(FormalDivergence):
        poch_inf(mono(2), 10)


def test_poch_inf_ext_peeling():
    assert poch_inf_ext(mono(1, 0), 10).is_zero()
    assert qpow_inf(-2, 2, 10).is_zero()  # hits the exponent-0 factor
    f = poch_inf_ext(mono(rat(1, 2)), 16)
    g = poch_inf(qmono(rat(1, 2), 1), 16).scaled(rat(1, 2))
    assert eq_up_to(f, g) is None


def test_poch_multi():
    f = poch_multi([PochhammerArg(qmono(1, 1)), PochhammerArg(qmono(1, 2))], 1, order=12)
    expect = poch(qmono(1, 1), 1, order=12) * poch(qmono(1, 2), 1, order=12)
    assert eq_up_to(f, expect) is None
    assert eq_up_to(poch_multi([], 5, order=8), TSeries.one(8)) is None
    prod = poch_multi([PochhammerArg(qmono(1, 5)), PochhammerArg(qmono(1, 1))], None, order=40)
    expect = poch_inf(qmono(1, 5), 40) * poch_inf(qmono(1, 1), 40)
    assert eq_up_to(prod, expect, 40) is None


def _qbinom_pascal(n, k, order=None):
    # independent oracle: Pascal recurrence on exact coefficient lists
    if k < 0 or k > n:
        return TSeries.zero(order or 0)
    row = {(0, 0): TSeries.one(4 * n * n + 8)}
    for nn in range(1, n + 1):
        for kk in range(0, nn + 1):
            a = row.get((nn - 1, kk - 1))
            b = row.get((nn - 1, kk))
            cur = TSeries.zero(4 * n * n + 8)
            if a is not None:
                cur = cur + a
            if b is not None:
                cur = cur + b.shift(1, 2 * kk)
            row[(nn, kk)] = cur
    return row[(n, k)]


def test_qbinom_against_pascal_oracle():
    for n in range(0, 8):
        for k in range(-1, n + 2):
            got = qbinom(n, k, 2)
            want = _qbinom_pascal(n, k)
            assert eq_up_to(got, want, got.order) is None, (n, k)
    assert qcoeffs(qbinom(3, 1)) == [(0, 1), (2, 1), (4, 1)]
    assert qcoeffs(qbinom(4, 2)) == [(0, 1), (2, 1), (4, 2), (6, 1), (8, 1)]
    assert qbinom(5, -1, order=4).is_zero()


@given(st.integers(min_value=1, max_value=9), st.integers(min_value=0, max_value=9))
def test_qbinom_pascal_recurrences(n, k):
    order = 4 * n * n + 8
    lhs = qbinom(n, k, 2, order)
    r1 = qbinom(n - 1, k - 1, 2, order) + qbinom(n - 1, k, 2, order).shift(1, 2 * k)
    r2 = qbinom(n - 1, k - 1, 2, order).shift(1, 2 * (n - k)) + qbinom(n - 1, k, 2, order)
    assert eq_up_to(lhs, r1, order - 2 * n) is None
    assert eq_up_to(lhs, r2, order - 2 * n) is None


@given(st.integers(min_value=0, max_value=9), st.integers(min_value=0, max_value=9))
def test_qbinom_palindromic(n, k):
    f = qbinom(n, k, 2)
    if f.is_zero():
        return
    cs = [f.coeff(2 * i) for i in range(k * (n - k) + 1)]
    assert cs == cs[::-1]


def test_triple_product_examples():
    # (q^3, q, q^2; q^3) = (q; q)_inf
    t = triple_product(qmono(1, 1), 6, 60)
    assert eq_up_to(t, poch_inf(qmono(1, 1), 60)) is None
    with pytest.raises(FormalDivergence):
        triple_product(qmono(1, 2), 4, 20)  # val(z) = modulus


@given(monomials(min_texp=1, max_texp=1).map(lambda m: Monomial(m.coeff, 1)))
def test_jacobi_triple_product_bilateral(z):
    order = 80

    def term(n):
        w = z ** n
        return TSeries.term((-1 if n % 2 else 1) * w.coeff, w.texp + n * (n - 1), order)

    lhs = sum_bilateral(term, SumWindow(-8, 8), order)
    rhs = triple_product(z, 2, order)
    assert eq_up_to(lhs, rhs, order) is None


@given(st.integers(min_value=0, max_value=8), monomials(min_texp=-2, max_texp=6))
def test_finite_qbinom_summation(n, z):
    # sum_k (q^{-n})_k z^k / (q)_k == (z q^{-n})_n, exactly
    order = 4 * n * (abs(z.texp) + 2 * n + 2) + 20
    acc = TSeries.zero(order)
    for k in range(0, n + 1):
        f = poch(Monomial(1, -2 * n), k, order=order)
        f = f * poch_recip(qmono(1, 1), k, order=order)
        w = z ** k
        acc = acc + f.shift(w.coeff, w.texp)
    rhs = poch(Monomial(z.coeff, z.texp - 2 * n), n, order=order)
    assert eq_up_to(acc, rhs, order // 2) is None


@given(st.integers(min_value=0, max_value=6), monomials(1, 4), monomials(1, 4), monomials(1, 3))
def test_balanced_32_summation(n, a, b, c):
    # the balanced 3-term sum equals (c/a, c/b)_n / (c, c/ab)_n
    order = 8 * n * (a.texp + b.texp + c.texp + n + 2) + 40
    d2 = a * b / c * Monomial(1, 2 - 2 * n)
    acc = TSeries.zero(order)
    for k in range(0, n + 1):
        f = poch(a, k, order=order) * poch(b, k, order=order)
        f = f * poch(Monomial(1, -2 * n), k, order=order)
        f = f * poch_recip(qmono(1, 1), k, order=order)
        f = f * poch(c, k, order=order).inv()
        f = f * poch(d2, k, order=order).inv()
        acc = acc + f.shift(1, 2 * k)
    rhs = poch(c / a, n, order=order) * poch(c / b, n, order=order)
    rhs = rhs * (poch(c, n, order=order) * poch(c / (a * b), n, order=order)).inv()
    assert eq_up_to(acc, rhs, order // 3) is None


def test_sums_basic():
    order = 30
    zero = sum_unilateral(lambda n: TSeries.zero(order), SumWindow(0, 5), order)
    assert zero.is_zero()
    geo = sum_unilateral(lambda n: TSeries.term(1, 2 * n, order), SumWindow(0, 5), order)
    assert eq_up_to(geo, TSeries.one(order).div_one_minus(1, 2)) is None
    with pytest.raises(FormalDivergence):
        sum_unilateral(lambda n: TSeries.one(order), SumWindow(0, 4), order)
    # doubled window leaves coefficients unchanged
    g2 = sum_unilateral(lambda n: TSeries.term(1, 2 * n, order), SumWindow(0, 5).scaled(2), order)
    assert eq_up_to(geo, g2) is None


def test_partial_theta_sum_matches_partition_dp():
    from baileykit.oracle import PartitionSpec, count_partitions

    order = 60
    fq = PochFamily(qmono(1, 1), order)

    def term(n):
        return fq.recip_at(n).shift(1, 2 * n * n)

    s = sum_unilateral(term, SumWindow(0, 6), order)
    counts = count_partitions(PartitionSpec(lambda p: True, min_difference=2), 30)
    for n in range(0, 31):
        assert s.coeff(2 * n) == counts[n]


def test_term_family_matches_direct():
    order = 40
    b, c, z = mono(2), qmono(2, 2), qmono(1, 1)
    fam = TermFamily(order, uppers=[b], lowers=[c], z=z)
    for k in range(-5, 6):
        w = z ** k
        direct = poch(b, k, order=order + 20) * poch_recip(c, k, order=order + 20)
        direct = direct.shift(w.coeff, w.texp)
        assert eq_up_to(fam.at(k), direct, order - 2 * abs(k)) is None, k


def test_triple_product_wider_modulus_vs_bilateral_sum():
    # base q^2 with z = q: both the product and the bilateral sum directly
    order = 60
    z = qmono(1, 1)
    t = triple_product(z, 4, order)

    def term(n):
        w = z ** n
        return TSeries.term((-1 if n % 2 else 1) * w.coeff, w.texp + 2 * n * (n - 1), order)

    s = sum_bilateral(term, SumWindow(-8, 8), order)
    assert eq_up_to(t, s, order) is None
