"""Acceptance suite: one test per criterion, each printing a pass/fail line.

All comparisons are exact (tolerance zero); orders are t-units (twice the
whole-q order).  Criteria run in declaration order and record their passing
instances so the final robustness criterion can re-evaluate every one of
them with doubled windows and reversed summation order.  Run with
`pytest tests/test_acceptance.py -s` to see the per-criterion lines.
"""

import time

import pytest

from baileykit.bailey import (
    apply_lemma,
    apply_s1,
    apply_s2,
    change_base,
    check_pair,
    check_wp_pair,
    pair_scale_base,
    shifted_pair,
    wp_inversion_check,
    wp_lemma_first,
    wp_shifted_family,
    wp_shifted_pair,
    wp_unit_pair,
)
from baileykit.corpus import (
    CORPUS,
    EvalConfig,
    IdentityDef,
    ParamSpec,
    build_sides,
    degeneration_suite,
    make_instance,
    verify,
)
from baileykit.oracle import PartitionSpec, count_partitions, resummation_check
from baileykit.series import INFINITY, Monomial, eq_up_to, mono, qmono, rat

PASSING = []


def _announce(tag, t0, ok=True, extra=""):
    dt = time.perf_counter() - t0
    line = f"{tag}: {'PASS' if ok else 'FAIL'} ({dt:.1f} s){'  ' + extra if extra else ''}"
    print(line)
    assert ok, line


def _verified(def_id, bindings, order):
    inst = make_instance(def_id, bindings, order)
    rep = verify(inst)
    assert rep.status == "pass", (
        def_id, bindings, order, rep.status, rep.first_mismatch_texp, rep.message
    )
    PASSING.append(inst)
    return rep


def test_criterion_01_polynomial_identities():
    t0 = time.perf_counter()
    for m in range(0, 41):
        _verified("K1MRR", {"m": m}, 20)
    for m in range(0, 31):
        _verified("K1MGG_EVEN", {"m": m}, 20)
        _verified("K1MGG_ODD", {"m": m}, 20)
    _announce("ACCEPT-01 polynomial identities (m<=40 / m<=30, zero branches included)", t0)
    assert time.perf_counter() - t0 < 50


def test_criterion_02_kmrr_grid_and_partition_oracle():
    t0 = time.perf_counter()
    for k in (1, 2, 3):
        for m in range(0, 7):
            _verified("KMRR", {"k": k, "m": m}, 120)
    cfg = EvalConfig()
    for (k, m), rid in ((	(2, 0)), "RR1"), (((2, 1)), "RR2"):
        la, ra = build_sides(make_instance("KMRR", {"k": k, "m": m}, 120), cfg)
        lb, rb = build_sides(make_instance(rid, {}, 120), cfg)
        assert eq_up_to(la, lb) is None and eq_up_to(ra, rb) is None
    for rid, residues in (("RR1", (1, 4)), ("RR2", (2, 3))):
        rep = _verified(rid, {}, 120)
        _, rhs = build_sides(rep.instance, cfg)
        counts = count_partitions(PartitionSpec(lambda p, rr=residues: p % 5 in rr), 60)
        assert all(rhs.coeff(2 * n) == counts[n] for n in range(61))
    _announce("ACCEPT-02 KMRR grid (k<=3, m<=6, q-order 60) + RR reductions + partition oracle", t0)
    assert time.perf_counter() - t0 < 300


def test_criterion_03_kmgg_grid():
    t0 = time.perf_counter()
    for k in (1, 2):
        for m in range(0, 7):
            _verified("KMGG", {"k": k, "m": m}, 120)
    _announce("ACCEPT-03 KMGG grid (k<=2, m<=6, t-order 120)", t0)


def test_criterion_04_products_and_inversions():
    t0 = time.perf_counter()
    for rid in ("MRR", "MGG", "GIS"):
        for m in range(0, 9):
            _verified(rid, {"m": m}, 120)
    for k in (1, 2, 3):
        for m in range(0, 6):
            _verified("KMRR_INV", {"k": k, "m": m}, 80)
            _verified("KMRR_CHANGE", {"k": k, "m": m}, 80)
            _verified("KMGG_INV", {"k": k, "m": m}, 80)
    for k in (2, 3, 4):
        for m in range(0, 9):
            _verified("K2MRR", {"k": k, "m": m}, 60 if k == 4 else 80)
        for m in range(1, k):
            _verified("LHS_FULL_AG", {"k": k, "m": m}, 80)
    _announce("ACCEPT-04 MRR/MGG/GIS (m<=8) + inverted/even-modulus/re-centered families", t0)


def test_criterion_05_pair_relation_suite():
    t0 = time.perf_counter()
    order = 80  # q-order 40
    for m in range(0, 9):
        assert check_pair(shifted_pair(m), -6, 8, order).passed, m
    rhos = [(qmono(2, 1), qmono(3, 1)), (INFINITY, INFINITY), (qmono(2, 1), INFINITY)]
    for m in range(0, 9):
        p = shifted_pair(m)
        for r1, r2 in rhos:
            assert check_pair(apply_lemma(p, r1, r2), -6, 8, order).passed, (m, r1, r2)
        assert check_pair(apply_s1(p), -6, 8, order).passed, m
        assert check_pair(apply_s2(p), -6, 8, order).passed, m
        doubled = pair_scale_base(p, 2)
        assert check_pair(change_base(doubled, INFINITY), -6, 8, order).passed, m
        assert check_pair(change_base(doubled, qmono(2, 1)), -6, 8, order).passed, m
    _announce("ACCEPT-05 defining-relation suite: shifted pairs m<=8 and all transforms, n in [-6,8]", t0)


def test_criterion_06_wp_suite():
    t0 = time.perf_counter()
    order = 60  # q-order 30
    alphas = (qmono(2, 2), qmono(3, 3), Monomial(rat(5, 2), 8))
    for m in range(0, 4):
        for al in alphas:
            assert check_wp_pair(wp_unit_pair(m, al), -4, 4, order).passed, (m, al)
            assert check_wp_pair(wp_shifted_pair(m, al), -4, 4, order).passed, (m, al)
            rep = wp_inversion_check(wp_unit_pair(m, al), -4, 4, order)
            assert rep.passed and all(e.status in ("pass", "skipped") for e in rep.entries)
            rep = wp_inversion_check(wp_shifted_pair(m, al), -4, 4, order)
            assert rep.passed, (m, al)
    for m in range(0, 4):
        fam = wp_shifted_family(m)
        W = wp_lemma_first(fam, m, qmono(2, 1), qmono(3, 1), Monomial(0))
        C = apply_lemma(shifted_pair(m), qmono(2, 1), qmono(3, 1))
        for n in range(-3, 4):
            assert eq_up_to(W.alpha(n, 60), C.alpha(n, 60)) is None, (m, n)
            assert eq_up_to(W.beta(n, 60), C.beta(n, 60)) is None, (m, n)
        hi = wp_shifted_pair(m, qmono(1, 50))
        sp = shifted_pair(m)
        for n in range(-2, 3):
            assert eq_up_to(hi.beta(n, 80), sp.beta(n, 80)) is None, (m, n)
    _announce("ACCEPT-06 well-poised suite: relations, inversion round-trips, degenerations", t0)


T8_ASSIGNMENTS = [
    lambda m: {"m": m, "rho1": qmono(2, 1), "rho2": qmono(3, 1), "mu1": mono(2),
               "mu2": mono(3), "alpha": qmono(2, m + 1)},
    lambda m: {"m": m, "rho1": qmono(3, 1), "rho2": qmono(5, 2), "mu1": Monomial(rat(5, 2)),
               "mu2": mono(2), "alpha": qmono(3, m + 2)},
    lambda m: {"m": m, "rho1": qmono(-2, 1), "rho2": qmono(3, 1), "mu1": mono(3),
               "mu2": mono(-2), "alpha": Monomial(rat(5, 2), 2 * (m + 1))},
]

PSI_ASSIGNMENTS = {
    "R1PSI1": [
        {"b": mono(2), "c": qmono(2, 2), "z": qmono(1, 1)},
        {"b": qmono(2, 1), "c": qmono(2, 3), "z": qmono(1, 1)},
        {"b": mono(3), "c": qmono(3, 3), "z": qmono(1, 1)},
    ],
    "B6PSI6": [
        {"a": qmono(2, 2), "b": qmono(2, 1), "c": qmono(3, 1), "d": qmono(5, 1), "e": qmono(7, 1)},
        {"a": qmono(3, 2), "b": qmono(2, 1), "c": qmono(-2, 1), "d": Monomial(rat(5, 2), 2), "e": qmono(3, 1)},
        {"a": qmono(1, 2), "b": qmono(2, 1), "c": qmono(3, 1), "d": qmono(5, 1), "e": qmono(7, 1)},
    ],
}


def test_criterion_07_transformation_and_degenerations():
    t0 = time.perf_counter()
    for m in (0, 1, 2):
        for make in T8_ASSIGNMENTS:
            _verified("T8PSI8", make(m), 80)
    checks = degeneration_suite(100)
    assert all(c.passed for c in checks), [(c.name, c.detail) for c in checks if not c.passed]
    for rid, assigns in PSI_ASSIGNMENTS.items():
        for a in assigns:
            _verified(rid, a, 100)
    _announce("ACCEPT-07 bilateral transformation (m<=2, 3 assignments) + degeneration routes", t0)


def test_criterion_08_bilateral_extension():
    t0 = time.perf_counter()
    assigns = [
        {"beta": mono(2), "gamma": mono(3), "rho": qmono(5, 1)},
        {"beta": mono(-2), "gamma": mono(3), "rho": qmono(2, 1)},
        {"beta": Monomial(rat(5, 2)), "gamma": mono(-2), "rho": qmono(3, 1)},
    ]
    for a in assigns:
        for m in range(0, 5):
            _verified("EXT63", {**a, "m": m}, 80)
    _announce("ACCEPT-08 bilateral extension, m<=4, three recorded assignments", t0)


def test_criterion_09_connection_coefficients():
    t0 = time.perf_counter()
    for beta, c in ((qmono(2, 1), qmono(3, 1)), (qmono(3, 2), qmono(2, 1)), (qmono(2, 1), qmono(2, 1))):
        for n in range(0, 9):
            _verified("QULTRA_CONN", {"n": n, "beta": beta, "c": c}, 80)
    _announce("ACCEPT-09 connection-coefficient identity, n<=8, three parameter pairs", t0)


def test_criterion_10_robustness():
    t0 = time.perf_counter()
    assert PASSING, "earlier criteria must have recorded instances"
    for inst in PASSING:
        rep = resummation_check(inst)
        assert rep.identical, (inst.def_id, inst.bindings, rep.detail)

    # corrupted-identity negative control: wrong modulus on the product side
    from baileykit.corpus import _check_km, _kmrr_build, _product, inv_euler, theta3

    def bad_build(b, order, cfg):
        lhs, _ = _kmrr_build(b, order, cfg)
        k, m = b["k"], b["m"]
        rhs = _product(
            [lambda o: theta3(2 * k * (m + 1), 4 * k, o), lambda o: inv_euler(o)], order
        )
        return lhs, rhs

    CORPUS["KMRR_BAD"] = IdentityDef(
        "KMRR_BAD", "series",
        (ParamSpec("k", "pos-int"), ParamSpec("m", "nonneg-int")),
        "negative control", "k >= 1", _check_km, bad_build,
    )
    try:
        rep = verify(make_instance("KMRR_BAD", {"k": 2, "m": 1}, 60))
        assert rep.status == "fail" and rep.first_mismatch_texp is not None
        assert rep.first_mismatch_texp <= 30
    finally:
        del CORPUS["KMRR_BAD"]
    _announce(
        "ACCEPT-10 robustness: doubled/reversed resummation of all passing instances + negative control",
        t0, extra=f"{len(PASSING)} instances",
    )
