from baileykit.oracle import PartitionSpec, count_partitions, pentagonal_expansion
from baileykit.qfunctions import poch_inf
from baileykit.series import TSeries, eq_up_to, qmono


def _enumerate_partitions(n, allowed, min_diff):
    # exhaustive reference used to validate the DP on small n
    found = 0

    def rec(remaining, max_part):
        nonlocal found
        if remaining == 0:
            found += 1
            return
        for p in range(min(remaining, max_part), 0, -1):
            if allowed(p):
                rec(remaining - p, p - min_diff)

    rec(n, n)
    return found


def test_count_partitions_vs_enumeration():
    specs = [
        PartitionSpec(lambda p: p % 5 in (1, 4)),
        PartitionSpec(lambda p: True),
        PartitionSpec(lambda p: True, min_difference=2),
        PartitionSpec(lambda p: p % 2 == 1, min_difference=1),
    ]
    for spec in specs:
        counts = count_partitions(spec, 10)
        for n in range(0, 11):
            assert counts[n] == _enumerate_partitions(n, spec.allowed_parts, spec.min_difference)


def test_count_partitions_examples():
    counts = count_partitions(PartitionSpec(lambda p: p % 5 in (1, 4)), 4)
    assert counts[4] == 2
    assert count_partitions(PartitionSpec(lambda p: True), 5)[5] == 7
    assert count_partitions(PartitionSpec(lambda p: False), 3)[1:] == [0, 0, 0]


def test_pentagonal_expansion():
    f = pentagonal_expansion(40)
    expected = {0: 1, 2: -1, 4: -1, 10: 1, 14: 1, 24: -1, 30: -1, 40: 1}
    for e, c in f.items():
        assert expected.get(e) == c
    assert eq_up_to(pentagonal_expansion(80), poch_inf(qmono(1, 1), 80)) is None
    assert eq_up_to(pentagonal_expansion(0), TSeries.one(0)) is None


def test_resummation_on_instances():
    from baileykit.corpus import make_instance
    from baileykit.oracle import resummation_check

    rep = resummation_check(make_instance("RR1", {}, 80))
    assert rep.identical
    rep = resummation_check(
        make_instance("QULTRA_CONN", {"n": 2, "beta": qmono(2, 1), "c": qmono(3, 1)}, 40)
    )
    assert rep.identical
