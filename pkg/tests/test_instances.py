import pytest

from baileykit.errors import ParseError
from baileykit.instances import (
    format_instance,
    format_monomial,
    parse_instances,
    parse_monomial,
)
from baileykit.series import INFINITY, Monomial, mono, qmono, rat


def test_monomial_grammar():
    cases = {
        "2q": qmono(2, 1),
        "q": qmono(1, 1),
        "-q": qmono(-1, 1),
        "3": mono(3),
        "5/2": Monomial(rat(5, 2)),
        "5/2q^4": Monomial(rat(5, 2), 8),
        "q^(3/2)": Monomial(1, 3),
        "q^(-1/2)": Monomial(1, -1),
        "q^-2": Monomial(1, -4),
        "-2q^3": Monomial(-2, 6),
        "inf": INFINITY,
        "0": Monomial(0),
    }
    for text, want in cases.items():
        assert parse_monomial(text) == want, text
    for bad in ("", "q^", "^2", "2/", "qq", "x"):
        with pytest.raises(ValueError):
            parse_monomial(bad)


def test_monomial_format_roundtrip():
    ms = [qmono(2, 1), qmono(1, 1), qmono(-1, 3), Monomial(rat(5, 2), 8),
          Monomial(1, 3), Monomial(-2, -4), mono(7), Monomial(0), INFINITY,
          Monomial(rat(-5, 3), 1)]
    for m in ms:
        assert parse_monomial(format_monomial(m)) == m, format_monomial(m)


def test_parse_file_basics():
    text = """
# comment line
RR1 order=40

KMRR k=2 m=3 order=120   # trailing comment
T8PSI8 m=1 rho1=2q rho2=3q mu1=2 mu2=3 alpha=3q^2 order=80
"""
    f = parse_instances(text)
    assert [inst.def_id for _, inst in f.entries] == ["RR1", "KMRR", "T8PSI8"]
    assert f.entries[1][0] == 5  # 1-based line numbers, blanks skipped
    t8 = f.entries[2][1]
    assert t8.bindings["rho1"] == qmono(2, 1)
    assert t8.bindings["mu2"] == mono(3)
    assert t8.order == 80


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as ei:
        parse_instances("KMRR k=2 m=$ order=40")
    assert ei.value.line == 1 and ei.value.column == 12
    with pytest.raises(ParseError) as ei:
        parse_instances("RR1 order=40\nNOPE order=40")
    assert ei.value.line == 2
    with pytest.raises(ParseError):
        parse_instances("KMRR k=0 m=1 order=40")  # constraint at parse time
    with pytest.raises(ParseError):
        parse_instances("KMRR k=2 m=3")  # no order, no default
    with pytest.raises(ParseError):
        parse_instances("KMRR k=2 zz=1 order=40")  # unknown parameter
    with pytest.raises(ParseError):
        parse_instances("KMRR k=2 k=3 m=0 order=40")  # duplicate


def test_default_order_applies():
    f = parse_instances("RR1\nKMRR k=1 m=0", default_order=60)
    assert all(inst.order == 60 for _, inst in f.entries)


def test_serialize_parse_fixpoint():
    text = "KMRR k=2 m=3 order=120\nT8PSI8 m=1 rho1=2q rho2=3q mu1=2 mu2=3 alpha=3q^2 order=80"
    f = parse_instances(text)
    for _, inst in f.entries:
        s = format_instance(inst)
        again = parse_instances(s).entries[0][1]
        assert again.def_id == inst.def_id
        assert again.bindings == inst.bindings
        assert again.order == inst.order
        assert format_instance(again) == s
