#!/usr/bin/env python3
"""Small demo of the pair engine: build the closed shifted pair, run the
defining-relation check, push it through each transform, and print the first
few transformed terms."""

from baileykit.bailey import (
    apply_lemma,
    apply_s1,
    apply_s2,
    change_base,
    check_pair,
    pair_scale_base,
    shifted_pair,
)
from baileykit.series import INFINITY, qmono


def show(name, pair, order=40):
    rep = check_pair(pair, -3, 4, order)
    status = "ok" if rep.passed else f"FAIL at n={rep.first_failure.n}"
    b2 = pair.beta(2, order)
    head = ", ".join(f"q^{e//2 if e % 2 == 0 else f'({e}/2)'}*{c}" for e, c in list(b2.items())[:4])
    print(f"{name:<22} relation {status:<14} beta_2 = {head or '0'} + ...")


def main() -> None:
    m = 2
    p = shifted_pair(m)
    show("shifted pair", p)
    show("one iteration", apply_s1(p))
    show("two iterations", apply_s1(apply_s1(p)))
    show("half-step instance", apply_s2(p))
    show("two free parameters", apply_lemma(p, qmono(2, 1), qmono(3, 1)))
    show("one parameter to inf", apply_lemma(p, qmono(2, 1), INFINITY))
    show("base change (inf)", change_base(pair_scale_base(p, 2), INFINITY))


if __name__ == "__main__":
    main()
