#!/usr/bin/env python3
"""Sweep the whole corpus over its default desk-scale grids and print a
status table.  Useful as a smoke run; the full acceptance grids live in
tests/test_acceptance.py."""

import argparse
import time

from baileykit.corpus import make_instance, verify
from baileykit.series import mono, qmono

GRIDS = {
    "RR1": [{}],
    "RR2": [{}],
    "QBI": [{"n": n, "z": qmono(2, 1)} for n in (0, 3, 7, 10)],
    "QPS": [{"n": n, "a": qmono(2, 1), "b": qmono(3, 1), "c": qmono(5, 3)} for n in (0, 2, 5)],
    "JTP": [{"z": z} for z in (qmono(2, 1), mono(3, 1), qmono(1, 1))],
    "KMRR": [{"k": k, "m": m} for k in (1, 2, 3) for m in (0, 2, 5)],
    "KMGG": [{"k": k, "m": m} for k in (1, 2) for m in (0, 2, 5)],
    "K1MRR": [{"m": m} for m in range(0, 13)],
    "K1MGG_EVEN": [{"m": m} for m in range(0, 10)],
    "K1MGG_ODD": [{"m": m} for m in range(0, 10)],
    "MRR": [{"m": m} for m in range(0, 9)],
    "MGG": [{"m": m} for m in range(0, 9)],
    "GIS": [{"m": m} for m in range(0, 9)],
    "KMRR_INV": [{"k": k, "m": m} for k in (1, 2, 3) for m in (0, 2, 4)],
    "K2MRR": [{"k": k, "m": m} for k in (2, 3) for m in (0, 2, 4)],
    "LHS_FULL_AG": [{"k": k, "m": m} for k in (2, 3, 4) for m in range(1, k)],
    "KMRR_CHANGE": [{"k": k, "m": m} for k in (1, 2, 3) for m in (0, 2, 4)],
    "KMGG_INV": [{"k": k, "m": m} for k in (1, 2, 3) for m in (0, 2, 4)],
    "T8PSI8": [
        {"m": m, "rho1": qmono(2, 1), "rho2": qmono(3, 1), "mu1": mono(2), "mu2": mono(3),
         "alpha": qmono(2, m + 1)}
        for m in (0, 1, 2)
    ],
    "R1PSI1": [{"b": mono(2), "c": qmono(2, 2), "z": qmono(1, 1)}],
    "B6PSI6": [{"a": qmono(2, 2), "b": qmono(2, 1), "c": qmono(3, 1), "d": qmono(5, 1), "e": qmono(7, 1)}],
    "EXT63": [{"m": m, "beta": mono(2), "gamma": mono(3), "rho": qmono(5, 1)} for m in range(0, 5)],
    "QULTRA_CONN": [{"n": n, "beta": qmono(2, 1), "c": qmono(3, 1)} for n in range(0, 7)],
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=80, help="t-order (default 80)")
    args = ap.parse_args()

    total = failures = 0
    t0 = time.perf_counter()
    for def_id, grid in GRIDS.items():
        times = []
        bad = 0
        for bindings in grid:
            rep = verify(make_instance(def_id, bindings, args.order))
            times.append(rep.elapsed_ms)
            total += 1
            if rep.status != "pass":
                bad += 1
                failures += 1
                print(f"  !! {def_id} {bindings}: {rep.status} {rep.message}")
        flag = "ok " if bad == 0 else "BAD"
        print(f"{flag} {def_id:<12} {len(grid):>3} instances, max {max(times)} ms")
    print(f"{total - failures}/{total} passed in {time.perf_counter() - t0:.1f} s")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
