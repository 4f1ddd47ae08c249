"""Independent brute-force checks.

These deliberately avoid the Pochhammer/series code paths: partition counts
come from an integer DP, the pentagonal expansion from the bare exponent
formula.  resummation_check re-evaluates identity instances with doubled
windows and reversed summation order and demands identical coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .series import TSeries


@dataclass(frozen=True)
class PartitionSpec:
    """Which partitions to count: parts satisfying allowed_parts, with
    successive parts (sorted decreasingly) differing by at least
    min_difference."""

    allowed_parts: Callable[[int], bool]
    min_difference: int = 0


def count_partitions(spec: PartitionSpec, n_max: int) -> list[int]:
    """Exact counts of spec-partitions of 0..n_max (bounded DP)."""
    parts = [p for p in range(1, n_max + 1) if spec.allowed_parts(p)]
    if spec.min_difference == 0:
        counts = [0] * (n_max + 1)
        counts[0] = 1
        for p in parts:
            for n in range(p, n_max + 1):
                counts[n] += counts[n - p]
        return counts

    d = spec.min_difference
    allowed = set(parts)

    @lru_cache(maxsize=None)
    def f(n: int, min_part: int) -> int:
        # partitions of n with smallest part >= min_part and gaps >= d
        if n == 0:
            return 1
        total = 0
        for p in range(min_part, n + 1):
            if p in allowed:
                total += f(n - p, p + d)
        return total

    out = [f(n, 1) for n in range(n_max + 1)]
    f.cache_clear()
    return out


def pentagonal_expansion(order: int) -> TSeries:
    """Sum over j in Z of (-1)^j q^{j(3j-1)/2}, truncated at t-order."""
    total = TSeries.one(order)
    j = 1
    while j * (3 * j - 1) <= order:
        sign = -1 if j % 2 else 1
        total = total + TSeries.term(sign, j * (3 * j - 1), order)
        if j * (3 * j + 1) <= order:
            total = total + TSeries.term(sign, j * (3 * j + 1), order)
        j += 1
    return total


@dataclass
class ResummationReport:
    instance: object
    identical: bool
    detail: str = ""


def resummation_check(inst, *, verify_fn=None) -> ResummationReport:
    """Re-evaluate an identity instance with all windows doubled and the
    summation order reversed; both sides must reproduce the original
    coefficients exactly."""
    from . import corpus  # local import to keep the oracle layer independent

    base_l, base_r = corpus.build_sides(inst, corpus.EvalConfig())
    alt_cfg = corpus.EvalConfig(window_scale=2, reverse=True)
    alt_l, alt_r = corpus.build_sides(inst, alt_cfg)
    same = corpus.sides_identical(base_l, alt_l) and corpus.sides_identical(base_r, alt_r)
    detail = "" if same else "doubled/reversed evaluation changed coefficients"
    return ResummationReport(inst, same, detail)
