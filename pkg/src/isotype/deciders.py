"""Elementary and isotypic equivalence of p-groups and periodic groups.

Each decider has a ``*_violation`` companion that returns a short message
naming the first invariant that differs, or None when the groups are
equivalent.  The boolean forms are thin wrappers over those.
"""

from __future__ import annotations

from typing import Optional

from .cardinal import ZERO, card_add
from .errors import SpecError
from .groupspec import (
    PeriodicGroupSpec,
    PGroupSpec,
    spec_d_invariant,
    spec_exp,
    spec_tf_invariant,
)
from .multiplicity import (
    UNBOUNDED,
    seq_at,
    seq_eq,
    seq_final_rank,
    seq_partial_sum,
    seq_support_bound,
)

__all__ = [
    "ee_p",
    "ee",
    "isotypic_p",
    "isotypic",
    "isotypic_separable",
    "ee_p_violation",
    "ee_violation",
    "isotypic_p_violation",
    "isotypic_violation",
    "isotypic_separable_violation",
]


def _same_prime(a: PGroupSpec, b: PGroupSpec):
    if a.p != b.p:
        raise SpecError(f"different primes: {a.p} and {b.p}")


def _first_kappa_difference(a: PGroupSpec, b: PGroupSpec) -> Optional[str]:
    if seq_eq(a.kappa, b.kappa):
        return None
    n = 1
    while seq_at(a.kappa, n) == seq_at(b.kappa, n):
        n += 1
    return f"U(p,{n - 1}) = kappa_{n}: {seq_at(a.kappa, n)} vs {seq_at(b.kappa, n)}"


def ee_p_violation(a: PGroupSpec, b: PGroupSpec) -> Optional[str]:
    _same_prime(a, b)
    for label, fn in (("D", spec_d_invariant), ("Tf", spec_tf_invariant)):
        x, y = fn(a), fn(b)
        if x != y:
            return f"{label}(p={a.p}): {x} vs {y}"
    diff = _first_kappa_difference(a, b)
    if diff:
        return diff
    x, y = spec_exp(a), spec_exp(b)
    if x != y:
        return f"Exp(p={a.p}): {x} vs {y}"
    return None


def ee_p(a: PGroupSpec, b: PGroupSpec) -> bool:
    return ee_p_violation(a, b) is None


def _primes(a: PeriodicGroupSpec, b: PeriodicGroupSpec):
    return sorted(set(a.components) | set(b.components))


def ee_violation(a: PeriodicGroupSpec, b: PeriodicGroupSpec) -> Optional[str]:
    for p in _primes(a, b):
        v = ee_p_violation(a.component(p), b.component(p))
        if v:
            return f"{p}-component: {v}"
    return None


def ee(a: PeriodicGroupSpec, b: PeriodicGroupSpec) -> bool:
    return ee_violation(a, b) is None


def isotypic_p_violation(a: PGroupSpec, b: PGroupSpec) -> Optional[str]:
    _same_prime(a, b)
    diff = _first_kappa_difference(a, b)
    if diff:
        return diff
    sa = card_add(a.kappa0, seq_final_rank(a.gamma))
    sb = card_add(b.kappa0, seq_final_rank(b.gamma))
    if sa.is_inf and sb.is_inf:
        return None
    if sa.is_inf != sb.is_inf:
        return f"kappa0 + fin r(A^1): {sa} vs {sb}"
    # both sums finite, so both Ulm parts have final rank 0
    if a.kappa0 != b.kappa0:
        return f"kappa0: {a.kappa0} vs {b.kappa0}"
    bounds = (seq_support_bound(a.gamma), seq_support_bound(b.gamma))
    assert UNBOUNDED not in bounds
    N = max(bounds)
    for i in range(1, N + 1):
        x, y = seq_partial_sum(a.gamma, i, N), seq_partial_sum(b.gamma, i, N)
        if x != y:
            return f"sum_{{k={i}}}^{N} gamma_k: {x} vs {y}"
    return None


def isotypic_p(a: PGroupSpec, b: PGroupSpec) -> bool:
    return isotypic_p_violation(a, b) is None


def isotypic_violation(a: PeriodicGroupSpec, b: PeriodicGroupSpec) -> Optional[str]:
    for p in _primes(a, b):
        v = isotypic_p_violation(a.component(p), b.component(p))
        if v:
            return f"{p}-component: {v}"
    return None


def isotypic(a: PeriodicGroupSpec, b: PeriodicGroupSpec) -> bool:
    return isotypic_violation(a, b) is None


def isotypic_separable_violation(a: PGroupSpec, b: PGroupSpec) -> Optional[str]:
    """Divisible parts and basic subgroups must be elementarily equivalent."""
    _same_prime(a, b)
    if not (a.gamma.is_zero() and b.gamma.is_zero()):
        raise SpecError("not separable: the reduced part has a nonzero Ulm subgroup")
    if a.kappa0 != b.kappa0:
        return f"divisible rank: {a.kappa0} vs {b.kappa0}"
    # the basic subgroup alone is the group with kappa0 = 0
    basic_a = PGroupSpec(a.p, ZERO, a.kappa)
    basic_b = PGroupSpec(b.p, ZERO, b.kappa)
    v = ee_p_violation(basic_a, basic_b)
    return f"basic subgroups: {v}" if v else None


def isotypic_separable(a: PGroupSpec, b: PGroupSpec) -> bool:
    return isotypic_separable_violation(a, b) is None
