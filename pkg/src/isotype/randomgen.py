"""Seeded random instances for cross-validation."""

from __future__ import annotations

import math
import random
from typing import List, Optional, Sequence, Tuple

from .cardinal import INF, ZERO, Cardinal, fin
from .concrete import GroupElement, StandardGroup, elt_add, elt_scalar, generate_subgroup
from .formulas import Div, Eq, Exists, Formula, Term, conj
from .groupspec import PGroupSpec
from .multiplicity import MultiplicitySeq
from .oracle import FiniteAbelian
from .typecalc import TupleDescriptor

PRIMES = (2, 3, 5)


def finite_pgroup(rng: random.Random, p: int, max_order: int, max_summands: int = 6) -> StandardGroup:
    """Random exponents e_j with p^{sum e_j} <= max_order."""
    budget = int(math.floor(math.log(max_order, p) + 1e-9))
    exps = []
    for _ in range(rng.randint(0, max_summands)):
        if budget <= 0:
            break
        e = rng.randint(1, min(budget, 5))
        exps.append(e)
        budget -= e
    return StandardGroup(p, 0, tuple(sorted(exps)))


def standard_group(rng: random.Random, p: int, max_d: int = 2, max_summands: int = 3, max_e: int = 3) -> StandardGroup:
    exps = tuple(sorted(rng.randint(1, max_e) for _ in range(rng.randint(0, max_summands))))
    return StandardGroup(p, rng.randint(0, max_d), exps)


def finite_abelian(rng: random.Random, max_size: int) -> FiniteAbelian:
    """Random product of cyclic groups (any moduli) of order at most max_size."""
    mods, size = [], 1
    for _ in range(rng.randint(1, 4)):
        hi = max_size // size
        if hi < 2:
            break
        m = rng.randint(2, min(hi, 64))
        mods.append(m)
        size *= m
    return FiniteAbelian(tuple(mods))


def cardinal(rng: random.Random, hi: int = 3, p_inf: float = 0.2) -> Cardinal:
    return INF if rng.random() < p_inf else fin(rng.randint(0, hi))


def sequence(rng: random.Random, bounded: Optional[bool] = None, hi: int = 3, max_offset: int = 5) -> MultiplicitySeq:
    """A random eventually periodic sequence; bounded means zero tail."""
    if bounded is None:
        bounded = rng.random() < 0.5
    exc = {i: cardinal(rng, hi) for i in range(1, rng.randint(1, max_offset) + 1) if rng.random() < 0.6}
    if bounded:
        return MultiplicitySeq.finite(exc)
    pattern = [cardinal(rng, hi) for _ in range(rng.randint(1, 3))]
    if not any(pattern):
        pattern[rng.randrange(len(pattern))] = fin(rng.randint(1, hi))
    return MultiplicitySeq(exc, max(exc, default=0) + 1, pattern)


def realizable_spec(rng: random.Random, p: int, gamma: str = "any", bounded: Optional[bool] = None) -> PGroupSpec:
    """Random spec satisfying the realizability condition.

    ``gamma`` is "zero", or "any" (nonzero Ulm part only on top of an
    unbounded basic subgroup).
    """
    kappa = sequence(rng, bounded)
    g = MultiplicitySeq.zero()
    unbounded = not kappa.tail_is_zero()
    if gamma == "any" and unbounded and rng.random() < 0.7:
        g = sequence(rng)
    return PGroupSpec(p, cardinal(rng), kappa, g)


def spec_pair(rng: random.Random, p: int, gamma: str = "any", bounded: Optional[bool] = None) -> Tuple[PGroupSpec, PGroupSpec]:
    """Two realizable specs; the second often shares components with the first."""
    a = realizable_spec(rng, p, gamma, bounded)
    fresh = realizable_spec(rng, p, gamma, bounded)
    if rng.random() < 0.25:
        return a, fresh
    kappa0 = rng.choice((a.kappa0, fresh.kappa0))
    kappa = a.kappa if rng.random() < 0.7 else fresh.kappa
    g = rng.choice((a.gamma, fresh.gamma))
    if kappa.tail_is_zero():
        g = MultiplicitySeq.zero()
    return a, PGroupSpec(p, kappa0, kappa, g)


def automorphism_images(rng: random.Random, G: StandardGroup, tries: int = 200) -> Optional[List[GroupElement]]:
    """Images of the cyclic generators under a random automorphism of a finite G."""
    p, exps = G.p, G.exponents
    if not exps:
        return []
    for _ in range(tries):
        imgs = []
        for ej in exps:
            # the image of a generator of order p^ej must be killed by p^ej
            cyc = [rng.randrange(p ** min(ek, ej)) * p ** max(0, ek - ej) for ek in exps]
            imgs.append(G.element(cyc=cyc))
        if len(generate_subgroup(G, imgs)) == G.order:
            return imgs
    return None


def apply_images(G: StandardGroup, imgs: Sequence[GroupElement], x: GroupElement) -> GroupElement:
    out = G.zero()
    for c, g in zip(x.cyc, imgs):
        out = elt_add(G, out, elt_scalar(G, c, g))
    return out


def element(rng: random.Random, G: StandardGroup, max_k: int = 3) -> GroupElement:
    div = []
    for _ in range(G.d_copies):
        k = rng.randint(0, max_k)
        div.append((rng.randrange(G.p ** k) if k else 0, k))
    cyc = [rng.randrange(G.p ** e) for e in G.exponents]
    if rng.random() < 0.2:
        cyc = [0] * len(cyc)
    return G.element(div, cyc)


def pp_formula(
    rng: random.Random,
    free: Sequence[str],
    max_bound: int = 3,
    coeff: int = 16,
    max_exp: int = 4,
    primes: Sequence[int] = (2, 3, 5),
    max_atoms: int = 3,
) -> Formula:
    """Existential block over a random conjunction of equations and divisibilities."""
    bound = [f"y{i}" for i in range(rng.randint(0, max_bound))]
    names = list(free) + bound
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        t = Term.of({v: rng.randint(-coeff, coeff) for v in names if rng.random() < 0.7})
        if rng.random() < 0.5:
            atoms.append(Eq(t))
        else:
            atoms.append(Div(rng.choice(primes) ** rng.randint(1, max_exp), t))
    body = conj(atoms)
    for v in reversed(bound):
        body = Exists(v, body)
    return body


def descriptor(rng: random.Random, max_N: int = 4, max_order: int = 4) -> TupleDescriptor:
    N = rng.randint(0, max_N)
    r = rng.randint(0, N)
    s = rng.randint(0, N - r)
    orders, shifts = [], []
    for i in range(N):
        lo = 2 if r <= i < r + s else 1
        orders.append(rng.randint(lo, max(lo, max_order)))
    for i in range(s):
        shifts.append(rng.randint(1, orders[r + i] - 1))
    return TupleDescriptor(N, r, s, tuple(orders), tuple(shifts)).canonical()
