"""Randomized comparisons of the calculators against the brute-force oracle.

Each ``check_*`` function runs one random trial and returns None on
agreement or a short description of the mismatch.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Dict, List, Optional, Tuple

from . import randomgen as rg
from .concrete import elt_height, elt_order_exp, format_element
from .deciders import ee_p
from .formulas import format_formula, pp_holds, pp_normalize, to_pp
from .groupspec import spec_invariants
from .oracle import (
    _Evaluator,
    as_finite,
    oracle_automorphism_extend,
    oracle_eval,
    oracle_eval_table,
    oracle_height,
    oracle_invariants,
    oracle_order,
    oracle_profile,
)
from .typecalc import homogeneity_automorphism, normalize_tuple, profile_of, profiles_equal, realize_in_group, realizes

Check = Callable[[random.Random], Optional[str]]


def check_invariants(rng: random.Random) -> Optional[str]:
    G = rg.finite_pgroup(rng, rng.choice(rg.PRIMES), 10 ** 4)
    if oracle_invariants(G) != spec_invariants(G.spec()):
        return f"invariants differ on {G}"
    return None


def check_heights(rng: random.Random) -> Optional[str]:
    G = rg.finite_pgroup(rng, rng.choice(rg.PRIMES), 2000)
    x = rg.element(rng, G)
    if oracle_height(G, x) != elt_height(G, x) or oracle_order(G, x) != elt_order_exp(G, x):
        return f"height/order differ at {format_element(G, x)} in {G}"
    return None


def check_isomorphism(rng: random.Random) -> Optional[str]:
    p = rng.choice(rg.PRIMES)
    G, H = rg.finite_pgroup(rng, p, 10 ** 4, 4), rg.finite_pgroup(rng, p, 10 ** 4, 4)
    if ee_p(G.spec(), H.spec()) != (G.exponents == H.exponents):
        return f"ee_p disagrees with isomorphism for {G} and {H}"
    return None


def _small_tuple(rng, G, m):
    return [rg.element(rng, G) for _ in range(m)]


def check_profile(rng: random.Random) -> Optional[str]:
    p = rng.choice((2, 3))
    G = rg.finite_pgroup(rng, p, 200, 3)
    t = _small_tuple(rng, G, rng.randint(1, 2))
    if profile_of(G, t) != oracle_profile(G, t):
        return f"profiles differ in {G}"
    return None


def check_pp_holds(rng: random.Random) -> Optional[str]:
    p = rng.choice((2, 3))
    G = rg.finite_pgroup(rng, p, 64, 3)
    m = rng.randint(1, 2)
    t = _small_tuple(rng, G, m)
    xs = [f"x{i + 1}" for i in range(m)]
    phi = rg.pp_formula(rng, xs, max_bound=2, primes=(p, p, 3 if p == 2 else 2))
    env = dict(zip(xs, t))
    if pp_holds(profile_of(G, t), phi) != oracle_eval(G, phi, env):
        return f"pp_holds disagrees on {format_formula(phi)} in {G}"
    return None


def check_ppnf(rng: random.Random) -> Optional[str]:
    nfree = rng.randint(1, 2)
    xs = [f"x{i + 1}" for i in range(nfree)]
    phi = rg.pp_formula(rng, xs, max_bound=2)
    nvars = nfree + len(to_pp(phi).bound)
    F = rg.finite_abelian(rng, min(64, int(round((1 << 18) ** (1 / nvars)))))
    ev = _Evaluator(F, 1 << 20)
    lhs = oracle_eval_table(F, phi, xs, evaluator=ev)
    rhs = oracle_eval_table(F, pp_normalize(phi), xs, evaluator=ev)
    if not (lhs == rhs).all():
        return f"normal form wrong for {format_formula(phi)} over moduli {F.moduli}"
    return None


def check_automorphism(rng: random.Random) -> Optional[str]:
    p = 2
    G = rg.finite_pgroup(rng, p, p ** 5, 3)
    m = rng.randint(1, 2)
    a, b = _small_tuple(rng, G, m), _small_tuple(rng, G, m)
    K = max([G.max_exponent, 1])
    eq = profiles_equal(profile_of(G, a), profile_of(G, b))
    w = homogeneity_automorphism(G, a, b, K)
    o = oracle_automorphism_extend(G, a, b)
    if eq != (w is not None) or eq != (o is not None):
        return f"homogeneity disagreement in {G}"
    if w is not None and w.verify() is not None:
        return f"bad witness in {G}: {w.verify()}"
    return None


def check_roundtrip(rng: random.Random) -> Optional[str]:
    p = rng.choice((2, 3))
    G = rg.standard_group(rng, p)
    d = rg.descriptor(rng, 3, 3)
    t = realize_in_group(G, d)
    if (t is not None) != realizes(G.spec(), d):
        return f"realization disagrees with budget in {G}"
    if t is not None and normalize_tuple(G, t).descriptor != d:
        return f"realized tuple does not renormalize in {G}"
    return None


SUITES: Dict[str, Check] = {
    "invariants": check_invariants,
    "height-order": check_heights,
    "ee-isomorphism": check_isomorphism,
    "profile": check_profile,
    "pp-holds": check_pp_holds,
    "pp-normal-form": check_ppnf,
    "automorphism": check_automorphism,
    "realization": check_roundtrip,
}


def run_suites(seed: int, trials: int) -> List[Tuple[str, int, List[str]]]:
    rows = []
    for name, check in SUITES.items():
        rng = random.Random(f"{seed}:{name}")
        failures = [msg for msg in (check(rng) for _ in range(trials)) if msg]
        rows.append((name, trials, failures))
    return rows
