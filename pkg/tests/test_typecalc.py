import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from isotype import randomgen as rg
from isotype.cardinal import INF, fin
from isotype.concrete import (
    StandardGroup,
    elt_add,
    elt_height,
    elt_order_exp,
    elt_scalar,
    generate_subgroup,
    parse_element,
)
from isotype.errors import CapExceeded, InputError
from isotype.groupspec import PGroupSpec
from isotype.multiplicity import MultiplicitySeq as S
from isotype.oracle import oracle_automorphism_extend, oracle_profile
from isotype.typecalc import (
    Normalization,
    TupleDescriptor,
    format_descriptor,
    format_profile,
    homogeneity_automorphism,
    normalize_tuple,
    parse_descriptor,
    profile_of,
    profiles_equal,
    realize_in_group,
    realizes,
    realizes_violation,
)


def combo(G, coeffs, xs):
    tot = G.zero()
    for c, x in zip(coeffs, xs):
        tot = elt_add(G, tot, elt_scalar(G, c, x))
    return tot


def socle_independent(G, xs):
    """Independence via the order-p multiples p^(o-1) x, whose span is small."""
    if any(x.is_zero() for x in xs):
        return False
    tops = [elt_scalar(G, G.p ** (elt_order_exp(G, x) - 1), x) for x in xs]
    return not tops or len(generate_subgroup(G, tops)) == G.p ** len(tops)


def lemma_violation(G, a, norm):
    """Check the three-block conditions and the reconstruction directly."""
    d, b = norm.descriptor, norm.basis
    p = G.p
    if len(b) != d.N:
        return "basis length"
    if not socle_independent(G, b):
        return "dependent basis"
    if [elt_order_exp(G, x) for x in b] != list(d.orders):
        return "orders"
    fin_part = b[: d.r]
    for x in b[: d.r + d.s]:
        if elt_height(G, x) != 0:
            return "nonzero height in first two blocks"
    for alpha in itertools.product(*(range(p ** l) for l in d.finite_part())):
        if any(alpha) and elt_height(G, combo(G, alpha, fin_part)) == math.inf:
            return "finite block combination of infinite height"
    tops = []
    for x, m in zip(b[d.r : d.r + d.s], d.ulm_shifts):
        if elt_height(G, elt_scalar(G, p ** m, x)) != math.inf:
            return "shift does not reach infinite height"
        if elt_height(G, elt_scalar(G, p ** (m - 1), x)) == math.inf:
            return "shift not minimal"
        tops.append(elt_scalar(G, p ** m, x))
    for x in b[d.r + d.s :]:
        if elt_height(G, x) != math.inf:
            return "last block not of infinite height"
        tops.append(x)
    if not socle_independent(G, tops):
        return "infinite-height family dependent"
    for x, row in zip(a, norm.expression):
        if combo(G, row, b) != x:
            return "reconstruction"
    return None


# -- profiles ---------------------------------------------------------------

def test_profile_of_zeros():
    G = StandardGroup(2, 1, (2,))
    P = profile_of(G, [G.zero(), G.zero()])
    assert all(v == (0, math.inf) for v in P.entries.values())


def test_profile_example():
    G = StandardGroup(2, 1, (1,))
    P = profile_of(G, [parse_element(G, "D(0)=1/2"), parse_element(G, "C(0)=1")])
    assert P.at((1, 0)) == (1, math.inf)
    assert P.at((0, 1)) == (1, 0)
    assert P.at((1, 1)) == (1, 0)
    assert "(1,0) -> (1,inf)" in format_profile(P)


def test_profiles_equal_examples():
    Z22 = StandardGroup(2, 0, (1, 1))
    P = profile_of(Z22, [Z22.cyclic_generator(0)])
    assert profiles_equal(P, P)
    assert profiles_equal(P, profile_of(Z22, [Z22.cyclic_generator(1)]))
    Z2, Z4 = StandardGroup(2, 0, (1,)), StandardGroup(2, 0, (2,))
    assert not profiles_equal(profile_of(Z2, [Z2.element(cyc=(1,))]), profile_of(Z4, [Z4.element(cyc=(2,))]))
    with pytest.raises(InputError):
        profiles_equal(P, profile_of(StandardGroup(3, 0, (1,)), [StandardGroup(3, 0, (1,)).zero()]))


def test_profile_cap():
    G = StandardGroup(3, 0, (4, 4))
    with pytest.raises(CapExceeded):
        profile_of(G, [G.cyclic_generator(0), G.cyclic_generator(1)], max_enum=1000)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_profile_matches_oracle(seed):
    rng = random.Random(seed)
    G = rg.finite_pgroup(rng, rng.choice((2, 3)), 300, 3)
    t = [rg.element(rng, G) for _ in range(rng.randint(1, 2))]
    assert profile_of(G, t) == oracle_profile(G, t)


# -- descriptors and normalization -----------------------------------------

def test_descriptor_validation_and_syntax():
    d = TupleDescriptor(3, 1, 1, (2, 3, 1), (1,))
    assert parse_descriptor(format_descriptor(d)) == d
    assert (d.nu(2), d.nu(1), d.mu(2), d.mu(1), d.K, d.M) == (1, 1, 1, 1, 2, 2)
    for bad in [(1, 2, 0, (1,), ()), (1, 0, 1, (2,), (2,)), (1, 1, 0, (0,), ())]:
        with pytest.raises(InputError):
            TupleDescriptor(*bad)
    with pytest.raises(InputError):
        parse_descriptor("descriptor { 1 }")


def test_normalize_zero():
    G = StandardGroup(2, 1, (2,))
    n = normalize_tuple(G, [G.zero()])
    assert n.descriptor.N == 0 and n.basis == ()


def test_normalize_cyclic_example():
    G = StandardGroup(2, 0, (3,))
    a = [G.element(cyc=(2,))]
    n = normalize_tuple(G, a)
    assert n.descriptor == TupleDescriptor(1, 1, 0, (3,))
    assert n.basis == (G.element(cyc=(1,)),)
    assert n.expression == ((2,),)


def test_normalize_mixed_example():
    # several bases fit the conditions; check the invariants of the result
    G = StandardGroup(2, 1, (3,))
    a = [parse_element(G, "D(0)=1/2 + C(0)=2")]
    n = normalize_tuple(G, a)
    assert lemma_violation(G, a, n) is None
    assert n.descriptor == TupleDescriptor(1, 1, 0, (3,))
    assert elt_scalar(G, 2, n.basis[0]) == a[0]
    # a two-element basis with an infinite-height block also fits
    alt = Normalization(TupleDescriptor(2, 1, 0, (3, 1)), (G.cyclic_generator(0), parse_element(G, "D(0)=1/2")), ((2, 1),))
    assert lemma_violation(G, a, alt) is None


def test_normalize_shifted_block():
    G = StandardGroup(2, 1, (1,))
    b = parse_element(G, "D(0)=1/8 + C(0)=1")
    n = normalize_tuple(G, [b])
    assert n.descriptor == TupleDescriptor(1, 0, 1, (3,), (1,))
    assert lemma_violation(G, [b], n) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_normalize_conditions(seed):
    rng = random.Random(seed)
    G = rg.standard_group(rng, rng.choice((2, 3)))
    a = [rg.element(rng, G) for _ in range(rng.randint(1, 3))]
    assert lemma_violation(G, a, normalize_tuple(G, a)) is None


# -- realizability -------------------------------------------------------------

def spec(p, d, ulm):
    return PGroupSpec(p, d, ulm)


def test_realizes_examples():
    empty = TupleDescriptor(0, 0, 0, ())
    assert realizes(spec(2, fin(0), S.finite({})), empty)
    two = TupleDescriptor(2, 0, 0, (1, 1))
    small = spec(2, fin(1), S.finite({1: 1}))
    assert not realizes(small, two)
    assert "sum_{k>=1} mu_k" in realizes_violation(small, two)
    assert realizes(spec(2, INF, S.finite({})), two)
    assert realizes(spec(2, fin(2), S.finite({})), two)


def test_realizes_kappa_budget():
    d = TupleDescriptor(2, 2, 0, (2, 2))
    assert not realizes(spec(3, fin(0), S.finite({2: 1})), d)
    assert realizes(spec(3, fin(0), S.finite({2: 2})), d)
    assert "kappa_2" in realizes_violation(spec(3, fin(0), S.finite({2: 1})), d)


def test_strict_gamma_drops_divisible_term():
    d = TupleDescriptor(1, 0, 0, (1,))
    s = spec(2, fin(1), S.finite({}))
    assert realizes(s, d)
    assert not realizes(s, d, strict_gamma=True)


def test_realize_examples():
    G = StandardGroup(2, 1, (2, 1))
    assert realize_in_group(G, TupleDescriptor(0, 0, 0, ())) == ()
    assert realize_in_group(G, TupleDescriptor(1, 1, 0, (2,))) == (G.cyclic_generator(0),)
    H = StandardGroup(2, 1, (1,))
    (b,) = realize_in_group(H, TupleDescriptor(1, 0, 1, (3,), (1,)))
    assert elt_order_exp(H, b) == 3 and elt_height(H, b) == 0
    assert elt_height(H, elt_scalar(H, 2, b)) == math.inf
    assert realize_in_group(H, TupleDescriptor(2, 0, 0, (1, 1))) is None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_realize_roundtrip(seed):
    rng = random.Random(seed)
    G = rg.standard_group(rng, rng.choice((2, 3)))
    d = rg.descriptor(rng, 3, 3)
    t = realize_in_group(G, d)
    assert (t is not None) == realizes(G.spec(), d)
    if t is not None:
        assert normalize_tuple(G, t).descriptor == d


# -- homogeneity --------------------------------------------------------------

def test_homogeneity_identity():
    G = StandardGroup(2, 1, (2,))
    a = [parse_element(G, "D(0)=1/2 + C(0)=1")]
    w = homogeneity_automorphism(G, a, a, 2)
    assert w is not None and w.verify() is None


def test_homogeneity_swap():
    G = StandardGroup(2, 0, (1, 1))
    a, b = [G.cyclic_generator(0)], [G.cyclic_generator(1)]
    w = homogeneity_automorphism(G, a, b, 1)
    assert w is not None and w.verify() is None and w(b[0]) == a[0]
    assert oracle_automorphism_extend(G, a, b) is not None


def test_homogeneity_profile_mismatch():
    G = StandardGroup(2, 0, (2, 1))
    a, b = [G.element(cyc=(2, 0))], [G.element(cyc=(0, 1))]
    assert homogeneity_automorphism(G, a, b, 2) is None
    assert oracle_automorphism_extend(G, a, b) is None


def test_homogeneity_precision_too_small():
    G = StandardGroup(2, 0, (3,))
    a = [G.cyclic_generator(0)]
    with pytest.raises(InputError, match="precision too small"):
        homogeneity_automorphism(G, a, a, 2)


def test_homogeneity_with_divisible_part():
    G = StandardGroup(2, 1, (1,))
    a = [parse_element(G, "D(0)=1/4 + C(0)=1")]
    b = [parse_element(G, "D(0)=3/4 + C(0)=1")]
    w = homogeneity_automorphism(G, a, b, 2)
    assert w is not None and w.verify() is None
    assert homogeneity_automorphism(G, a, [parse_element(G, "D(0)=1/4")], 2) is None


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_homogeneity_agrees_with_oracle(seed):
    rng = random.Random(seed)
    G = rg.finite_pgroup(rng, 2, 32, 3)
    m = rng.randint(1, 2)
    a = [rg.element(rng, G) for _ in range(m)]
    b = [rg.element(rng, G) for _ in range(m)]
    w = homogeneity_automorphism(G, a, b, max(G.max_exponent, 1))
    o = oracle_automorphism_extend(G, a, b)
    assert (w is not None) == (o is not None) == profiles_equal(profile_of(G, a), profile_of(G, b))
    if w is not None:
        assert w.verify() is None
