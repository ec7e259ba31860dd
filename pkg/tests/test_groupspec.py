import pytest
from hypothesis import given, strategies as st

from isotype.cardinal import INF, ZERO, fin
from isotype.errors import InputError, SpecError
from isotype.groupspec import (
    PeriodicGroupSpec,
    PGroupSpec,
    format_pgroup,
    parse_group_file,
    periodic_exp,
    spec_d_invariant,
    spec_exp,
    spec_invariants,
    spec_realizable,
    spec_tf_invariant,
    spec_ulm_invariant,
    zero_spec,
)
from isotype.multiplicity import MultiplicitySeq as S, seq_tail_sum
from test_multiplicity import seqs

ONE = S.constant(1)


def test_ulm_invariant_examples():
    assert spec_ulm_invariant(PGroupSpec(2, ZERO, S.finite({3: 1})), 3) == fin(1)
    assert all(spec_ulm_invariant(zero_spec(3), n) == ZERO for n in range(1, 6))
    assert spec_ulm_invariant(PGroupSpec(5, ZERO, S.constant(INF)), 5) == INF


def test_tf_examples():
    assert spec_tf_invariant(PGroupSpec(2, ZERO, S.finite({1: 3, 4: 1}))) == ZERO
    assert spec_tf_invariant(PGroupSpec(2, ZERO, ONE)) == INF
    k = S.finite({1: INF})
    assert spec_tf_invariant(PGroupSpec(2, ZERO, k)) == ZERO
    assert seq_tail_sum(k, 2) == ZERO


def test_d_examples():
    assert spec_d_invariant(PGroupSpec(2, fin(2), S.finite({1: 1}))) == fin(2)
    assert spec_d_invariant(PGroupSpec(2, ZERO, ONE)) == INF
    assert spec_d_invariant(zero_spec(2)) == ZERO


def test_exp_examples():
    assert spec_exp(zero_spec(7)) == fin(1)
    assert spec_exp(PGroupSpec(2, ZERO, S.finite({1: 2, 3: 1}))) == fin(8)
    assert spec_exp(PGroupSpec(2, fin(1), S.finite({1: 2}))) == INF
    assert spec_exp(PGroupSpec(2, ZERO, S.finite({1: 2}), S.finite({1: 1}))) == INF


def test_invariants_bundle():
    z = spec_invariants(zero_spec(2))
    assert (z.d, z.tf, z.u, z.exp) == (ZERO, ZERO, S.zero(), fin(1))
    inv = spec_invariants(PGroupSpec(3, INF, S.finite({2: 1})))
    assert (inv.d, inv.tf, inv.u, inv.exp) == (INF, ZERO, S.finite({2: 1}), INF)


def test_realizable_examples():
    ok, diag = spec_realizable(PGroupSpec(2, ZERO, S.finite({1: 1}), S.finite({1: 1})))
    assert not ok
    assert diag == "condition (c): nonzero Ulm part requires unbounded basic subgroup"
    assert spec_realizable(PGroupSpec(2, ZERO, S.finite({2: 5})))[0]
    assert spec_realizable(PGroupSpec(2, ZERO, ONE, S.finite({2: INF})))[0]


def test_periodic_exp_examples():
    two = PGroupSpec(2, ZERO, S.finite({1: 1}))
    three = PGroupSpec(3, ZERO, S.finite({2: 1}))
    assert periodic_exp(PeriodicGroupSpec.of(two, three)) == fin(18)
    assert periodic_exp(PeriodicGroupSpec.of()) == fin(1)
    assert periodic_exp(PeriodicGroupSpec.of(two, PGroupSpec(3, ZERO, ONE))) == INF


def test_prime_validated():
    with pytest.raises(SpecError):
        PGroupSpec(4)
    with pytest.raises(SpecError):
        PeriodicGroupSpec({3: zero_spec(2)})


@given(seqs(), seqs(), seqs(), st.sampled_from([ZERO, fin(2), INF]))
def test_gamma_never_changes_invariants(kappa, g1, g2, k0):
    a = PGroupSpec(3, k0, kappa, g1)
    b = PGroupSpec(3, k0, kappa, g2)
    assert spec_invariants(a) == spec_invariants(b)


@given(seqs(), seqs(), st.sampled_from([ZERO, fin(1), INF]))
def test_invariant_relations(kappa, gamma, k0):
    s = PGroupSpec(2, k0, kappa, gamma)
    inv = spec_invariants(s)
    bounded = kappa.tail_is_zero()
    assert inv.d == (k0 if bounded else INF)
    assert (inv.exp == INF) == (inv.tf == INF or k0 != ZERO or not gamma.is_zero())
    if not bounded:
        assert inv.d == INF and inv.exp == INF


GROUP_FILE = """
# two components
group A {
  prime 2
  divisible 1
  basic { 1:2 3:inf ; tail period 2 [0 1] }
  ulm { 2:1 }    # optional
}
group B { prime 3 basic { 2:1 } }
periodic P { component A component B }
"""


def test_group_file():
    groups = parse_group_file(GROUP_FILE)
    assert list(groups) == ["A", "B", "P"]
    A = groups["A"]
    assert A.p == 2 and A.kappa0 == fin(1) and A.gamma == S.finite({2: 1})
    assert groups["B"].kappa0 == ZERO and groups["B"].gamma.is_zero()
    assert groups["P"].component(2) == A and groups["P"].component(5) == zero_spec(5)
    again = parse_group_file(format_pgroup(A, "A"))
    assert again["A"] == A


@pytest.mark.parametrize(
    "text",
    [
        "group A { prime 4 }",
        "group A { divisible 1 }",
        "group A { prime 2 basic 3 }",
        "group A { prime 2 ",
        "periodic P { component Z }",
        "group A { prime 2 } group A { prime 3 }",
        "thing A { }",
        "group A { prime 2 divisible x }",
    ],
)
def test_group_file_errors(text):
    with pytest.raises(InputError):
        parse_group_file(text)


def test_group_file_error_has_line():
    with pytest.raises(InputError, match="line 3"):
        parse_group_file("group A { prime 2 }\n\ngroup B { prime 6 }")
