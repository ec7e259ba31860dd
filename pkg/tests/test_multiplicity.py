import pytest
from hypothesis import given, strategies as st

from isotype.cardinal import INF, ZERO, card_add, fin
from isotype.errors import InputError
from isotype.multiplicity import (
    UNBOUNDED,
    MultiplicitySeq,
    format_seq,
    parse_seq,
    seq_at,
    seq_eq,
    seq_final_rank,
    seq_partial_sum,
    seq_support_bound,
    seq_tail_sum,
)

S = MultiplicitySeq
card = st.one_of(st.just(INF), st.integers(0, 3).map(fin))


@st.composite
def seqs(draw):
    exc = draw(st.dictionaries(st.integers(1, 6), card, max_size=4))
    offset = max(exc, default=0) + 1 + draw(st.integers(0, 2))
    pattern = draw(st.lists(card, min_size=1, max_size=3))
    return S(exc, offset, pattern)


def test_seq_at_examples():
    assert seq_at(S({1: fin(2)}, 2, [fin(0)]), 1) == fin(2)
    assert seq_at(S({}, 1, [fin(1)]), 17) == fin(1)
    assert seq_at(S({}, 1, [fin(1), fin(0)]), 4) == fin(0)


def test_seq_eq_examples():
    assert seq_eq(S.constant(1), S({}, 1, [1, 1]))
    assert S.constant(1) == S({}, 1, [1, 1])
    assert not seq_eq(S.finite({1: 2}), S.finite({1: 3}))
    assert seq_eq(S({}, 1, [INF]), S({1: INF}, 2, [INF]))


def test_tail_sum_examples():
    s = S.finite({2: 3, 5: 1})
    assert seq_tail_sum(s, 3) == fin(1)
    assert seq_tail_sum(S.constant(1), 1) == INF
    assert seq_tail_sum(S.constant(1), 40) == INF
    t = S.finite({1: INF})
    assert seq_tail_sum(t, 1) == INF
    assert seq_tail_sum(t, 2) == fin(0)


def test_partial_sum_examples():
    assert seq_partial_sum(S.finite({1: 1, 2: 1}), 1, 2) == fin(2)
    s = S({1: 4}, 2, [2, 0, 5])
    assert all(seq_partial_sum(s, n, n) == seq_at(s, n) for n in range(1, 10))
    assert seq_partial_sum(S.finite({3: INF}), 1, 3) == INF


def test_final_rank_examples():
    assert seq_final_rank(S.finite({1: 4, 3: 2})) == fin(0)
    assert seq_final_rank(S.constant(1)) == INF
    t = S.finite({1: INF})
    assert seq_final_rank(t) == fin(0)
    assert seq_tail_sum(t, 2) == fin(0)


def test_support_bound_examples():
    assert seq_support_bound(S.zero()) == 0
    assert seq_support_bound(S.finite({2: 1})) == 2
    assert seq_support_bound(S.constant(1)) == UNBOUNDED


def test_parse_and_format():
    s = parse_seq("{ 1:2 3:inf ; tail period 2 [0 1] }")
    assert seq_at(s, 1) == fin(2) and seq_at(s, 2) == ZERO and seq_at(s, 3) == INF
    assert seq_at(s, 4) == ZERO and seq_at(s, 5) == fin(1)
    assert parse_seq(format_seq(s)) == s
    assert parse_seq("{ 2:1 }") == S.finite({2: 1})
    assert parse_seq("{ }") == S.zero()


@pytest.mark.parametrize("bad", ["{ 0:1 }", "{ 1:x }", "1:2", "{ ; tail period 2 [1] }", "{ 1:1 ; tail period 1 [] }"])
def test_parse_rejects(bad):
    with pytest.raises(InputError):
        parse_seq(bad)


def test_constructor_validation():
    with pytest.raises(InputError):
        S({3: 1}, 2, [0])
    with pytest.raises(InputError):
        S({}, 1, [])


@given(seqs(), seqs())
def test_canonical_form_is_pointwise_equality(a, b):
    pointwise = all(seq_at(a, n) == seq_at(b, n) for n in range(1, 40))
    assert (a == b) == pointwise == seq_eq(a, b)


@given(seqs())
def test_roundtrip_text(s):
    assert parse_seq(format_seq(s)) == s


@given(seqs(), st.integers(1, 12))
def test_tail_sum_recursion(s, i):
    t = seq_tail_sum(s, i)
    if t.is_finite:
        assert t == card_add(seq_at(s, i), seq_tail_sum(s, i + 1))


@given(seqs())
def test_final_rank_vs_support(s):
    assert (seq_final_rank(s) == fin(0)) == (seq_support_bound(s) != UNBOUNDED)
