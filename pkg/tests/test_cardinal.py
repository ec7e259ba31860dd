import pytest
from hypothesis import given, strategies as st

from isotype.cardinal import INF, ZERO, Cardinal, as_cardinal, card_add, card_geq, card_sum, fin, parse_cardinal
from isotype.errors import InputError

cardinals = st.one_of(st.just(INF), st.integers(0, 10 ** 30).map(fin))


def test_add_examples():
    assert card_add(fin(2), fin(3)) == fin(5)
    assert card_add(INF, fin(0)) == INF
    assert card_add(fin(1), INF) == INF


def test_sum_examples():
    assert card_sum([]) == fin(0)
    assert card_sum([fin(1), fin(1), fin(2)]) == fin(4)
    assert card_sum([fin(7), INF]) == INF


def test_geq_examples():
    assert card_geq(INF, fin(1000))
    assert not card_geq(fin(3), fin(4))
    assert card_geq(fin(0), fin(0))
    assert not card_geq(fin(5), INF)
    assert card_geq(INF, INF)


def test_equality_and_text():
    assert fin(3) == Cardinal(3)
    assert fin(3) != INF
    assert str(INF) == "inf" and str(fin(12)) == "12"
    assert parse_cardinal(" inf ") == INF
    assert parse_cardinal("7") == fin(7)
    assert as_cardinal(4) == fin(4) and as_cardinal(None) == INF and as_cardinal(float("inf")) == INF
    assert not ZERO and fin(1) and INF


@pytest.mark.parametrize("bad", ["", "-1", "x", "1.5", "infinity?"])
def test_parse_rejects(bad):
    with pytest.raises(InputError):
        parse_cardinal(bad)


def test_negative_rejected():
    with pytest.raises(ValueError):
        fin(-1)


@given(cardinals, cardinals, cardinals)
def test_add_commutative_associative(a, b, c):
    assert card_add(a, b) == card_add(b, a)
    assert card_add(card_add(a, b), c) == card_add(a, card_add(b, c))


@given(cardinals, cardinals)
def test_geq_total_order(a, b):
    assert card_geq(a, b) or card_geq(b, a)
    if card_geq(a, b) and card_geq(b, a):
        assert a == b
    assert card_geq(INF, a)


@given(st.lists(cardinals, max_size=8))
def test_sum_inf_iff_some_entry_inf(xs):
    assert card_sum(xs).is_inf == any(x.is_inf for x in xs)
    if not any(x.is_inf for x in xs):
        assert card_sum(xs) == fin(sum(x.n for x in xs))
