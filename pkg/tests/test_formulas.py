import random

import pytest
from hypothesis import given, settings, strategies as st

from isotype import randomgen as rg
from isotype.concrete import StandardGroup
from isotype.formulas import (
    TRUE,
    And,
    Div,
    Eq,
    Exists,
    Forall,
    FormulaSyntaxError,
    Not,
    Term,
    classify,
    format_formula,
    free_vars,
    is_pp,
    parse,
    pp_eliminate,
    pp_holds,
    pp_normalize,
)
from isotype.errors import InputError
from isotype.oracle import FiniteAbelian, oracle_eval, oracle_eval_table
from isotype.smith import matmul
from isotype.typecalc import profile_of

x, y, z = (Term.of({v: 1}) for v in "xyz")


def test_parse_examples():
    assert parse("A x. x + x = 0") == Forall("x", Eq(x.scale(2)))
    assert parse("E y. 2*y = x") == Exists("y", Eq(y.scale(2) - x))
    assert parse("4 | 2*x + -1*z") == Div(4, x.scale(2) - z)
    assert free_vars(parse("E y. 2*y = x")) == {"x"}


def test_precedence_and_sugar():
    phi = parse("x = 0 & y = 0 v z = 0 -> 2 | x")
    assert format_formula(phi) == "((x = 0 & y = 0) v z = 0) -> 2 | x"
    assert parse("!!x = 0") == Not(Not(Eq(x)))
    assert parse("x - y = 0") == parse("x = y")
    assert parse("0 = 0") == TRUE


def test_syntax_errors_have_positions():
    with pytest.raises(FormulaSyntaxError) as e:
        parse("E y.\n 2*y = = x")
    assert (e.value.line, e.value.col) == (2, 8)
    for bad in ["", "x =", "E . x = 0", "0 | x", "x ~ y", "(x = 0"]:
        with pytest.raises(InputError):
            parse(bad)


@given(st.integers(0, 2 ** 32))
def test_format_roundtrip(seed):
    rng = random.Random(seed)
    phi = rg.pp_formula(rng, ["x1", "x2"])
    text = format_formula(phi)
    assert format_formula(parse(text)) == text


def test_normalize_examples():
    assert format_formula(pp_normalize(parse("E y. 2*y = x"))) == "2 | x"
    assert pp_normalize(parse("E y. y = y")) == TRUE
    assert format_formula(pp_normalize(parse("E y. (x = 2*y & 4 | y)"))) == "8 | x"
    assert format_formula(pp_normalize(parse("6 | x"))) == "2 | x & 3 | x"


def test_normalize_example_against_oracle():
    phi = parse("E y. (x = 2*y & 4 | y)")
    nf = pp_normalize(phi)
    for k in range(1, 6):
        F = FiniteAbelian((2 ** k,))
        assert (oracle_eval_table(F, phi, ["x"]) == oracle_eval_table(F, nf, ["x"])).all()


@given(st.integers(0, 2 ** 32))
def test_certificate(seed):
    rng = random.Random(seed)
    e = pp_eliminate(rg.pp_formula(rng, ["x1", "x2"]))
    if e.U:
        assert matmul(matmul(e.U, e.bound_block), e.V) == [list(r) for r in e.S]
    assert free_vars(e.formula()) <= set(e.free)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_normalize_sound_small(seed):
    rng = random.Random(seed)
    phi = rg.pp_formula(rng, ["x1"], max_bound=2)
    nf = pp_normalize(phi)
    assert free_vars(nf) <= {"x1"}
    F = rg.finite_abelian(rng, 48)
    assert (oracle_eval_table(F, phi, ["x1"]) == oracle_eval_table(F, nf, ["x1"])).all()


def test_pp_holds_examples():
    Z4 = StandardGroup(2, 0, (2,))
    assert pp_holds(profile_of(Z4, [Z4.zero()]), parse("x1 = 0"))
    assert not pp_holds(profile_of(Z4, [Z4.element(cyc=(1,))]), parse("2 | x1"))
    P = profile_of(Z4, [Z4.element(cyc=(2,))])
    assert pp_holds(P, parse("E y. 2*y = x1"))
    assert oracle_eval(Z4, parse("E y. 2*y = x1"), {"x1": Z4.element(cyc=(2,))})
    assert pp_holds(P, parse("3 | x1"))
    with pytest.raises(InputError):
        pp_holds(P, parse("x1 = x2"))
    with pytest.raises(InputError):
        pp_holds(P, parse("x1 = 0"), ["x1", "x2"])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_pp_holds_matches_oracle(seed):
    rng = random.Random(seed)
    p = rng.choice((2, 3))
    G = rg.finite_pgroup(rng, p, 64, 3)
    t = [rg.element(rng, G) for _ in range(2)]
    phi = rg.pp_formula(rng, ["x1", "x2"], max_bound=2, primes=(p, p, 5))
    assert pp_holds(profile_of(G, t), phi) == oracle_eval(G, phi, {"x1": t[0], "x2": t[1]})


def test_classify_examples():
    assert classify(parse("E y. 2*y=x")).kind == "pp"
    assert is_pp(parse("E y. 2*y=x"))
    c = classify(parse("!(E y. 2*y=x)"))
    assert c.kind == "boolean" and c.pp_cores == (parse("E y. 2*y=x"),)
    s = classify(parse("A x. E y. 2*y=x"))
    assert s.forall_exists == (parse("A x. E y. 2*y=x"),)
    assert "forall-exists sentence" in s.report()
