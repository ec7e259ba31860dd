from hypothesis import given, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from isotype.smith import identity, invariant_factors, matmul, smith_normal_form

matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-12, 12), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def _det(M):
    return int(Matrix(M).det())


def test_small_example():
    A = [[2, 4], [6, 8]]
    S, U, V = smith_normal_form(A)
    assert S == [[2, 0], [0, 4]]
    assert matmul(matmul(U, A), V) == S
    assert invariant_factors(A) == [2, 4]


def test_zero_and_identity():
    assert invariant_factors([[0, 0], [0, 0]]) == []
    S, U, V = smith_normal_form(identity(3))
    assert S == identity(3)


@given(matrices)
def test_factorisation(A):
    S, U, V = smith_normal_form(A)
    assert matmul(matmul(U, A), V) == S
    assert abs(_det(U)) == 1 and abs(_det(V)) == 1
    diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
    for i, row in enumerate(S):
        for j, v in enumerate(row):
            if i != j:
                assert v == 0
    assert all(v >= 0 for v in diag)
    for x, y in zip(diag, diag[1:]):
        assert (x == 0 and y == 0) or (x != 0 and y % x == 0)


@given(matrices)
def test_matches_sympy(A):
    ref = sympy_snf(Matrix(A), domain=ZZ)
    ref_diag = [abs(int(ref[i, i])) for i in range(min(ref.shape))]
    assert invariant_factors(A) == [v for v in ref_diag if v]
