"""Smith normal form over the integers with the unimodular transforms kept.

``smith_normal_form(A)`` returns ``(S, U, V)`` with ``U * A * V == S``,
``U`` and ``V`` unimodular, and ``S`` diagonal with d_1 | d_2 | ... and
nonnegative entries.  Matrices are lists of lists of Python ints.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(cols)] for i in range(len(A))]


def _swap_rows(M: Matrix, i: int, j: int):
    M[i], M[j] = M[j], M[i]


def _swap_cols(M: Matrix, i: int, j: int):
    for row in M:
        row[i], row[j] = row[j], row[i]


def _add_row(M: Matrix, src: int, dst: int, c: int):
    # row dst += c * row src
    if c:
        M[dst] = [a + c * b for a, b in zip(M[dst], M[src])]


def _add_col(M: Matrix, src: int, dst: int, c: int):
    if c:
        for row in M:
            row[dst] += c * row[src]


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int = None) -> Tuple[Matrix, Matrix, Matrix]:
    S = [list(map(int, row)) for row in A]
    m = len(S)
    n = len(S[0]) if S else (ncols or 0)
    U, V = identity(m), identity(n)
    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero absolute value in the remaining block
        nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        _swap_rows(S, t, i)
        _swap_rows(U, t, i)
        _swap_cols(S, t, j)
        _swap_cols(V, t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                q = S[i][t] // S[t][t]
                _add_row(S, t, i, -q)
                _add_row(U, t, i, -q)
                if S[i][t]:
                    _swap_rows(S, t, i)
                    _swap_rows(U, t, i)
                    done = False
            for j in range(t + 1, n):
                q = S[t][j] // S[t][t]
                _add_col(S, t, j, -q)
                _add_col(V, t, j, -q)
                if S[t][j]:
                    _swap_cols(S, t, j)
                    _swap_cols(V, t, j)
                    done = False
            if done:
                # the pivot must divide the rest of the block
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % S[t][t]), None
                )
                if bad is not None:
                    _add_row(S, bad[0], t, 1)
                    _add_row(U, bad[0], t, 1)
                    done = False
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return S, U, V


def invariant_factors(A: Sequence[Sequence[int]]) -> List[int]:
    S, _, _ = smith_normal_form(A)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i]]
