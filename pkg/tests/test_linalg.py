from fractions import Fraction

import pytest

from midconv.errors import DoesNotSplit, FieldMismatch
from midconv.fixtures import m_tuple
from midconv.linalg import (JordanData, Matrix, char_poly, conjugacy_solve,
                            field_roots, jordan_block, jordan_data, kernel_basis,
                            kronecker, kronecker_jordan, rank)
from midconv.scalars import FieldDescriptor

from conftest import Q, random_invertible

Z4 = FieldDescriptor.cyclotomic(4)
Z12 = FieldDescriptor.cyclotomic(12)

A1 = Matrix.from_rows(Q, [[-3, -8], [2, 5]])


def test_kernel_of_zero_matrix():
    assert len(kernel_basis(Matrix.zero(Q, 2, 2))) == 2


def test_kernel_of_unipotent_fixture():
    assert len(kernel_basis(A1.minus_identity())) == 1


def test_kernel_of_identity():
    assert kernel_basis(Matrix.identity(Q, 3)) == []


def test_char_poly_of_m1_m2():
    V = m_tuple()
    M12 = V.entries[0] @ V.entries[1]
    # (x - 1)(x^2 - 6x + 1) = x^3 - 7x^2 + 7x - 1
    assert char_poly(M12) == [Q.from_int(c) for c in (-1, 7, -7, 1)]


def test_char_poly_identity():
    cp = char_poly(Matrix.identity(Q, 3))
    assert cp == [Q.from_int(c) for c in (-1, 3, -3, 1)]


def test_char_poly_companion():
    C = Matrix.from_rows(Q, [[0, 1], [-1, 0]])
    assert char_poly(C) == [Q.from_int(c) for c in (1, 0, 1)]


def test_char_poly_matches_berkowitz_on_triangular(rng):
    # the triangular fast path must agree with the generic algorithm
    M = Matrix.from_rows(Q, [[1, 2, 3], [0, 4, 5], [0, 0, 6]])
    S = random_invertible(Q, 3, rng)
    assert char_poly(M) == char_poly(S.inverse() @ M @ S)


def test_jordan_of_fixture_entry():
    assert jordan_data(A1) == JordanData.of([(Q.one(), 2)])
    # independent nilpotency check
    N = A1.minus_identity()
    assert rank(N) == 1 and rank(N @ N) == 0


def test_jordan_diag_over_z4():
    i = Z4.zeta()
    M = Matrix(Z4, ((i, Z4.zero()), (Z4.zero(), -i)))
    assert jordan_data(M) == JordanData.of([(i, 1), (-i, 1)])


def test_jordan_minus_identity():
    M = Matrix.from_rows(Q, [[-1, 0], [0, -1]])
    assert jordan_data(M) == JordanData.of([(-Q.one(), 1), (-Q.one(), 1)])


def test_jordan_does_not_split():
    V = m_tuple()
    M12 = V.entries[0] @ V.entries[1]
    with pytest.raises(DoesNotSplit) as exc:
        jordan_data(M12)
    # the leftover factor is x^2 - 6x + 1
    assert [c.payload for c in exc.value.factor] == [1, -6, 1]


def test_jordan_conjugation_invariant(rng):
    for _ in range(5):
        M = random_invertible(Q, 3, rng)
        S = random_invertible(Q, 3, rng)
        try:
            jd = jordan_data(M)
        except DoesNotSplit:
            continue
        assert jordan_data(S.inverse() @ M @ S) == jd


def test_field_roots_rational():
    # (x-2)(x+1/3) * 3 = 3x^2 - 5x - 6 ... build directly
    poly = [Q.from_fraction(Fraction(-2, 3)),
            Q.from_fraction(Fraction(-5, 3)), Q.one()]
    roots, rem = field_roots(poly, Q)
    assert len(rem) == 1
    assert {r.payload for r, _ in roots} == {2, Fraction(-1, 3)}


def test_kronecker_factors_commute(rng):
    A = random_invertible(Q, 2, rng)
    B = random_invertible(Q, 2, rng)
    I2 = Matrix.identity(Q, 2)
    assert kronecker(A, I2) @ kronecker(I2, B) == kronecker(I2, B) @ kronecker(A, I2)
    assert kronecker(A, I2) @ kronecker(I2, B) == kronecker(A, B)


def test_kronecker_scalar_factor():
    B = Matrix.from_rows(Q, [[1, 2], [3, 4]])
    minus = Matrix.from_rows(Q, [[-1]])
    assert kronecker(minus, B) == -B


def test_kronecker_diag():
    D1 = Matrix.from_rows(Q, [[2, 0], [0, 3]])
    D2 = Matrix.from_rows(Q, [[5, 0], [0, 7]])
    K = kronecker(D1, D2)
    assert [K[k, k].payload for k in range(4)] == [10, 14, 15, 21]


def test_kronecker_trace_det(rng):
    A = random_invertible(Q, 2, rng)
    B = random_invertible(Q, 3, rng)
    K = kronecker(A, B)
    assert K.trace() == A.trace() * B.trace()
    assert K.det() == A.det() ** 3 * B.det() ** 2


def test_kronecker_jordan_examples():
    one = Q.one()
    beta = Q.from_int(5)
    assert kronecker_jordan(one, 1, beta, 3) == JordanData.of([(beta, 3)])
    a, b = Q.from_int(2), Q.from_int(3)
    assert kronecker_jordan(a, 2, b, 2) == JordanData.of([(a * b, 3), (a * b, 1)])
    assert kronecker_jordan(a, 2, b, 3) == JordanData.of([(a * b, 4), (a * b, 2)])


def test_kronecker_jordan_small_oracle():
    i = Z4.zeta()
    for n1 in range(1, 4):
        for n2 in range(n1, 4):
            for a in (Z4.one(), i, -Z4.one(), -i):
                for b in (i, -i):
                    lhs = kronecker_jordan(a, n1, b, n2)
                    rhs = jordan_data(kronecker(jordan_block(Z4, a, n1),
                                                jordan_block(Z4, b, n2)))
                    assert lhs == rhs


def test_rank_nullity(rng):
    for _ in range(10):
        M = Matrix.from_rows(Q, [[rng.randint(-2, 2) for _ in range(4)] for _ in range(3)])
        assert rank(M) + len(kernel_basis(M)) == M.nrows


def test_conjugacy_solve_identity_case():
    T = [A1, Matrix.from_rows(Q, [[1, -4], [0, 1]])]
    S = conjugacy_solve(T, T)
    assert S is not None
    assert all(S.inverse() @ M @ S == M for M in T)


def test_conjugacy_solve_constructed(rng):
    V = m_tuple()
    S0 = random_invertible(Q, 3, rng)
    TB = [S0.inverse() @ M @ S0 for M in V.entries]
    S = conjugacy_solve(list(V.entries), TB)
    assert S is not None
    assert all(S.inverse() @ A @ S == B for A, B in zip(V.entries, TB))


def test_conjugacy_solve_distinguishes_spectra():
    TA = [Matrix.from_rows(Q, [[1, 0], [0, -1]])]
    TB = [Matrix.from_rows(Q, [[-1, 0], [0, -1]])]
    assert conjugacy_solve(TA, TB) is None


def test_matrix_field_mismatch():
    with pytest.raises(FieldMismatch):
        Matrix.identity(Q, 2) @ Matrix.identity(Z4, 2)
