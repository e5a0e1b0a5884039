from fractions import Fraction

import pytest

from midconv.errors import SmallPrime, VerificationFailed
from midconv.fixtures import ALPHA_TABLE, N_TABLE, T2_TABLE, T_TABLE
from midconv.k3count import (count_affine, count_record, frobenius_eigenvalues,
                             intersection_matrix, intersection_matrix_det,
                             legendre, trace_frobenius)


def test_legendre_examples():
    assert legendre(-1, 5) == 1
    assert legendre(-1, 7) == -1
    assert legendre(3, 11) == 1
    assert legendre(55, 11) == 0


def test_legendre_on_prime_squares():
    assert legendre(-1, 25) == 1
    assert legendre(5, 25) == 0
    assert legendre(3, 49) == 1


def test_legendre_multiplicative(rng):
    p = 23
    for _ in range(30):
        a, b = rng.randint(1, 100), rng.randint(1, 100)
        assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)


def _naive_count(q):
    """Triple-loop oracle over F_p (p prime only)."""
    n = 0
    for w in range(q):
        for x in range(q):
            for y in range(q):
                lhs = w * w % q
                rhs = (x * x - 1) * ((y - x) ** 2 - 1) % q * (y - 1) % q
                if lhs == rhs:
                    n += 1
    return n


@pytest.mark.parametrize("q", [5, 7])
def test_count_matches_naive_oracle(q):
    assert count_affine(q) == _naive_count(q)


def test_count_table():
    for q, n in N_TABLE.items():
        assert count_affine(q) == n


def test_trace_table_primes():
    for p, t in T_TABLE.items():
        assert trace_frobenius(p) == t


@pytest.mark.parametrize("p", [5, 7, 11])
def test_trace_table_prime_squares_small(p):
    assert trace_frobenius(p * p) == T2_TABLE[p]


def test_count_rejects_small_primes():
    with pytest.raises(SmallPrime):
        count_affine(3)
    with pytest.raises(SmallPrime):
        count_affine(9)


def test_character_sum_decomposition():
    # N(q) = q^2 + sum chi(f), with the sum taken independently here
    for q in (5, 7, 11):
        total = 0
        for x in range(q):
            for y in range(q):
                f = (x * x - 1) * ((y - x) ** 2 - 1) * (y - 1) % q
                total += legendre(f, q)
        n = count_affine(q)
        assert n == q * q + total
        assert n % 2 == (q * q + total) % 2


def test_frobenius_eigenvalues_table():
    for p, (u, d) in ALPHA_TABLE.items():
        data = frobenius_eigenvalues(p)
        assert data.u == u and data.d == d
        assert data.verified
        assert data.s3 == legendre(3, p)
        assert data.u ** 2 - data.d == p * p


def test_frobenius_sign_candidates_are_exclusive():
    # the rejected sign must fail the t_{p^2} identity for every table prime
    for p in ALPHA_TABLE:
        t_p = trace_frobenius(p)
        t_p2 = trace_frobenius(p * p)
        s3 = legendre(3, p)
        wrong_u = Fraction(t_p + s3 * p, 2)
        assert 4 * wrong_u ** 2 - p * p != t_p2


def test_nonsquare_q_rejected():
    with pytest.raises(Exception):
        count_affine(15)


def test_intersection_matrix_shape():
    M = intersection_matrix(7)
    assert len(M) == 19 and all(len(r) == 19 for r in M)
    assert all(M[i][j] == M[j][i] for i in range(19) for j in range(19))
    assert M[17][18] == 7
    assert all(M[i][i] == -2 for i in range(19))


def test_intersection_determinant():
    c0, c1, c2 = intersection_matrix_det()
    assert (c0, c1, c2) == (16384, 24576, 8192)
    assert c0 == 16384                       # value at x = 0
    assert c0 - c1 + c2 == 0                 # x = -1 is the degenerate value
