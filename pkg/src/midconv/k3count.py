"""Point counting on the K3 fibre, Frobenius traces and eigenvalues.

The affine model is w^2 = f(x, y) with f = (x^2-1)((y-x)^2-1)(y-z) at the
fibre z = 1, counted over F_q for q = p or p^2 via the quadratic character:
N(q) = q^2 + sum chi(f).  The inner loop runs on raw integer coordinates;
the F_{p^2} model (t^2 = least non-residue) matches exact-scalars' default
descriptor and evaluates chi through the norm map.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError, SmallPrime, VerificationFailed
from .scalars import FieldDescriptor, is_prime


def legendre(a: int, p: int) -> int:
    """Legendre symbol by Euler's criterion; extended to q = p^2 by squaring."""
    if is_prime(p):
        r = pow(a % p, (p - 1) // 2, p)
        return -1 if r == p - 1 else r
    root = _prime_square_root(p)
    if root is not None:
        return legendre(a, root) ** 2
    raise PreconditionError(f"{p} is neither an odd prime nor its square")


def _prime_square_root(q: int) -> int | None:
    r = int(round(q ** 0.5))
    for cand in (r - 1, r, r + 1):
        if cand > 1 and cand * cand == q and is_prime(cand):
            return cand
    return None


def _split_q(q: int) -> tuple[int, int]:
    """(p, exponent) for q = p or p^2, requiring p > 3."""
    if is_prime(q):
        p, e = q, 1
    else:
        p = _prime_square_root(q)
        if p is None:
            raise PreconditionError(f"q = {q} must be p or p^2")
        e = 2
    if p <= 3:
        raise SmallPrime(f"the trace formula needs p > 3, got p = {p}")
    return p, e


def count_affine(q: int, z: Fraction = Fraction(1)) -> int:
    """N(q) = #{(w,x,y) : w^2 = (x^2-1)((y-x)^2-1)(y-z)} over F_q.

    Computed as q^2 + sum over (x, y) of chi(f(x, y)); the x-slices are
    accumulated independently, so partial sums combine associatively.
    """
    p, e = _split_q(q)
    if z.denominator % p == 0:
        raise PreconditionError(f"fibre z = {z} is not p-integral")
    chi_p = [0] * p
    for a in range(1, p):
        chi_p[a] = 1 if pow(a, (p - 1) // 2, p) == 1 else -1
    zres = z.numerator * pow(z.denominator, -1, p) % p
    total = 0
    if e == 1:
        for x in range(p):
            a = (x * x - 1) % p
            if a == 0:
                continue
            sub = 0
            for y in range(p):
                d = y - x
                v = a * (d * d - 1) % p * (y - zres) % p
                sub += chi_p[v]
            total += sub
        return q * q + total
    # F_{p^2} as pairs (u, v) = u + v t, t^2 = c with c the least non-residue
    c = -FieldDescriptor.finite(p, 2).poly[0] % p
    one = (1, 0)
    pairs = [(u, v) for v in range(p) for u in range(p)]

    def sub_one(a):
        return ((a[0] - 1) % p, a[1])

    def mul2(a, b):
        return ((a[0] * b[0] + c * a[1] * b[1]) % p,
                (a[0] * b[1] + a[1] * b[0]) % p)

    def chi2(a):
        # chi(a) = chi_p(Norm(a)); Norm(u + vt) = u^2 - c v^2
        return chi_p[(a[0] * a[0] - c * a[1] * a[1]) % p]

    zel = (zres, 0)
    for x in pairs:
        a = sub_one(mul2(x, x))
        if a == (0, 0):
            continue
        sub = 0
        for y in pairs:
            d = ((y[0] - x[0]) % p, (y[1] - x[1]) % p)
            g = mul2(a, sub_one(mul2(d, d)))
            h = ((y[0] - zel[0]) % p, y[1])
            sub += chi2(mul2(g, h))
        total += sub
    return q * q + total


@dataclass(frozen=True)
class CountRecord:
    q: int
    N: int
    trace: Fraction


def trace_frobenius(q: int, z: Fraction = Fraction(1)) -> Fraction:
    """t_q = N(q) + q - q^2 - (1 + (-1/q)) q."""
    return count_record(q, z).trace


def count_record(q: int, z: Fraction = Fraction(1)) -> CountRecord:
    n = count_affine(q, z)
    t = Fraction(n + q - q * q - (1 + legendre(-1, q)) * q)
    return CountRecord(q=q, N=n, trace=t)


@dataclass(frozen=True)
class FrobeniusData:
    p: int
    s3: int
    s_minus1: int
    u: Fraction
    d: Fraction
    verified: bool

    @property
    def eigenvalue_text(self) -> str:
        if self.d == 0:
            return str(Fraction(self.u, self.p))
        return f"({self.u}+sqrt({self.d}))/{self.p}"


def frobenius_eigenvalues(p: int) -> FrobeniusData:
    """Solve alpha + alpha^-1 + (3/p) = t_p/p and verify against t_{p^2}.

    alpha_p = (u + sqrt(d))/p with u = (t_p - (3/p) p)/2 and d = u^2 - p^2,
    so alpha_p has unit norm; the choice of the sign (3/p) is confirmed by
    alpha^2 + alpha^-2 + 1 = t_{p^2}/p^2, which reduces to 4u^2 - p^2 = t_{p^2}.
    """
    if not is_prime(p) or p <= 3:
        raise SmallPrime("need a prime p > 3")
    t_p = trace_frobenius(p)
    t_p2 = trace_frobenius(p * p)
    s3 = legendre(3, p)

    def u_for(sign):
        return Fraction(t_p - sign * p, 2)

    chosen = u_for(s3)
    ok = 4 * chosen * chosen - p * p == t_p2
    other_ok = 4 * u_for(-s3) ** 2 - p * p == t_p2
    if not ok and not other_ok:
        raise VerificationFailed(f"t_(p^2) check fails for both signs at p={p}")
    if not ok:
        raise VerificationFailed(
            f"t_(p^2) check contradicts the Legendre sign (3/{p})={s3}")
    return FrobeniusData(p=p, s3=s3, s_minus1=legendre(-1, p),
                         u=chosen, d=chosen * chosen - p * p, verified=ok)


# -- the Neron-Severi intersection determinant -----------------------------------

def intersection_matrix(x) -> list[list]:
    """The 19x19 intersection matrix of the resolution divisors; x is the
    intersection number of the two components over the line y = 0."""
    M = [[0] * 19 for _ in range(19)]
    for i in range(19):
        M[i][i] = -2
    for i in range(3):                 # the three double-point curves met by both
        M[i][17] = M[17][i] = 1
        M[i][18] = M[18][i] = 1
    for j in (10, 11, 12):             # first triple point: hub 10 meets 11,12,13
        M[9][j] = M[j][9] = 1
    for j in (14, 15, 16):             # second triple point: hub 14 meets 15,16,17
        M[13][j] = M[j][13] = 1
    M[17][18] = M[18][17] = x
    return M


def _int_det_bareiss(M: list[list[int]]) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    A = [row[:] for row in M]
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if A[r][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def intersection_matrix_det() -> tuple[int, int, int]:
    """det of the intersection matrix as a polynomial (c0, c1, c2) in x.

    x enters the matrix in exactly two entries, so the determinant is a
    quadratic; three integer evaluations determine it exactly.
    """
    d0 = _int_det_bareiss(intersection_matrix(0))
    d1 = _int_det_bareiss(intersection_matrix(1))
    dm1 = _int_det_bareiss(intersection_matrix(-1))
    c0 = d0
    c2, rem = divmod(d1 + dm1 - 2 * d0, 2)
    assert rem == 0
    c1 = d1 - d0 - c2
    return (c0, c1, c2)
