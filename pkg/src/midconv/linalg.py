"""Exact dense linear algebra over a FieldDescriptor.

Matrices act on row vectors from the right: the image of v under M is v*M.
Consequently kernel_basis returns the *left* kernel {v : v M = 0} and the
image of M is its row space.  Gaussian elimination picks the first nonzero
pivot, so every computed basis is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DoesNotSplit, FieldMismatch, PreconditionError
from .scalars import CYCLOTOMIC, FINITE, RATIONAL, FieldDescriptor, Scalar, parse_scalar

Row = tuple


def _to_scalar(field: FieldDescriptor, x) -> Scalar:
    if isinstance(x, Scalar):
        if x.field != field:
            raise FieldMismatch(f"{x.field} vs {field}")
        return x
    if isinstance(x, str):
        return parse_scalar(x, field)
    if isinstance(x, Fraction):
        return field.from_fraction(x)
    return field.from_int(x)


@dataclass(frozen=True)
class Matrix:
    field: FieldDescriptor
    rows: tuple[tuple[Scalar, ...], ...]

    @staticmethod
    def from_rows(field: FieldDescriptor, rows) -> "Matrix":
        return Matrix(field, tuple(tuple(_to_scalar(field, x) for x in r) for r in rows))

    @staticmethod
    def identity(field: FieldDescriptor, n: int) -> "Matrix":
        one, zero = field.one(), field.zero()
        return Matrix(field, tuple(tuple(one if i == j else zero for j in range(n))
                                   for i in range(n)))

    @staticmethod
    def zero(field: FieldDescriptor, m: int, n: int) -> "Matrix":
        z = field.zero()
        return Matrix(field, tuple((z,) * n for _ in range(m)))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def dim(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, tuple(tuple(a + b for a, b in zip(ra, rb))
                                        for ra, rb in zip(self.rows, other.rows)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, tuple(tuple(a - b for a, b in zip(ra, rb))
                                        for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, tuple(tuple(-a for a in r) for r in self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise FieldMismatch("matrix product across fields")
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch in matrix product")
        zero = self.field.zero()
        brows = other.rows
        ncols = other.ncols
        out = []
        for row in self.rows:
            acc = [zero] * ncols
            for t, a in enumerate(row):
                if a:
                    br = brows[t]
                    for j in range(ncols):
                        b = br[j]
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(tuple(acc))
        return Matrix(self.field, tuple(out))

    def scale(self, c: Scalar) -> "Matrix":
        return Matrix(self.field, tuple(tuple(c * a for a in r) for r in self.rows))

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.rows)))

    def minus_identity(self) -> "Matrix":
        one = self.field.one()
        return Matrix(self.field, tuple(tuple(a - one if i == j else a
                                              for j, a in enumerate(r))
                                        for i, r in enumerate(self.rows)))

    def pow(self, e: int) -> "Matrix":
        if e < 0:
            return self.inverse().pow(-e)
        out = Matrix.identity(self.field, self.nrows)
        base = self
        while e:
            if e & 1:
                out = out @ base
            base = base @ base
            e >>= 1
        return out

    def inverse(self) -> "Matrix":
        n = self.nrows
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        one, zero = self.field.one(), self.field.zero()
        aug = [list(r) + [one if i == j else zero for j in range(n)]
               for i, r in enumerate(self.rows)]
        for c in range(n):
            pr = next((r for r in range(c, n) if aug[r][c]), None)
            if pr is None:
                raise PreconditionError("matrix is singular")
            aug[c], aug[pr] = aug[pr], aug[c]
            pv = aug[c][c].inverse()
            aug[c] = [x * pv for x in aug[c]]
            prow = aug[c]
            for r in range(n):
                if r != c and aug[r][c]:
                    f = aug[r][c]
                    aug[r] = [x - f * y for x, y in zip(aug[r], prow)]
        return Matrix(self.field, tuple(tuple(r[n:]) for r in aug))

    def is_invertible(self) -> bool:
        return self.is_square() and rank(self) == self.nrows

    def det(self) -> Scalar:
        cp = char_poly(self)
        d = cp[0]
        return d if self.nrows % 2 == 0 else -d

    def trace(self) -> Scalar:
        t = self.field.zero()
        for i in range(self.nrows):
            t = t + self.rows[i][i]
        return t

    def __str__(self):
        return "\n".join(", ".join(str(a) for a in r) for r in self.rows)


def vec_mat(v: Row, M: Matrix) -> Row:
    """Image of the row vector v under M (v acts from the left: v*M)."""
    zero = M.field.zero()
    ncols = M.ncols
    acc = [zero] * ncols
    for t, a in enumerate(v):
        if a:
            br = M.rows[t]
            for j in range(ncols):
                b = br[j]
                if b:
                    acc[j] = acc[j] + a * b
    return tuple(acc)


# -- elimination ---------------------------------------------------------------

def _echelon(rows, reduced=True):
    """Row echelon form (in place on copies); returns (rows, pivot columns)."""
    M = [list(r) for r in rows if any(r)]
    if not M:
        return [], []
    ncols = len(M[0])
    piv = []
    r0 = 0
    for c in range(ncols):
        pr = next((r for r in range(r0, len(M)) if M[r][c]), None)
        if pr is None:
            continue
        M[r0], M[pr] = M[pr], M[r0]
        pv = M[r0][c].inverse()
        M[r0] = [x * pv if x else x for x in M[r0]]
        prow = M[r0]
        rng = range(len(M)) if reduced else range(r0 + 1, len(M))
        for r in rng:
            if r != r0 and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y if y else x for x, y in zip(M[r], prow)]
        piv.append(c)
        r0 += 1
        if r0 == len(M):
            break
    return [tuple(r) for r in M[:r0]], piv


def rank(M: Matrix) -> int:
    """Rank, by fraction-free elimination (no field inversions)."""
    rows = [list(r) for r in M.rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    r0 = 0
    for c in range(ncols):
        pr = next((r for r in range(r0, len(rows)) if rows[r][c]), None)
        if pr is None:
            continue
        rows[r0], rows[pr] = rows[pr], rows[r0]
        pv = rows[r0][c]
        prow = rows[r0]
        for r in range(r0 + 1, len(rows)):
            f = rows[r][c]
            if f:
                rows[r] = [pv * x - f * y if (x or y) else x
                           for x, y in zip(rows[r], prow)]
        rows = rows[:r0 + 1] + [r for r in rows[r0 + 1:] if any(r)]
        r0 += 1
        if r0 == len(rows):
            break
    return r0


def row_space_basis(rows) -> list[Row]:
    """Reduced-echelon basis of the span of the given row vectors."""
    return _echelon(rows)[0]


def kernel_basis(M: Matrix) -> list[Row]:
    """Exact basis of the left kernel {v : v M = 0}."""
    m, n = M.nrows, M.ncols
    if m == 0:
        return []
    cols = [[M.rows[i][j] for i in range(m)] for j in range(n)]
    E, piv = _echelon(cols)
    zero, one = M.field.zero(), M.field.one()
    basis = []
    for fc in range(m):
        if fc in piv:
            continue
        v = [zero] * m
        v[fc] = one
        for r, pc in enumerate(piv):
            v[pc] = -E[r][fc]
        basis.append(tuple(v))
    return basis


def in_span(basis, v) -> bool:
    before, _ = _echelon(basis)
    after, _ = _echelon(list(before) + [list(v)])
    return len(after) == len(before)


def solve_coords(basis, v):
    """Coefficients x with sum x_k basis_k = v, or None if v is outside."""
    m = len(basis)
    if m == 0:
        return [] if not any(v) else None
    n = len(v)
    aug = [[basis[k][c] for k in range(m)] + [v[c]] for c in range(n)]
    E, piv = _echelon(aug)
    x = [None] * m
    for r, pc in enumerate(piv):
        if pc == m:
            return None
        x[pc] = E[r][m]
    fld = basis[0][0].field
    return [c if c is not None else fld.zero() for c in x]


def intersect_row_spaces(B1, B2) -> list[Row]:
    """Basis of the intersection of two row spaces."""
    if not B1 or not B2:
        return []
    n = len(B1[0])
    fld = B1[0][0].field
    stacked = Matrix(fld, tuple(tuple(r) for r in list(B1) + list(B2)))
    out = []
    for coef in kernel_basis(stacked):
        v = [fld.zero()] * n
        for i in range(len(B1)):
            c = coef[i]
            if c:
                for j in range(n):
                    v[j] = v[j] + c * B1[i][j]
        out.append(tuple(v))
    return row_space_basis(out)


# -- characteristic polynomial and Jordan data ---------------------------------

def _is_triangular(M: Matrix) -> bool:
    n = M.nrows
    upper = all(not M.rows[i][j] for i in range(n) for j in range(i))
    if upper:
        return True
    return all(not M.rows[i][j] for i in range(n) for j in range(i + 1, n))


def char_poly(M: Matrix) -> list[Scalar]:
    """Monic characteristic polynomial det(x - M), ascending coefficients.

    Triangular matrices short-circuit to prod (x - d_i); the general case
    uses the division-free Berkowitz algorithm.
    """
    if not M.is_square():
        raise PreconditionError("characteristic polynomial of a non-square matrix")
    n = M.nrows
    field = M.field
    one, zero = field.one(), field.zero()
    if n == 0:
        return [one]
    if _is_triangular(M):
        poly = [one]
        for i in range(n):
            d = M.rows[i][i]
            poly = [zero] + poly
            for j in range(len(poly) - 1):
                poly[j] = poly[j] - d * poly[j + 1]
        return poly
    A = M.rows
    # Berkowitz: iterate over leading principal minors; vectors are descending.
    vec = [one, -A[0][0]]
    for i in range(1, n):
        R = A[i][:i]
        C = [A[j][i] for j in range(i)]
        q = [A[i][i]]
        w = C
        for _ in range(i):
            q.append(sum((rv * wv for rv, wv in zip(R, w)), zero))
            w = [sum((A[r][j] * wv for j, wv in enumerate(w) if wv), zero)
                 for r in range(i)]
        new = [zero] * (i + 2)
        for r in range(i + 2):
            acc = zero
            for c in range(min(r, i) + 1):
                if r == c:
                    acc = acc + vec[c]
                else:
                    acc = acc - q[r - c - 1] * vec[c]
            new[r] = acc
        vec = new
    return list(reversed(vec))


def poly_eval(coeffs, x: Scalar) -> Scalar:
    acc = x.field.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs, root: Scalar):
    """Divide a monic-or-not polynomial by (x - root); assumes exact."""
    out = [None] * (len(coeffs) - 1)
    carry = coeffs[-1]
    for i in range(len(coeffs) - 2, -1, -1):
        out[i] = carry
        carry = coeffs[i] + root * carry
    assert not carry
    return out


def _rational_candidates(int_coeffs: list[int]):
    """+- p/q with p | a_0, q | a_lead, for an integer polynomial."""
    lo = next((c for c in int_coeffs if c), None)
    if lo is None:
        return []
    hi = int_coeffs[-1]

    def divisors(m):
        m = abs(m)
        out = []
        f = 1
        while f * f <= m:
            if m % f == 0:
                out.append(f)
                out.append(m // f)
            f += 1
        return sorted(set(out))

    cands = {Fraction(0)}
    for pn in divisors(lo):
        for qd in divisors(hi):
            cands.add(Fraction(pn, qd))
            cands.add(Fraction(-pn, qd))
    return sorted(cands)


def field_roots(coeffs, field: FieldDescriptor):
    """All roots of the polynomial that lie in the field, with multiplicity.

    Returns (list of (root, multiplicity), remaining factor).  The search is
    exact and complete over Q and over finite fields; over Q(zeta_n) it tries
    rationals and the roots of unity of the field (which covers every
    eigenvalue appearing in this artifact), leaving anything else in the
    remainder.
    """
    coeffs = list(coeffs)
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    candidates: list[Scalar] = []
    if field.kind == FINITE:
        candidates = list(field.elements())
    elif field.kind == RATIONAL:
        den = 1
        for c in coeffs:
            den = den * c.payload.denominator // math.gcd(den, c.payload.denominator)
        ints = [int(c.payload * den) for c in coeffs]
        candidates = [field.from_fraction(f) for f in _rational_candidates(ints)]
    else:
        candidates = list(field.roots_of_unity()) + [field.zero()]
        rat = _cyclotomic_rational_candidates(coeffs, field)
        seen = {c.payload for c in candidates}
        for c in rat:
            if c.payload not in seen:
                seen.add(c.payload)
                candidates.append(c)
    candidates.sort(key=lambda s: s.sort_key())
    roots = []
    for cand in candidates:
        mult = 0
        while len(coeffs) > 1 and not poly_eval(coeffs, cand):
            coeffs = _deflate(coeffs, cand)
            mult += 1
        if mult:
            roots.append((cand, mult))
    return roots, coeffs


def _cyclotomic_rational_candidates(coeffs, field):
    phi = field.degree
    for j in range(phi):
        comp = []
        for c in coeffs:
            nums, den = c.payload
            comp.append(Fraction(nums[j], den))
        if any(comp):
            den = 1
            for f in comp:
                den = den * f.denominator // math.gcd(den, f.denominator)
            ints = [int(f * den) for f in comp]
            return [field.from_fraction(f) for f in _rational_candidates(ints)]
    return []


@dataclass(frozen=True)
class JordanData:
    """Multiset of Jordan blocks (eigenvalue, length) plus ambient dimension."""

    blocks: tuple[tuple[Scalar, int], ...]
    ambient_dim: int

    @staticmethod
    def of(blocks, ambient_dim=None) -> "JordanData":
        blocks = tuple(sorted(blocks, key=lambda b: (b[0].sort_key(), b[1])))
        if ambient_dim is None:
            ambient_dim = sum(n for _, n in blocks)
        assert sum(n for _, n in blocks) == ambient_dim
        return JordanData(blocks, ambient_dim)

    def counts(self):
        out = {}
        for ev, n in self.blocks:
            out[(ev, n)] = out.get((ev, n), 0) + 1
        return out

    def __str__(self):
        parts = []
        for (ev, n), c in sorted(self.counts().items(),
                                 key=lambda kv: (kv[0][0].sort_key(), kv[0][1])):
            s = f"J({ev},{n})"
            parts.append(s if c == 1 else f"{c}*{s}")
        return " + ".join(parts) if parts else "(empty)"


def jordan_block(field: FieldDescriptor, alpha: Scalar, n: int) -> Matrix:
    """Explicit Jordan block: alpha on the diagonal, ones above it."""
    one, zero = field.one(), field.zero()
    return Matrix(field, tuple(tuple(alpha if i == j else one if j == i + 1 else zero
                                     for j in range(n)) for i in range(n)))


def jordan_data(M: Matrix) -> JordanData:
    """Jordan block multiset of an invertible matrix that splits over its field.

    Raises DoesNotSplit (carrying the offending factor) when an eigenvalue
    lies outside the declared field; the caller may retry over a larger
    cyclotomic field.
    """
    if not M.is_square():
        raise PreconditionError("jordan_data needs a square matrix")
    n = M.nrows
    field = M.field
    if _is_triangular(M):
        eigs: dict = {}
        for i in range(n):
            d = M.rows[i][i]
            eigs[d.payload] = (d, eigs.get(d.payload, (d, 0))[1] + 1)
        if any(not ev for ev, _ in eigs.values()):
            raise PreconditionError("jordan_data needs an invertible matrix")
        roots = sorted(eigs.values(), key=lambda t: t[0].sort_key())
    else:
        cp = char_poly(M)
        if not cp[0]:
            raise PreconditionError("jordan_data needs an invertible matrix")
        found, rem = field_roots(cp, field)
        if len(rem) > 1:
            raise DoesNotSplit(rem)
        roots = found
    blocks = []
    for alpha, mult in roots:
        if mult == 1:
            blocks.append((alpha, 1))
            continue
        N = M - Matrix.identity(field, n).scale(alpha)
        ranks = [n]
        P = N
        while n - rank(P) < mult:
            ranks.append(rank(P))
            P = P @ N
        ranks.append(rank(P))
        ge = [ranks[k] - ranks[k + 1] for k in range(len(ranks) - 1)]
        for size in range(len(ge), 0, -1):
            cnt = ge[size - 1] - (ge[size] if size < len(ge) else 0)
            blocks.extend([(alpha, size)] * cnt)
    return JordanData.of(blocks, n)


def kronecker(A: Matrix, B: Matrix) -> Matrix:
    """Kronecker product on the basis e_i (x) f_j, lexicographic in (i, j)."""
    if A.field != B.field:
        raise FieldMismatch("kronecker across fields")
    na, nb = A.nrows, B.nrows
    out = []
    for i in range(na):
        for k in range(nb):
            row = []
            for j in range(A.ncols):
                a = A.rows[i][j]
                row.extend(a * b for b in B.rows[k])
            out.append(tuple(row))
    return Matrix(A.field, tuple(out))


def kronecker_jordan(alpha: Scalar, n1: int, beta: Scalar, n2: int) -> JordanData:
    """Jordan type of J(alpha,n1) (x) J(beta,n2) in characteristic zero."""
    if n1 > n2:
        raise PreconditionError("kronecker_jordan needs n1 <= n2")
    if not alpha or not beta:
        raise PreconditionError("kronecker_jordan needs nonzero eigenvalues")
    if alpha.field != beta.field:
        raise FieldMismatch("eigenvalues in different fields")
    if alpha.field.characteristic != 0:
        raise PreconditionError("kronecker_jordan is a characteristic-zero statement")
    prod = alpha * beta
    return JordanData.of([(prod, n1 + n2 - 1 - 2 * i) for i in range(n1)], n1 * n2)


def conjugacy_solve(TA: list[Matrix], TB: list[Matrix]) -> Matrix | None:
    """Invertible S with S^-1 TA_i S = TB_i for all i, or None.

    Solves the linear system TA_i X = X TB_i and scans the solution space in
    a deterministic order for an invertible element.  For absolutely
    irreducible tuples the space has dimension <= 1, so the first basis
    vector decides.
    """
    if len(TA) != len(TB):
        return None
    if not TA:
        return None
    field = TA[0].field
    d = TA[0].nrows
    if any(M.nrows != d or M.ncols != d for M in list(TA) + list(TB)):
        return None
    zero = field.zero()
    eqs = []
    for A, B in zip(TA, TB):
        for a in range(d):
            for b in range(d):
                coef = [zero] * (d * d)
                for c in range(d):
                    coef[c * d + b] = coef[c * d + b] + A.rows[a][c]
                    coef[a * d + c] = coef[a * d + c] - B.rows[c][b]
                eqs.append(tuple(coef))
    # right kernel of the equation matrix = left kernel of its transpose
    m = len(eqs)
    Mt = Matrix(field, tuple(tuple(eqs[r][c] for r in range(m)) for c in range(d * d)))
    K = kernel_basis(Mt)

    def as_matrix(v):
        return Matrix(field, tuple(tuple(v[a * d + b] for b in range(d)) for a in range(d)))

    candidates = list(K)
    acc = None
    for v in K:
        acc = v if acc is None else tuple(x + y for x, y in zip(acc, v))
        candidates.append(acc)
    seen = set()
    for v in candidates:
        if v in seen:
            continue
        seen.add(v)
        S = as_matrix(v)
        if S.is_invertible():
            return S
    return None
