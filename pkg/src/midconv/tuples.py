"""Monodromy tuples, braid actions, cocycle automorphisms, parabolic cohomology.

A monodromy tuple is (T_1, ..., T_{r+1}) with T_1 ... T_{r+1} = 1; entry i
(i <= r) is the monodromy around the i-th finite point, the last entry the
monodromy at infinity.  Braid words act left-to-right on the first r entries
and conjugation is x^y = y^-1 x y throughout.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, PreconditionError
from .linalg import (Matrix, in_span, intersect_row_spaces, kernel_basis, rank,
                     row_space_basis, solve_coords, vec_mat)
from .scalars import FieldDescriptor


@dataclass(frozen=True)
class BraidWord:
    """Word in the braid generators beta_1 .. beta_{r-1} and their inverses."""

    r: int
    letters: tuple[tuple[int, int], ...]   # (index, exponent +-1)

    def __post_init__(self):
        for i, e in self.letters:
            if not 1 <= i <= self.r - 1:
                raise PreconditionError(f"braid index {i} out of range for r={self.r}")
            if e not in (1, -1):
                raise PreconditionError("braid exponents must be +-1")

    def inverse(self) -> "BraidWord":
        return BraidWord(self.r, tuple((i, -e) for i, e in reversed(self.letters)))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.r != other.r:
            raise PreconditionError("braid words on different strand counts")
        return BraidWord(self.r, self.letters + other.letters)

    def conjugate_by(self, w: "BraidWord") -> "BraidWord":
        """x^w = w^-1 x w."""
        return w.inverse() * self * w

    def __str__(self):
        return " ".join(f"b{i}" if e == 1 else f"b{i}^-1" for i, e in self.letters)


_LETTER_RE = re.compile(r"b(\d+)(\^-1)?$")


def parse_braid_word(text: str, r: int) -> BraidWord:
    """Parse whitespace-separated letters "b<k>" / "b<k>^-1"."""
    letters = []
    for pos, tok in enumerate(text.split()):
        m = _LETTER_RE.match(tok)
        if not m:
            raise ParseError(f"bad braid letter {tok!r}", pos)
        letters.append((int(m.group(1)), -1 if m.group(2) else 1))
    try:
        return BraidWord(r, tuple(letters))
    except PreconditionError as exc:
        raise ParseError(str(exc)) from exc


def pure_braid(i: int, j: int, r: int) -> BraidWord:
    """The pure braid beta_{i,j} = (beta_i^2)^(beta_{i+1}^-1 ... beta_{j-1}^-1)."""
    if not 1 <= i < j <= r:
        raise PreconditionError("pure_braid needs 1 <= i < j <= r")
    core = BraidWord(r, ((i, 1), (i, 1)))
    conj = BraidWord(r, tuple((k, -1) for k in range(i + 1, j)))
    return core.conjugate_by(conj)


@dataclass(frozen=True)
class MonodromyTuple:
    field: FieldDescriptor
    dim: int
    entries: tuple[Matrix, ...]
    points: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if len(self.entries) < 1:
            raise PreconditionError("a tuple needs at least one entry")
        for M in self.entries:
            if M.field != self.field or M.dim != (self.dim, self.dim):
                raise PreconditionError("entries must be square over the declared field")
        prod = Matrix.identity(self.field, self.dim)
        for M in self.entries:
            prod = prod @ M
        if prod != Matrix.identity(self.field, self.dim):
            raise PreconditionError("product relation T_1 ... T_{r+1} = 1 fails")
        if self.points is not None:
            if len(self.points) != self.r:
                raise PreconditionError("need one point per finite entry")
            if len(set(self.points)) != len(self.points):
                raise PreconditionError("points must be pairwise distinct")

    @property
    def r(self) -> int:
        return len(self.entries) - 1

    @staticmethod
    def make(field: FieldDescriptor, entries, points=None) -> "MonodromyTuple":
        entries = tuple(entries)
        dim = entries[0].nrows
        pts = None if points is None else tuple(Fraction(p) for p in points)
        return MonodromyTuple(field, dim, entries, pts)

    @staticmethod
    def from_finite_entries(field: FieldDescriptor, finite, points=None) -> "MonodromyTuple":
        """Append the inverse of the product as the entry at infinity."""
        finite = list(finite)
        prod = Matrix.identity(field, finite[0].nrows)
        for M in finite:
            prod = prod @ M
        return MonodromyTuple.make(field, finite + [prod.inverse()], points)

    def with_points(self, points) -> "MonodromyTuple":
        return MonodromyTuple.make(self.field, self.entries, points)

    def finite_entries(self) -> tuple[Matrix, ...]:
        return self.entries[:-1]

    def infinity_entry(self) -> Matrix:
        return self.entries[-1]


def _act_gen(entries, points, i, inverse):
    """One braid generator on (list of entries, list of points); 1-based i."""
    a, b = entries[i - 1], entries[i]
    if not inverse:
        entries[i - 1], entries[i] = b, b.inverse() @ a @ b
    else:
        entries[i - 1], entries[i] = a @ b @ a.inverse(), a
    if points is not None:
        points[i - 1], points[i] = points[i], points[i - 1]


def braid_act(T: MonodromyTuple, w: BraidWord) -> MonodromyTuple:
    """Left-to-right action of a braid word on the first r entries.

    beta_i sends (..., g_i, g_{i+1}, ...) to (..., g_{i+1}, g_{i+1}^-1 g_i
    g_{i+1}, ...); points travel with their loops, the infinity entry is
    untouched (the action preserves the product).
    """
    if w.r != T.r:
        raise PreconditionError(f"braid word has r={w.r}, tuple has r={T.r}")
    entries = list(T.entries)
    points = list(T.points) if T.points is not None else None
    for i, e in w.letters:
        _act_gen(entries, points, i, inverse=(e < 0))
    return MonodromyTuple.make(T.field, entries, points)


def sort_points(T: MonodromyTuple, descending: bool = False) -> MonodromyTuple:
    """Braid-bubble-sort the tuple so its points are monotone.

    Adjacent transpositions are realized by braid generators, so the result
    presents the same local system with a re-ordered marking.
    """
    if T.points is None:
        raise PreconditionError("sort_points needs a tuple with points")
    entries = list(T.entries)
    points = list(T.points)
    r = T.r
    changed = True
    while changed:
        changed = False
        for i in range(1, r):
            out_of_order = (points[i - 1] > points[i]) if not descending \
                else (points[i - 1] < points[i])
            if out_of_order:
                _act_gen(entries, points, i, inverse=False)
                changed = True
    return MonodromyTuple.make(T.field, entries, points)


# -- the cocycle automorphisms Phi ----------------------------------------------

def _phi_gen_blocks(T: MonodromyTuple, i: int) -> Matrix:
    """Phi(T, beta_i) as a block automorphism of V^{r+1} (row action)."""
    r1 = len(T.entries)
    d = T.dim
    field = T.field
    ident = Matrix.identity(field, d)
    Ti, Ti1 = T.entries[i - 1], T.entries[i]
    mixed = ident - (Ti1.inverse() @ Ti @ Ti1)
    zero = field.zero()
    rows = []
    for bi in range(r1):
        for rr in range(d):
            row = [zero] * (r1 * d)
            if bi == i - 1:
                # v_i lands in slot i+1 with factor T_{i+1}
                row[i * d: (i + 1) * d] = Ti1.rows[rr]
            elif bi == i:
                # v_{i+1} lands in slot i and in slot i+1 with 1 - T_{i+1}^-1 T_i T_{i+1}
                row[(i - 1) * d: i * d] = ident.rows[rr]
                row[i * d: (i + 1) * d] = mixed.rows[rr]
            else:
                row[bi * d: (bi + 1) * d] = ident.rows[rr]
            rows.append(tuple(row))
    return Matrix(field, tuple(rows))


def phi_transport(T: MonodromyTuple, w: BraidWord) -> tuple[Matrix, MonodromyTuple]:
    """(Phi(T, w), T^w); Phi composes by Phi(T, b b') = Phi(T, b) Phi(T^b, b')."""
    if w.r != T.r:
        raise PreconditionError(f"braid word has r={w.r}, tuple has r={T.r}")
    big = Matrix.identity(T.field, len(T.entries) * T.dim)
    cur = T
    for i, e in w.letters:
        if e > 0:
            big = big @ _phi_gen_blocks(cur, i)
            cur = braid_act(cur, BraidWord(w.r, ((i, 1),)))
        else:
            prev = braid_act(cur, BraidWord(w.r, ((i, -1),)))
            big = big @ _phi_gen_blocks(prev, i).inverse()
            cur = prev
    return big, cur


def phi_matrix(T: MonodromyTuple, w: BraidWord) -> Matrix:
    """The linear automorphism Phi(T, w) of V^{r+1}."""
    return phi_transport(T, w)[0]


# -- cohomology spaces -----------------------------------------------------------

@dataclass(frozen=True)
class CohomologySpaces:
    """Echelonized bases of E_T <= U_T <= H_T inside V^{r+1}."""

    h_basis: tuple
    e_basis: tuple
    u_basis: tuple

    @property
    def dims(self) -> tuple[int, int, int]:
        return (len(self.h_basis), len(self.e_basis), len(self.u_basis))

    @property
    def h1_dim(self) -> int:
        return len(self.h_basis) - len(self.e_basis)

    @property
    def parabolic_dim(self) -> int:
        return len(self.u_basis) - len(self.e_basis)


def cohomology_spaces(T: MonodromyTuple) -> CohomologySpaces:
    """H_T, E_T and U_T with H^1 = H/E and parabolic H^1_p = U/E.

    H_T is cut out by v_1 (T_2...T_{r+1}) + v_2 (T_3...T_{r+1}) + ... +
    v_{r+1} = 0, E_T is the space of coboundaries (v(T_1-1), ..., v(T_{r+1}-1)),
    and U_T additionally confines v_i to im(T_i - 1).
    """
    entries = T.entries
    r1 = len(entries)
    d = T.dim
    field = T.field
    # suffix[k] = T_{k+2} ... T_{r+1} (identity for k = r)
    suffix = [None] * r1
    P = Matrix.identity(field, d)
    for k in range(r1 - 1, -1, -1):
        suffix[k] = P
        P = entries[k] @ P
    stacked = Matrix(field, tuple(row for k in range(r1) for row in suffix[k].rows))
    h_basis = kernel_basis(stacked)

    zero = field.zero()
    e_rows = []
    for b in range(d):
        row = []
        for M in entries:
            mrow = M.rows[b]
            row.extend(mrow[j] - field.one() if j == b else mrow[j] for j in range(d))
        e_rows.append(tuple(row))
    e_basis = row_space_basis(e_rows)

    im_rows = []
    for k, M in enumerate(entries):
        for b in row_space_basis((M.minus_identity()).rows):
            row = [zero] * (r1 * d)
            row[k * d: (k + 1) * d] = b
            im_rows.append(tuple(row))
    u_basis = intersect_row_spaces(h_basis, im_rows)
    return CohomologySpaces(tuple(h_basis), tuple(e_basis), tuple(u_basis))


def invariants_dim(T: MonodromyTuple) -> int:
    """dim of the joint fixed space {v : v T_i = v for all i}."""
    basis = None
    for M in T.entries:
        k = kernel_basis(M.minus_identity())
        basis = k if basis is None else intersect_row_spaces(basis, k)
        if not basis:
            return 0
    return len(basis)


def coinvariants_dim(T: MonodromyTuple) -> int:
    """dim of V / sum_i im(T_i - 1)."""
    rows = []
    for M in T.entries:
        rows.extend(M.minus_identity().rows)
    return T.dim - len(row_space_basis(rows))


def parabolic_rank_formula(T: MonodromyTuple) -> int:
    """Ogg-Shafarevich count: sum_i rank(T_i - 1) - 2 dim V + dim V^T + dim V_T.

    Always total; agrees with dim U_T - dim E_T, the version including the
    infinity term.
    """
    total = sum(rank(M.minus_identity()) for M in T.entries)
    return total - 2 * T.dim + invariants_dim(T) + coinvariants_dim(T)


# -- quotient machinery shared with the convolution -------------------------------

def quotient_basis(u_basis, e_basis):
    """Extend echelon(E) to U; the complement rows represent U/E."""
    ext = list(row_space_basis(list(e_basis)))
    quot = []
    for u in u_basis:
        if not in_span(ext, u):
            ext.append(u)
            quot.append(u)
    return ext, quot


def induced_quotient_matrix(ext, quot, big: Matrix, field) -> Matrix:
    """Matrix of the action of `big` on U/E in the quotient_basis coordinates.

    Raises PreconditionError if the images leave span(ext): the caller treats
    that as a degeneracy signal.
    """
    ne = len(ext) - len(quot)
    rows = []
    for u in quot:
        img = vec_mat(u, big)
        coords = solve_coords(ext, img)
        if coords is None:
            raise PreconditionError("quotient space is not preserved")
        rows.append(tuple(coords[ne:]))
    return Matrix(field, tuple(rows))


def tuples_equivalent(A: MonodromyTuple, B: MonodromyTuple):
    """Simultaneous conjugator between the two tuples, or None."""
    from .linalg import conjugacy_solve
    if A.field != B.field or A.dim != B.dim or A.r != B.r:
        return None
    if A.points is not None and B.points is not None and A.points != B.points:
        return None
    return conjugacy_solve(list(A.entries), list(B.entries))
