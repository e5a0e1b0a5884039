"""Middle convolution of monodromy tuples.

The pipeline follows the braid-cocycle description: form the tensor
("circ") tuple of the two inputs, compute the parabolic spaces U/E of that
tuple, transport them along the pure-braid words attached to the loops
around the summed singular points, and read off the induced maps on U/E.
Everything works over any FieldDescriptor, finite fields included.

Conventions (frozen against the rank-2 and rank-3 reference tuples):
  * the left divisor is sorted ascending, the right divisor descending,
  * output entries are ordered so that their product, taken left to right,
    is a positive loop around infinity; with the sorted divisors this lists
    the points of u*v in ascending order,
  * in the non-generic case, entries whose points collide are multiplied in
    that same order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (DimensionInconsistency, FieldMismatch, LambdaIsOne,
                     PreconditionError)
from .linalg import (JordanData, Matrix, char_poly, field_roots, jordan_data,
                     kernel_basis, kronecker, rank, row_space_basis,
                     solve_coords, vec_mat)
from .scalars import FieldDescriptor, Scalar
from .tuples import (BraidWord, MonodromyTuple, cohomology_spaces,
                     induced_quotient_matrix, invariants_dim, phi_transport,
                     pure_braid, quotient_basis, sort_points)


@dataclass(frozen=True)
class ConvolutionInput:
    """A pair of pointed tuples over the same field."""

    left: MonodromyTuple
    right: MonodromyTuple

    def __post_init__(self):
        if self.left.field != self.right.field:
            raise FieldMismatch("convolution inputs over different fields")
        if self.left.points is None or self.right.points is None:
            raise PreconditionError("convolution inputs need point lists")

    @property
    def p(self) -> int:
        return self.left.r

    @property
    def q(self) -> int:
        return self.right.r

    def normalized(self) -> tuple[MonodromyTuple, MonodromyTuple]:
        """Left divisor ascending, right divisor descending (braid re-marking)."""
        return sort_points(self.left), sort_points(self.right, descending=True)

    def sums(self) -> list[Fraction]:
        return sorted({x + y for x in self.left.points for y in self.right.points})

    def is_generic(self) -> bool:
        return len(self.sums()) == self.p * self.q


@dataclass(frozen=True)
class PairingInfo:
    """Symmetry type (+1 orthogonal, -1 symplectic, 0 none) and Tate weight."""

    sym: int
    twist: int

    def __post_init__(self):
        if self.sym not in (-1, 0, 1):
            raise PreconditionError("sym must be -1, 0 or +1")


def pairing_convolve(p1: PairingInfo, p2: PairingInfo) -> PairingInfo:
    """sym flips and multiplies; the pairing target weight adds and shifts."""
    return PairingInfo(-p1.sym * p2.sym, p1.twist + p2.twist + 1)


def _pick_basepoint(inp: ConvolutionInput) -> Fraction:
    avoid = {x + y for x in inp.left.points for y in inp.right.points}
    y0 = max(avoid) + 1
    return Fraction(y0)


def circ_tuple(inp: ConvolutionInput) -> MonodromyTuple:
    """The tensor tuple (A_i (x) 1, 1 (x) B_j, A_{p+1} (x) B_{q+1}).

    Points are (x_1, ..., x_p, y0-y_1, ..., y0-y_q) for a base fibre y0
    chosen past every point of u*v.
    """
    left, right = inp.normalized()
    n1, n2 = left.dim, right.dim
    field = left.field
    i1 = Matrix.identity(field, n1)
    i2 = Matrix.identity(field, n2)
    entries = [kronecker(A, i2) for A in left.finite_entries()]
    entries += [kronecker(i1, B) for B in right.finite_entries()]
    entries.append(kronecker(left.infinity_entry(), right.infinity_entry()))
    y0 = _pick_basepoint(inp)
    points = list(left.points) + [y0 - y for y in right.points]
    return MonodromyTuple.make(field, entries, points)


def _delta_word(i: int, j: int, p: int, strands: int) -> BraidWord:
    """Braid word of the loop delta_{i,j}: beta_{i,p+1} conjugated for j >= 2."""
    w = pure_braid(i, p + 1, strands)
    if j == 1:
        return w
    conj = BraidWord(strands, tuple((k, 1) for k in range(p + 1, p + j)))
    return w.conjugate_by(conj)


def _merge_adjacent(pairs):
    out = []
    for pt, D in pairs:
        if out and out[-1][0] == pt:
            out[-1] = (pt, out[-1][1] @ D)
        else:
            out.append((pt, D))
    return out


def _braid_sort_pairs(pairs):
    """Bubble (point, matrix) pairs into ascending point order by Hurwitz moves."""
    pairs = list(pairs)
    changed = True
    while changed:
        changed = False
        for k in range(len(pairs) - 1):
            if pairs[k][0] > pairs[k + 1][0]:
                (pa, Da), (pb, Db) = pairs[k], pairs[k + 1]
                pairs[k] = (pb, Db)
                pairs[k + 1] = (pa, Db.inverse() @ Da @ Db)
                changed = True
    return pairs


def middle_convolution(inp: ConvolutionInput) -> MonodromyTuple:
    """The tuple of V_1 * V_2 on the points of u*v, sorted ascending.

    Raises DimensionInconsistency when the braid transport fails to preserve
    the U/E spaces of the tensor tuple (degenerate right factor).
    """
    left, right = inp.normalized()
    p, q = inp.p, inp.q
    field = left.field
    C = circ_tuple(inp)
    spaces = cohomology_spaces(C)
    ext, quot = quotient_basis(spaces.u_basis, spaces.e_basis)
    if not quot:
        raise PreconditionError("middle convolution has rank 0")
    strands = p + q
    pairs = []
    for j in range(q, 0, -1):
        for i in range(1, p + 1):
            word = _delta_word(i, j, p, strands)
            big, transported = phi_transport(C, word)
            if transported.entries != C.entries:
                raise DimensionInconsistency(
                    f"the loop braid for ({i},{j}) moves the tensor tuple")
            try:
                D = induced_quotient_matrix(ext, quot, big, field)
            except PreconditionError as exc:
                raise DimensionInconsistency(str(exc)) from exc
            pairs.append((left.points[i - 1] + right.points[j - 1], D))
    pairs = _merge_adjacent(pairs)
    if len({pt for pt, _ in pairs}) != len(pairs):
        # colliding points that were not adjacent: bubble together, then merge
        pairs = _merge_adjacent(_braid_sort_pairs(pairs))
    pairs = _braid_sort_pairs(pairs)
    prod = Matrix.identity(field, len(quot))
    for _, D in pairs:
        prod = prod @ D
    entries = [D for _, D in pairs] + [prod.inverse()]
    return MonodromyTuple.make(field, entries, [pt for pt, _ in pairs])


# -- rank formula -----------------------------------------------------------------

def _nullity_minus_one(M: Matrix) -> int:
    return M.nrows - rank(M.minus_identity())


def rank_formula(inp: ConvolutionInput) -> int:
    """(p+q-1) n1 n2 minus the fixed-space corrections of all local monodromies."""
    n1, n2 = inp.left.dim, inp.right.dim
    total = (inp.p + inp.q - 1) * n1 * n2
    for A in inp.left.finite_entries():
        total -= n2 * _nullity_minus_one(A)
    for B in inp.right.finite_entries():
        total -= n1 * _nullity_minus_one(B)
    total -= _nullity_minus_one(kronecker(inp.left.infinity_entry(),
                                          inp.right.infinity_entry()))
    return total


def rank_formula_applicable(inp: ConvolutionInput) -> bool:
    """The formula assumes one of the two stalk stabilizers vanishes."""
    return invariants_dim(inp.left) == 0 or invariants_dim(inp.right) == 0


# -- Pochhammer realization of MC_lambda -------------------------------------------

def _pochhammer_matrix(A: list[Matrix], lam: Scalar, i: int, field) -> Matrix:
    """Block matrix on V^p: identity outside block row i (1-based)."""
    p = len(A)
    d = A[0].nrows
    ident = Matrix.identity(field, d)
    zero = field.zero()
    rows = []
    for bi in range(p):
        for rr in range(d):
            row = [zero] * (p * d)
            if bi != i - 1:
                row[bi * d: (bi + 1) * d] = ident.rows[rr]
            else:
                for bj in range(p):
                    if bj < i - 1:
                        blk = (A[bj] - ident).scale(lam)
                    elif bj == i - 1:
                        blk = A[bj].scale(lam)
                    else:
                        blk = A[bj] - ident
                    row[bj * d: (bj + 1) * d] = blk.rows[rr]
            rows.append(tuple(row))
    return Matrix(field, tuple(rows))


def mc_lambda(T: MonodromyTuple, lam: Scalar) -> MonodromyTuple:
    """Katz's MC_lambda: Pochhammer matrices restricted to K cap L.

    K confines the i-th slot to im(A_i - 1); L is the twisted image of
    im(lambda A_1...A_p - 1).  The induced tuple lives on the same points.
    """
    if lam.field != T.field:
        raise FieldMismatch("lambda must live in the tuple's field")
    if lam.is_one():
        raise LambdaIsOne("MC_lambda needs lambda != 1")
    if not lam:
        raise PreconditionError("MC_lambda needs lambda != 0")
    field = T.field
    p = T.r
    d = T.dim
    A = list(T.finite_entries())
    ident = Matrix.identity(field, d)
    zero = field.zero()

    def slot_rows(k, basis):
        out = []
        for b in basis:
            row = [zero] * (p * d)
            row[k * d: (k + 1) * d] = b
            out.append(tuple(row))
        return out

    k_rows = []
    for k, M in enumerate(A):
        k_rows.extend(slot_rows(k, row_space_basis((M - ident).rows)))
    k_basis = row_space_basis(k_rows)

    prod = ident
    for M in A:
        prod = prod @ M
    im_l = row_space_basis((prod.scale(lam) - ident).rows)
    l_rows = []
    for k in range(p):
        suff = ident
        for M in A[k + 1:]:
            suff = suff @ M
        l_rows.extend(slot_rows(k, [vec_mat(b, suff) for b in im_l]))
    l_basis = row_space_basis(l_rows)

    from .linalg import intersect_row_spaces
    w_basis = intersect_row_spaces(k_basis, l_basis)
    if not w_basis:
        raise PreconditionError("MC_lambda output has rank 0")

    entries = []
    for i in range(1, p + 1):
        big = _pochhammer_matrix(A, lam, i, field)
        rows = []
        for u in w_basis:
            coords = solve_coords(w_basis, vec_mat(u, big))
            if coords is None:
                raise DimensionInconsistency("Pochhammer matrix does not preserve K cap L")
            rows.append(tuple(coords))
        entries.append(Matrix(field, tuple(rows)))
    out_prod = Matrix.identity(field, len(w_basis))
    for D in entries:
        out_prod = out_prod @ D
    entries.append(out_prod.inverse())
    return MonodromyTuple.make(field, entries, T.points)


def kummer_tuple(field: FieldDescriptor, lam: Scalar, point=0) -> MonodromyTuple:
    """Rank-one tuple (lambda, lambda^-1) at a single finite point."""
    if lam.is_one() or not lam:
        raise PreconditionError("Kummer sheaf needs lambda outside {0, 1}")
    return MonodromyTuple.make(
        field,
        [Matrix(field, ((lam,),)), Matrix(field, ((lam.inverse(),),))],
        [Fraction(point)])


# -- convolution-sheaf conditions ----------------------------------------------------

@dataclass(frozen=True)
class ConvolutionSheafCheck:
    ok: bool
    witness: tuple[str, int, Scalar] | None = None   # (condition, index, tau)


def _tau_candidates(T: MonodromyTuple, i: int) -> list[Scalar]:
    """tau with ker(tau T_i - 1) possibly nonzero: inverses of eigenvalues."""
    field = T.field
    roots, _ = field_roots(char_poly(T.entries[i]), field)
    out = [field.one()]
    seen = {out[0].payload}
    for root, _m in roots:
        if root:
            t = root.inverse()
            if t.payload not in seen:
                seen.add(t.payload)
                out.append(t)
    return out


def is_convolution_sheaf(T: MonodromyTuple) -> ConvolutionSheafCheck:
    """Check conditions (*) and (**) over the finite entries.

    (*)  the joint 1-eigenvectors of {T_j : j != i} meet ker(tau T_i - 1)
         trivially, and
    (**) the corresponding image sum fills V,
    for every finite index i and every tau that could violate (the inverses
    of in-field eigenvalues of T_i; any other tau passes vacuously).
    """
    field = T.field
    d = T.dim
    r = T.r
    ident = Matrix.identity(field, d)
    kers = [kernel_basis(M - ident) for M in T.finite_entries()]
    ims = [row_space_basis((M - ident).rows) for M in T.finite_entries()]
    from .linalg import intersect_row_spaces
    for i in range(r):
        other_ker = None
        for j in range(r):
            if j == i:
                continue
            other_ker = kers[j] if other_ker is None \
                else intersect_row_spaces(other_ker, kers[j])
            if not other_ker:
                break
        other_im_rows = [row for j in range(r) if j != i for row in ims[j]]
        for tau in _tau_candidates(T, i):
            scaled = T.entries[i].scale(tau) - ident
            if other_ker:
                meet = intersect_row_spaces(other_ker, kernel_basis(scaled))
                if meet:
                    return ConvolutionSheafCheck(False, ("*", i + 1, tau))
            w = row_space_basis(other_im_rows + list(scaled.rows))
            if len(w) != d:
                return ConvolutionSheafCheck(False, ("**", i + 1, tau))
    return ConvolutionSheafCheck(True)


def _centralizer_dim(entries) -> int:
    field = entries[0].field
    d = entries[0].nrows
    zero = field.zero()
    eqs = []
    for M in entries:
        for a in range(d):
            for b in range(d):
                coef = [zero] * (d * d)
                for c in range(d):
                    coef[a * d + c] = coef[a * d + c] + M.rows[c][b]
                    coef[c * d + b] = coef[c * d + b] - M.rows[a][c]
                eqs.append(tuple(coef))
    m = len(eqs)
    Mt = Matrix(field, tuple(tuple(eqs[r][c] for r in range(m)) for c in range(d * d)))
    return len(kernel_basis(Mt))


def irreducibility_criterion(left: MonodromyTuple, right_scalars: list[Scalar]) -> str:
    """Sufficient criterion: "irreducible" when (p-2) n exceeds the kernel sum.

    Preconditions: the left tuple is an irreducible convolution sheaf whose
    infinity entry is the identity, and every right-hand scalar differs
    from 1.  Genericity of the summed divisor is the caller's duty (the
    right-hand system is given by its scalars only).
    """
    field = left.field
    n = left.dim
    p = left.r
    if left.infinity_entry() != Matrix.identity(field, n):
        raise PreconditionError("criterion needs A_{p+1} = 1")
    for lam in right_scalars:
        if lam.field != field:
            raise FieldMismatch("right-hand scalars in the wrong field")
        if lam.is_one() or not lam:
            raise PreconditionError("right-hand scalars must avoid {0, 1}")
    if not is_convolution_sheaf(left).ok:
        raise PreconditionError("left factor is not a convolution sheaf")
    if _centralizer_dim(list(left.entries)) != 1:
        raise PreconditionError("left factor is not absolutely irreducible")
    margin = (p - 2) * n - sum(n - rank(A.minus_identity())
                               for A in left.finite_entries())
    return "irreducible" if margin > 0 else "inconclusive"


# -- local Jordan predictions ---------------------------------------------------------

def convolved_block(alpha: Scalar, length: int, beta: Scalar) -> tuple[Scalar, int] | None:
    """J(alpha, l) meeting a non-trivial eigenvalue beta gives J(alpha beta, l')."""
    one = alpha.field.one()
    if alpha == one and length == 1:
        return None
    if alpha == one:
        new_len = length - 1
    elif alpha == beta.inverse():
        new_len = length + 1
    else:
        new_len = length
    if new_len == 0:
        return None
    return (alpha * beta, new_len)


def predict_local_jordan(inp: ConvolutionInput) -> dict[tuple[int, int], JordanData]:
    """Jordan data of each D_{i,j} of the convolution, without computing it.

    Indices refer to the normalized configuration (left divisor ascending,
    right descending), matching middle_convolution's entry at x_i + y_j.
    """
    if not inp.is_generic():
        raise PreconditionError("local predictions need a generic divisor sum")
    left, right = inp.normalized()
    one = left.field.one()
    total = rank_formula(inp)
    a_jordans = [jordan_data(A) for A in left.finite_entries()]
    b_jordans = [jordan_data(B) for B in right.finite_entries()]
    for jd in b_jordans:
        if any(n != 1 for _, n in jd.blocks):
            raise PreconditionError("right-hand finite entries must be semisimple")
    out = {}
    for i in range(1, inp.p + 1):
        for j in range(1, inp.q + 1):
            blocks = []
            for beta, _len in b_jordans[j - 1].blocks:
                if beta == one:
                    continue
                for alpha, length in a_jordans[i - 1].blocks:
                    nb = convolved_block(alpha, length, beta)
                    if nb is not None:
                        blocks.append(nb)
            used = sum(n for _, n in blocks)
            blocks.extend([(one, 1)] * (total - used))
            out[(i, j)] = JordanData.of(blocks, total)
    return out


def predict_infinity_jordan(T: MonodromyTuple, lam: Scalar) -> JordanData:
    """Jordan data at infinity of MC_lambda(T) from the infinity entry of T."""
    if lam.field != T.field:
        raise FieldMismatch("lambda must live in the tuple's field")
    if lam.is_one() or not lam:
        raise LambdaIsOne("prediction needs lambda outside {0, 1}")
    field = T.field
    one = field.one()
    lam_inv = lam.inverse()
    ainf = jordan_data(T.infinity_entry())
    blocks = []
    for alpha, length in ainf.blocks:
        if alpha == lam:
            new_len = length - 1
        elif alpha == one:
            new_len = length + 1
        else:
            new_len = length
        if new_len > 0:
            blocks.append((alpha * lam_inv, new_len))
    total = T.r * T.dim
    total -= sum(T.dim - rank(A.minus_identity()) for A in T.finite_entries())
    total -= T.dim - rank(T.infinity_entry().scale(lam_inv).minus_identity())
    used = sum(n for _, n in blocks)
    blocks.extend([(lam_inv, 1)] * (total - used))
    return JordanData.of(blocks, total)


# -- the SL-realization demo ----------------------------------------------------------

@dataclass
class SlDemoReport:
    m: int
    r: int
    field: FieldDescriptor
    result: MonodromyTuple
    rank: int
    expected_rank: int
    first_entry_jordan_ok: bool
    second_entry_homology_order: int
    determinants_in_zeta4: bool
    checks_passed: bool


def sl_demo(m: int, r: int) -> SlDemoReport:
    """Run the two-step convolution pipeline of the SL-realization proof.

    Builds the dihedral rank-two tuple on r points, convolves with the
    quadratic Kummer sheaf, twists the first and last entries, convolves
    with the order-four Kummer-type tuple, and checks rank 4r-7 plus the
    announced local data.  m = 1 runs the same pipeline through the
    dihedral group of order six.
    """
    if m < 1 or m % 2 == 0:
        raise PreconditionError("m must be odd and >= 1")
    m_eff = 3 if m == 1 else m
    units = [k for k in range(1, m_eff + 1) if math.gcd(k, m_eff) == 1]
    phi = len(units)
    if r < 2 + phi:
        raise PreconditionError(f"need r >= {2 + phi}")
    lcm4 = 4 * m_eff // math.gcd(4, m_eff)
    field = FieldDescriptor.cyclotomic(lcm4)
    zeta_m = field.zeta(lcm4 // m_eff)
    zeta4 = field.zeta(lcm4 // 4)
    one, zero = field.one(), field.zero()
    minus_one = -one

    def diag(a, b):
        return Matrix(field, ((a, zero), (zero, b)))

    refl = Matrix(field, ((zero, one), (one, zero)))
    fillers = r - 1 - phi
    sign = one if fillers % 2 == 0 else minus_one
    finite = [refl, refl.scale(sign)]
    finite += [diag(zeta_m ** k, zeta_m ** (m_eff - k)) for k in units]
    finite += [diag(minus_one, minus_one)] * (fillers - 1)
    f1 = MonodromyTuple.from_finite_entries(field, finite,
                                            [Fraction(i) for i in range(1, r + 1)])
    f2 = kummer_tuple(field, minus_one)

    conv1 = middle_convolution(ConvolutionInput(f1, f2))
    if conv1.dim != 2 * r - 4:
        raise DimensionInconsistency("first convolution has unexpected rank")
    if conv1.infinity_entry() != Matrix.identity(field, conv1.dim).scale(minus_one):
        raise DimensionInconsistency("first convolution is not -1 at infinity")

    twisted_entries = [conv1.entries[0].scale(minus_one)]
    twisted_entries += list(conv1.entries[1:-1])
    twisted_entries.append(conv1.entries[-1].scale(minus_one))
    twisted = MonodromyTuple.make(field, twisted_entries, conv1.points)

    offset = Fraction(10007)
    f3 = MonodromyTuple.make(
        field,
        [Matrix(field, ((zeta4,),)), Matrix(field, ((-zeta4,),)),
         Matrix(field, ((one,),))],
        [offset, 2 * offset])

    result = middle_convolution(ConvolutionInput(twisted, f3))
    expected_rank = 4 * r - 7

    minus_i = -zeta4
    expected_c1 = JordanData.of([(minus_i, 2)] + [(minus_i, 1)] * (2 * r - 6)
                                + [(one, 1)] * (2 * r - 3))
    c1_ok = jordan_data(result.entries[0]) == expected_c1

    c2 = result.entries[1]
    ident = Matrix.identity(field, result.dim)
    order = 0
    power = c2
    for k in range(1, 9):
        if power == ident:
            order = k
            break
        power = power @ c2
    c2_rank_one = rank(c2.minus_identity()) == 1

    zeta4_group = {(zeta4 ** k).payload for k in range(4)}
    dets_ok = all(A.det().payload in zeta4_group for A in result.finite_entries())

    passed = (result.dim == expected_rank and c1_ok and order == 4
              and c2_rank_one and dets_ok)
    return SlDemoReport(m=m, r=r, field=field, result=result, rank=result.dim,
                        expected_rank=expected_rank, first_entry_jordan_ok=c1_ok,
                        second_entry_homology_order=order,
                        determinants_in_zeta4=dets_ok, checks_passed=passed)
