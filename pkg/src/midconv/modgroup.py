"""Reduction of tuples mod ell and brute-force matrix-group analysis.

Group recognition is by exact order (breadth-first closure under the
generators), not by classification theorems; at desk scale the relevant
closures stay below a few tens of thousands of elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadPrime, NoInvariantForm, NoRootInQuadratic, PreconditionError
from .linalg import Matrix, jordan_data, kernel_basis, rank
from .scalars import FINITE, RATIONAL, FieldDescriptor, Scalar, is_prime
from .tuples import MonodromyTuple


@dataclass
class GroupReport:
    order: int | None                      # None means "exceeds cap"
    absolutely_irreducible: bool | None = None
    invariant_gram: Matrix | None = None
    recognized: str | None = None

    @property
    def order_text(self) -> str:
        return "exceeds cap" if self.order is None else str(self.order)


def _reduce_fraction(fr: Fraction, ell: int) -> int:
    if fr.denominator % ell == 0:
        raise BadPrime(f"denominator {fr.denominator} vanishes mod {ell}")
    return fr.numerator * pow(fr.denominator, -1, ell) % ell


def _cyclotomic_root_mod(n: int, ell: int) -> tuple[FieldDescriptor, Scalar]:
    """Smallest root of Phi_n in F_ell if any, else in F_{ell^2}."""
    from .scalars import cyclotomic_polynomial
    phi = cyclotomic_polynomial(n)
    f1 = FieldDescriptor.finite(ell)
    for a in range(ell):
        if sum(c * pow(a, e, ell) for e, c in enumerate(phi)) % ell == 0:
            return f1, Scalar(f1, (a,))
    f2 = FieldDescriptor.finite(ell, 2)
    for root in f2.elements():
        acc = f2.zero()
        power = f2.one()
        for c in phi:
            acc = acc + f2.from_int(c) * power
            power = power * root
        if not acc:
            return f2, root
    # required degree = multiplicative order of ell mod n
    k = 1
    acc = ell % n
    while acc != 1:
        acc = acc * ell % n
        k += 1
    raise NoRootInQuadratic(k)


def reduce_mod(T: MonodromyTuple, ell: int) -> MonodromyTuple:
    """Residual tuple mod ell; zeta_n goes to the smallest root of Phi_n.

    The target is F_ell when Phi_n has a root there, F_{ell^2} otherwise.
    BadPrime if ell divides a denominator or the cyclotomic order.
    """
    if not is_prime(ell):
        raise BadPrime(f"{ell} is not prime")
    src = T.field
    if src.kind == FINITE:
        raise PreconditionError("tuple is already over a finite field")
    if src.kind == RATIONAL:
        target = FieldDescriptor.finite(ell)

        def conv(s: Scalar) -> Scalar:
            return Scalar(target, (_reduce_fraction(s.payload, ell),))
    else:
        if src.n % ell == 0:
            raise BadPrime(f"{ell} divides the cyclotomic order {src.n}")
        target, root = _cyclotomic_root_mod(src.n, ell)

        def conv(s: Scalar) -> Scalar:
            nums, den = s.payload
            acc = target.zero()
            power = target.one()
            dinv = target.from_fraction(Fraction(1, den))
            for a in nums:
                if a:
                    acc = acc + target.from_int(a) * power
                power = power * root
            return acc * dinv
    entries = [Matrix(target, tuple(tuple(conv(x) for x in row) for row in M.rows))
               for M in T.entries]
    return MonodromyTuple.make(target, entries, T.points)


def group_closure(gens: list[Matrix], cap: int = 100000) -> int | None:
    """Breadth-first closure under multiplication; None when past the cap."""
    if not gens:
        return 1
    ident = Matrix.identity(gens[0].field, gens[0].nrows)
    seen = {ident.rows}
    frontier = [ident]
    while frontier:
        new = []
        for B in frontier:
            for A in gens:
                C = B @ A
                if C.rows not in seen:
                    seen.add(C.rows)
                    if len(seen) > cap:
                        return None
                    new.append(C)
        frontier = new
    return len(seen)


def group_elements(gens: list[Matrix], cap: int = 100000):
    """The closure itself (insertion order); None when past the cap."""
    if not gens:
        return []
    ident = Matrix.identity(gens[0].field, gens[0].nrows)
    seen = {ident.rows: ident}
    frontier = [ident]
    while frontier:
        new = []
        for B in frontier:
            for A in gens:
                C = B @ A
                if C.rows not in seen:
                    seen[C.rows] = C
                    if len(seen) > cap:
                        return None
                    new.append(C)
        frontier = new
    return list(seen.values())


def absolutely_irreducible(gens: list[Matrix]) -> bool:
    """True iff the commutant of the generated algebra is the scalars."""
    field = gens[0].field
    d = gens[0].nrows
    zero = field.zero()
    eqs = []
    for M in gens:
        for a in range(d):
            for b in range(d):
                coef = [zero] * (d * d)
                for c in range(d):
                    coef[a * d + c] = coef[a * d + c] + M.rows[c][b]
                    coef[c * d + b] = coef[c * d + b] - M.rows[a][c]
                eqs.append(tuple(coef))
    m = len(eqs)
    Mt = Matrix(field, tuple(tuple(eqs[r][c] for r in range(m)) for c in range(d * d)))
    return len(kernel_basis(Mt)) == 1


def invariant_symmetric_form(gens: list[Matrix]) -> Matrix | None:
    """Nondegenerate symmetric G with g G g^T = G for all generators, if any."""
    field = gens[0].field
    d = gens[0].nrows
    zero = field.zero()
    # unknowns: G_{ab} for a <= b
    idx = {}
    for a in range(d):
        for b in range(a, d):
            idx[(a, b)] = len(idx)

    def pos(a, b):
        return idx[(a, b)] if a <= b else idx[(b, a)]

    eqs = []
    for M in gens:
        for a in range(d):
            for b in range(a, d):
                coef = [zero] * len(idx)
                # (M G M^T)_{ab} - G_{ab} = 0
                for u in range(d):
                    for v in range(d):
                        coef[pos(u, v)] = coef[pos(u, v)] + M.rows[a][u] * M.rows[b][v]
                coef[pos(a, b)] = coef[pos(a, b)] - field.one()
                eqs.append(tuple(coef))
    m = len(eqs)
    Mt = Matrix(field, tuple(tuple(eqs[r][c] for r in range(m)) for c in range(len(idx))))
    sols = kernel_basis(Mt)

    def build(v):
        return Matrix(field, tuple(tuple(v[pos(a, b)] for b in range(d)) for a in range(d)))

    candidates = list(sols)
    acc = None
    for v in sols:
        acc = v if acc is None else tuple(x + y for x, y in zip(acc, v))
        candidates.append(acc)
    for v in candidates:
        G = build(v)
        if G.is_invertible():
            return G
    return None


def primitivity_bound(T: MonodromyTuple) -> tuple[Fraction, bool]:
    """Lower bound, and decision, for block dimensions of invariant decompositions.

    Returns (bound, primitive).  The bound is max{x, n - m/2 + (a+b)/2} with
    m the total unipotent-rank sum, x the longest block length prime to the
    characteristic, a the semisimple and b the unipotent contributions.  The
    decision scans every block dimension d | n, d <= n/2 and declares
    primitivity when each is beaten by its own bound.
    """
    field = T.field
    if field.kind != FINITE:
        raise PreconditionError("primitivity_bound works over finite fields")
    p = field.p
    n = T.dim
    entries = list(T.entries)
    if not absolutely_irreducible(entries):
        raise PreconditionError("entries must generate an absolutely irreducible group")
    jordans = [jordan_data(M) for M in entries]
    ranks = [rank(M.minus_identity()) for M in entries]
    m_total = sum(ranks)
    x = 0
    for jd in jordans:
        for _ev, ln in jd.blocks:
            if ln % p != 0:
                x = max(x, ln)

    def semisimple(jd):
        return all(ln == 1 for _ev, ln in jd.blocks)

    def unipotent(jd):
        return all(ev.is_one() for ev, _ln in jd.blocks)

    # identity entries act trivially on any decomposition; they only ever
    # contribute zeros, so keep them out of the unipotent sum
    b_sum = sum(sum(ln for _ev, ln in jd.blocks if ln % p != 0)
                for jd, rk in zip(jordans, ranks) if unipotent(jd) and rk > 0)

    def bound_given(dim_v1: int) -> Fraction:
        a_sum = sum(rk for jd, rk in zip(jordans, ranks)
                    if semisimple(jd) and not unipotent(jd) and rk < dim_v1)
        return max(Fraction(x), Fraction(n) - Fraction(m_total, 2)
                   + Fraction(a_sum + b_sum, 2))

    primitive = True
    for ddim in range(1, n // 2 + 1):
        if n % ddim == 0 and Fraction(ddim) >= bound_given(ddim):
            primitive = False
            break
    return bound_given(n), primitive


def o3_recognition(gens: list[Matrix], ell: int, cap: int = 100000) -> GroupReport:
    """Recognize O_3(F_ell) by invariant form plus exact order 2 ell (ell^2-1)."""
    if not is_prime(ell) or ell == 2:
        raise PreconditionError("ell must be an odd prime")
    if any(g.nrows != 3 for g in gens):
        raise PreconditionError("o3_recognition needs 3x3 generators")
    gram = invariant_symmetric_form(gens)
    if gram is None:
        raise NoInvariantForm("no nondegenerate invariant symmetric form")
    order = group_closure(gens, cap=cap)
    recognized = None
    if order == 2 * ell * (ell * ell - 1):
        recognized = f"O3(F_{ell})"
    return GroupReport(order=order,
                       absolutely_irreducible=absolutely_irreducible(gens),
                       invariant_gram=gram,
                       recognized=recognized)
