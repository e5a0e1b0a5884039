from fractions import Fraction

import pytest

from midconv.convolution import ConvolutionInput, circ_tuple
from midconv.errors import ParseError, PreconditionError
from midconv.fixtures import kummer_minus_one, l_star_l, quadratic_tuple
from midconv.linalg import Matrix, rank, row_space_basis, vec_mat
from midconv.tuples import (BraidWord, MonodromyTuple, braid_act,
                            cohomology_spaces, in_span, parabolic_rank_formula,
                            parse_braid_word, phi_matrix, phi_transport,
                            pure_braid, sort_points)
from midconv.tupleio import load_tuple, save_tuple

from conftest import F7, Q, random_invertible, random_tuple


def scalar_tuple(*values, points=None):
    return MonodromyTuple.from_finite_entries(
        Q, [Matrix.from_rows(Q, [[v]]) for v in values], points)


def test_product_relation_enforced():
    with pytest.raises(PreconditionError):
        MonodromyTuple.make(Q, [Matrix.from_rows(Q, [[2]]), Matrix.from_rows(Q, [[1]])])


def test_points_validated():
    with pytest.raises(PreconditionError):
        scalar_tuple(-1, -1, points=[1, 1])
    with pytest.raises(PreconditionError):
        scalar_tuple(-1, -1, points=[1])


def test_braid_act_formula(rng):
    a, b, c = (random_invertible(Q, 2, rng) for _ in range(3))
    T = MonodromyTuple.from_finite_entries(Q, [a, b, c])
    out = braid_act(T, BraidWord(3, ((1, 1),)))
    assert out.entries[0] == b
    assert out.entries[1] == b.inverse() @ a @ b
    assert out.entries[2] == c
    assert out.entries[3] == T.entries[3]


def test_braid_act_inverse_undoes(rng):
    T = random_tuple(Q, 2, 3, rng)
    w = BraidWord(3, ((2, 1),))
    assert braid_act(braid_act(T, w), w.inverse()).entries == T.entries


def test_braid_relations(rng):
    for _ in range(5):
        T = random_tuple(Q, 2, 3, rng)
        w1 = parse_braid_word("b1 b2 b1", 3)
        w2 = parse_braid_word("b2 b1 b2", 3)
        assert braid_act(T, w1).entries == braid_act(T, w2).entries
    for _ in range(3):
        T = random_tuple(Q, 2, 4, rng)
        w1 = parse_braid_word("b1 b3", 4)
        w2 = parse_braid_word("b3 b1", 4)
        assert braid_act(T, w1).entries == braid_act(T, w2).entries


def test_braid_word_grammar():
    w = parse_braid_word("b2 b1 b1 b2^-1", 3)
    assert w.letters == ((2, 1), (1, 1), (1, 1), (2, -1))
    assert str(w) == "b2 b1 b1 b2^-1"
    with pytest.raises(ParseError):
        parse_braid_word("x1", 3)
    with pytest.raises(ParseError):
        parse_braid_word("b9", 3)


def test_pure_braid_expansion():
    assert str(pure_braid(1, 2, 4)) == "b1 b1"
    assert str(pure_braid(1, 3, 4)) == "b2 b1 b1 b2^-1"


def test_pure_braid_alternate_form(rng):
    # (beta_i^2)^(beta_{i+1}^-1...beta_{j-1}^-1) = (beta_{j-1}^2)^(beta_{j-2}...beta_i)
    r = 4
    for (i, j) in [(1, 3), (1, 4), (2, 4)]:
        alt_core = BraidWord(r, ((j - 1, 1), (j - 1, 1)))
        alt_conj = BraidWord(r, tuple((k, 1) for k in range(j - 2, i - 1, -1)))
        alt = alt_core.conjugate_by(alt_conj)
        for _ in range(3):
            T = random_tuple(Q, 2, r, rng)
            assert braid_act(T, pure_braid(i, j, r)).entries == braid_act(T, alt).entries


def test_phi_rank_one_formula(rng):
    a, b, c = 3, 5, Fraction(1, 15)
    T = scalar_tuple(a, b, c)
    big = phi_matrix(T, BraidWord(3, ((1, 1),)))
    v = (Q.from_int(7), Q.from_int(11), Q.from_int(13), Q.from_int(17))
    img = vec_mat(v, big)
    # (v1, v2, v3, v4) -> (v2, v2 (1 - a) + v1 b, v3, v4)
    assert img[0].payload == 11
    assert img[1].payload == 11 * (1 - a) + 7 * b
    assert img[2].payload == 13 and img[3].payload == 17


def test_phi_cocycle_rule(rng):
    for _ in range(3):
        T = random_tuple(Q, 2, 3, rng)
        w = BraidWord(3, ((1, 1),))
        P1, T1 = phi_transport(T, w)
        P2, _ = phi_transport(T1, w)
        P12, _ = phi_transport(T, w * w)
        assert P1 @ P2 == P12


def test_phi_empty_word_is_identity(rng):
    T = random_tuple(Q, 2, 3, rng)
    assert phi_matrix(T, BraidWord(3, ())) == Matrix.identity(Q, 4 * 2)


def test_phi_transports_u_and_e(rng):
    for _ in range(3):
        T = random_tuple(F7, 2, 3, rng)
        w = parse_braid_word("b1 b2^-1 b1", 3)
        big, TW = phi_transport(T, w)
        assert TW.entries == braid_act(T, w).entries
        s1 = cohomology_spaces(T)
        s2 = cohomology_spaces(TW)
        img_u = [vec_mat(u, big) for u in s1.u_basis]
        img_e = [vec_mat(u, big) for u in s1.e_basis]
        assert len(row_space_basis(img_u)) == len(s2.u_basis)
        assert all(in_span(list(s2.u_basis), v) for v in img_u)
        assert all(in_span(list(s2.e_basis), v) for v in img_e)


def test_cohomology_minus_ones():
    T = scalar_tuple(-1, -1, -1, -1)
    sp = cohomology_spaces(T)
    assert sp.dims == (3, 1, 3)
    assert sp.parabolic_dim == 2


def test_cohomology_trivial_tuple():
    T = scalar_tuple(1, 1, 1)
    sp = cohomology_spaces(T)
    assert len(sp.u_basis) == 0
    assert sp.parabolic_dim == 0


def test_circ_tuple_of_second_convolution_has_parabolic_dim_3():
    inp = ConvolutionInput(l_star_l(), kummer_minus_one())
    C = circ_tuple(inp)
    assert cohomology_spaces(C).parabolic_dim == 3


def test_parabolic_rank_formula_examples():
    assert parabolic_rank_formula(scalar_tuple(-1, -1, -1, -1)) == 2
    assert parabolic_rank_formula(scalar_tuple(-1, -1, 1)) == 0
    T = MonodromyTuple.from_finite_entries(Q, [Matrix.identity(Q, 3)] * 2)
    assert parabolic_rank_formula(T) == 0


@pytest.mark.parametrize("field", [Q, F7], ids=str)
def test_parabolic_formula_matches_cohomology(field, rng):
    for _ in range(25):
        dim = rng.randint(1, 3)
        r = rng.randint(2, 5)
        T = random_tuple(field, dim, r, rng)
        sp = cohomology_spaces(T)
        assert parabolic_rank_formula(T) == sp.parabolic_dim


def test_sort_points_is_a_remarking(rng):
    T = random_tuple(Q, 2, 4, rng, with_points=True)
    S = sort_points(T)
    assert list(S.points) == sorted(T.points)
    # conjugacy class multiset of finite entries is preserved
    from midconv.linalg import char_poly
    before = sorted(tuple(c.payload for c in char_poly(M)) for M in T.finite_entries())
    after = sorted(tuple(c.payload for c in char_poly(M)) for M in S.finite_entries())
    assert before == after
    assert S.infinity_entry() == T.infinity_entry()


def test_tuple_io_round_trip(rng):
    from midconv.scalars import FieldDescriptor
    cases = [quadratic_tuple(), l_star_l(),
             random_tuple(F7, 2, 3, rng, with_points=True)]
    Z12 = FieldDescriptor.cyclotomic(12)
    cases.append(random_tuple(Z12, 2, 2, rng, with_points=True))
    F49 = FieldDescriptor.finite(7, 2)
    cases.append(random_tuple(F49, 2, 2, rng, with_points=True))
    for T in cases:
        back = load_tuple(save_tuple(T))
        assert back.field == T.field
        assert back.entries == T.entries
        assert back.points == T.points
