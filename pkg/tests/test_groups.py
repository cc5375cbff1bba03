import json
import random

import pytest

from twistconj import groups
from twistconj.groups import (
    AffElem, Affine, Borel, CornerDiag, CornerDiagGroup, GroupError,
    ProjElem, ProjBorel, Unitriangular, aff_from_proj, center_bruteforce,
    commutator_escape, diag_elem, element_word, elementary, from_rows,
    gamma_member, identity, mat_from_json, mat_to_json, normal_form,
    parse_element, proj_from_aff, recompose, superdiagonal, to_affine,
)
from twistconj.experiments import relations_suite
from twistconj.poly import parse_ring
from twistconj.rings import ZZ, field, localized

F2 = field(2)
F3 = field(3)
F4 = field(4)
F2T = parse_ring("gf(2)[t]")
F5T = parse_ring("gf(5)[t]")
F5L = parse_ring("gf(5)[t,t^-1]")
F4L = parse_ring("gf(4)[t,t^-1]")


def test_elementary_examples():
    e = elementary(ZZ, 2, 1, 2, 2)
    assert e.rows() == [[1, 2], [0, 1]]
    d = diag_elem(ZZ, 2, 2, -1)
    assert d.rows() == [[1, 0], [0, -1]]
    assert elementary(ZZ, 2, 1, 2, 0).is_identity()
    with pytest.raises(GroupError):
        elementary(ZZ, 3, 2, 2, 1)
    with pytest.raises(GroupError):
        elementary(ZZ, 3, 3, 1, 1)
    with pytest.raises(GroupError):
        diag_elem(ZZ, 2, 1, 2)           # 2 is not a unit of z


def test_commutator_examples():
    t = F2T.gen()
    lhs = elementary(F2T, 3, 1, 2, t).commutator(
        elementary(F2T, 3, 2, 3, t + F2T.one()))
    assert lhs == elementary(F2T, 3, 1, 3, F2T.parse("t^2+t"))

    d = diag_elem(F5L, 2, 1, F5L.gen())
    f = F5L.parse("2*t+1")
    assert d * elementary(F5L, 2, 1, 2, f) * d.inv() == \
        elementary(F5L, 2, 1, 2, F5L.gen() * f)

    a = elementary(ZZ, 4, 1, 2, 5)
    b = elementary(ZZ, 4, 3, 4, 7)
    assert a.commutator(b).is_identity()


@pytest.mark.parametrize("tag", ["gf(4)", "gf(5)[t]", "gf(5)[t,t^-1]",
                                 "z", "z[1/6]", "z[t]", "z[t,t^-1]"])
def test_relations_sampled(tag):
    ring = parse_ring(tag)
    rng = random.Random(53)
    for n in range(2, 7):
        ok, checked, bad = relations_suite(ring, n, 60, rng)
        assert ok, bad
        assert checked == 60


def test_normal_form_example():
    m = from_rows(F2, [[1, 1, 1], [0, 1, 1], [0, 0, 1]])
    assert normal_form(m).coeffs == (1, 1, 0)
    assert normal_form(identity(F2, 3)).coeffs == (0, 0, 0)
    r = F5T.parse("t+2")
    m = elementary(F5T, 3, 1, 3, r)
    assert normal_form(m).coeffs == (F5T.zero(), F5T.zero(), r)
    with pytest.raises(GroupError):
        normal_form(diag_elem(F3, 2, 1, 2))


def test_normal_form_round_trip():
    rng = random.Random(59)
    for tag in ("gf(4)", "z[1/6]", "gf(5)[t,t^-1]"):
        ring = parse_ring(tag)
        for n in range(2, 7):
            U = Unitriangular(ring, n)
            for _ in range(40):
                u = U.random(rng)
                assert recompose(normal_form(u)) == u


def test_series_membership():
    r = F5T.gen()
    assert gamma_member(elementary(F5T, 3, 1, 3, r), 2)
    assert not gamma_member(elementary(F5T, 3, 1, 2, F5T.one()), 2)
    assert gamma_member(identity(F5T, 3), 3)
    with pytest.raises(GroupError):
        gamma_member(identity(F5T, 3), 4)


def test_series_inclusion_and_center_layer():
    rng = random.Random(61)
    for n in (3, 4, 5):
        U = Unitriangular(F2T, n)
        for _ in range(100):
            g = U.random(rng)
            nf = normal_form(U.random(rng))
            k = rng.randint(1, n - 1)
            coeffs = [c if j - i >= k else F2T.zero()
                      for (i, j), c in zip(groups.nf_positions(n), nf.coeffs)]
            hk = recompose(groups.NormalForm(F2T, n, tuple(coeffs)))
            assert gamma_member(hk, k)
            assert gamma_member(g.commutator(hk), min(k + 1, n))
        # the last proper series term is the corner subgroup
        for u in Unitriangular(F2, n).elements():
            assert gamma_member(u, n - 1) == (set(u.upper) <= {(1, n)})


def test_superdiagonal_additivity():
    rng = random.Random(67)
    U = Unitriangular(F5L, 4)
    for _ in range(300):
        u, v = U.random(rng), U.random(rng)
        s = superdiagonal(u * v)
        assert s == tuple(F5L.add(a, b) for a, b in
                          zip(superdiagonal(u), superdiagonal(v)))


def test_projective_scalar_invariance():
    for q in (2, 3, 4, 5, 7, 8, 9):
        F = field(q)
        for n in (2, 3):
            rng = random.Random(71)
            B = Borel(F, n)
            for _ in range(20):
                m = B.random(rng)
                for u in F.units():
                    assert ProjElem(m) == ProjElem(m.scaled(u))


def test_affine_is_projective_2x2():
    rng = random.Random(73)
    A = Affine(F5L)
    for _ in range(1000):
        a, b = A.random(rng), A.random(rng)
        assert proj_from_aff(a * b) == proj_from_aff(a) * proj_from_aff(b)
        assert aff_from_proj(proj_from_aff(a)) == a
    P = ProjBorel(F5L, 2)
    for _ in range(200):
        g, h = P.random(rng), P.random(rng)
        assert aff_from_proj(g * h) == aff_from_proj(g) * aff_from_proj(h)


def test_to_affine_examples():
    w = CornerDiag(F4L, 3, F4L.zero(), (F4L.one(),) * 3)
    assert to_affine(w).is_identity()

    t = F4L.gen()
    w = CornerDiag(F4L, 3, t, (t, F4L.one(), F4L.one()))
    img = to_affine(w)
    assert img.u == t and img.r == t

    Z2 = localized(2)
    two = Z2.from_int(2)
    w = CornerDiag(Z2, 4, Z2.from_int(5), (two, Z2.one(), Z2.one(), two))
    img = to_affine(w)
    assert img.u == Z2.one() and img.r == Z2.from_int(5)
    assert not img.is_identity()


def test_to_affine_homomorphism_and_kernel():
    rng = random.Random(79)
    W = CornerDiagGroup(F5L, 4)
    for _ in range(1000):
        a, b = W.random(rng), W.random(rng)
        assert to_affine(W.mul(a, b)) == to_affine(a) * to_affine(b)
    for _ in range(300):
        w = W.random(rng)
        in_kernel = to_affine(w).is_identity()
        structural = F5L.is_zero(w.r) and w.dunits[0] == w.dunits[-1]
        assert in_kernel == structural


def test_center_examples():
    Z = center_bruteforce(Borel(F3, 2))
    assert set(Z) == {identity(F3, 2), identity(F3, 2).scaled(2)}
    Z = center_bruteforce(Unitriangular(F2, 3))
    assert set(Z) == {identity(F2, 3), elementary(F2, 3, 1, 3, 1)}
    Z = center_bruteforce(CornerDiagGroup(F4, 3))
    for w in Z:
        assert F4.is_zero(w.r) and w.dunits[0] == w.dunits[-1]
    assert len(Z) == 3
    # generator-based centralizer equals the all-pairs one
    for grp in (Borel(F3, 2), Unitriangular(F2, 3), CornerDiagGroup(F3, 3)):
        assert center_bruteforce(grp) == center_bruteforce(grp, full_pairs=True)
    with pytest.raises(GroupError):
        center_bruteforce(Borel(F3, 2), budget=3)


def test_commutator_escape_diagonal_class():
    m = ProjElem(diag_elem(F4, 2, 1, F4.gen()))
    rep = commutator_escape(m, 5)
    assert len(rep.chain) == 5
    assert all(not c.is_identity() for c in rep.chain)


def test_commutator_escape_formula():
    m = ProjElem(elementary(F5T, 3, 1, 2, F5T.gen()) *
                 diag_elem(F5T, 3, 1, F5T.from_int(2)))
    rep = commutator_escape(m, 8)
    factor = F5T.from_int(-1)        # 1 - 2 = -1 = 4 over gf(5)
    assert rep.ratio_factor == F5T.from_int(4) == factor
    expect = F5T.gen()
    for coeff in rep.leading:
        expect = expect * factor
        assert coeff == expect
        assert not coeff.is_zero()


def test_commutator_escape_rejects_unipotent():
    with pytest.raises(GroupError):
        commutator_escape(ProjElem(elementary(F4, 3, 1, 2, 1)), 3)


def test_element_word_round_trip():
    rng = random.Random(83)
    for tag in ("gf(4)", "gf(5)[t,t^-1]", "z[1/6]"):
        ring = parse_ring(tag)
        B = Borel(ring, 3)
        for _ in range(200):
            m = B.random(rng)
            assert parse_element(element_word(m), ring, 3) == m
    assert parse_element("1", F4, 3).is_identity()
    assert parse_element("e(1,2;w) d(2;w+1)", F4, 2) == \
        elementary(F4, 2, 1, 2, 2) * diag_elem(F4, 2, 2, 3)
    with pytest.raises(GroupError):
        parse_element("nonsense", F4, 2)


def test_matrix_json_round_trip():
    rng = random.Random(89)
    for tag in ("gf(2)[t]", "z[t,t^-1]", "gf(9)"):
        ring = parse_ring(tag)
        B = Borel(ring, 3)
        for _ in range(100):
            m = B.random(rng)
            data = json.loads(json.dumps(mat_to_json(m)))
            assert mat_from_json(data) == m
    bad = mat_to_json(identity(F4, 2))
    bad["rows"][1][0] = "w"
    with pytest.raises(GroupError):
        mat_from_json(bad)


def test_enumeration_sizes_and_order():
    assert len(list(Unitriangular(F2, 3).elements())) == 8
    assert len(list(Borel(F3, 2).elements())) == 12
    assert len(list(ProjBorel(F3, 2).elements())) == 6
    assert len(list(CornerDiagGroup(F4, 3).elements())) == 36
    assert len(list(Affine(F4).elements())) == 12
    first = next(iter(Unitriangular(F2, 3).elements()))
    assert first.is_identity()       # all-zero coefficients come first


def test_bs_and_lamplighter_presentations():
    # a |-> e(1), b |-> d(p) satisfies b a b^-1 = a^p in the positive
    # affine group over z[1/p]
    for p in (2, 3, 5):
        ring = localized(p)
        a = AffElem(ring, ring.one(), ring.one())
        b = AffElem(ring, ring.from_int(p), ring.zero())
        lhs = b * a * b.inv()
        rhs = a
        for _ in range(p - 1):
            rhs = rhs * a
        assert lhs == rhs

    # over gf(p)[t,t^-1]: a^p = 1 and shifted copies of a commute
    for p in (2, 3):
        ring = parse_ring(f"gf({p})[t,t^-1]")
        a = AffElem(ring, ring.one(), ring.one())
        b = AffElem(ring, ring.gen(), ring.zero())
        acc = a
        for _ in range(p - 1):
            acc = acc * a
        assert acc.is_identity()
        rng = random.Random(97)
        for _ in range(50):
            k, l = rng.randint(-4, 4), rng.randint(-4, 4)
            bk = AffElem(ring, ring.gen() ** k, ring.zero())
            bl = AffElem(ring, ring.gen() ** l, ring.zero())
            x = bk * a * bk.inv()
            y = bl * a * bl.inv()
            assert x * y == y * x
