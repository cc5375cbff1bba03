import math
import random

import pytest

from twistconj.poly import (
    IdentityAuto, LaurentFlip, PolySub, adic_valuation, augmentation,
    divmod_poly, first_irreducible, is_irreducible, parse_ring,
    parse_ring_auto, poly_ring, sign_augmentation, twist_split,
)
from twistconj.rings import RingError, field

F2T = parse_ring("gf(2)[t]")
F3T = parse_ring("gf(3)[t]")
F5L = parse_ring("gf(5)[t,t^-1]")
ZT = parse_ring("z[t]")


def test_arithmetic_examples():
    t1 = F2T.parse("t+1")
    assert t1 * t1 == F2T.parse("t^2+1")                      # Frobenius
    s = F3T.parse("t^2+1")
    assert s * s == F3T.parse("t^4 + 2*t^2 + 1")
    assert F5L.parse("t^-1") * F5L.parse("t") == F5L.one()
    with pytest.raises(RingError):
        F2T.one() + F3T.one()


def test_pow_and_units():
    t = F5L.gen()
    assert t ** -3 == F5L.parse("t^-3")
    assert F5L.is_unit(F5L.parse("2*t^-4"))
    assert not F5L.is_unit(F5L.parse("t+1"))
    assert F2T.is_unit(F2T.one()) and not F2T.is_unit(F2T.gen())
    with pytest.raises(RingError):
        F2T.inv(F2T.gen())


@pytest.mark.parametrize("tag", ["gf(2)[t]", "gf(4)[t]", "gf(9)[t,t^-1]",
                                 "z[t]", "z[t,t^-1]", "gf(5)[t,t^-1]"])
def test_text_round_trip(tag):
    ring = parse_ring(tag)
    rng = random.Random(23)
    assert ring.parse("0") == ring.zero()
    for _ in range(500):
        p = ring.random(rng)
        assert ring.parse(str(p)) == p
    s = "3*t^-2 + 1 + 2*t^5"
    if ring.laurent and ring.base.char() == 0:
        assert str(ring.parse(s)) == s


def test_extension_coefficient_round_trip():
    ring = parse_ring("gf(4)[t]")
    p = ring.parse("(w+1)*t^2 + w")
    assert p.coeff(2) == 3 and p.coeff(0) == 2
    assert ring.parse(str(p)) == p


def test_ring_auto_examples():
    alpha = PolySub(F2T, 1, 1)                     # t -> t + 1
    assert alpha.apply(F2T.parse("t^2")) == F2T.parse("t^2+1")
    flip = LaurentFlip(F5L)
    assert flip.apply(F5L.parse("t^3 + 2*t^-1")) == F5L.parse("t^-3 + 2*t")
    ident = IdentityAuto()
    p = F5L.parse("1 + 3*t^2")
    assert ident.apply(p) == p


def test_ring_auto_is_homomorphism():
    rng = random.Random(29)
    cases = [
        (F2T, PolySub(F2T, 1, 1)),
        (F3T, PolySub(F3T, 2, 1)),
        (F5L, PolySub(F5L, 3, 0)),
        (F5L, LaurentFlip(F5L)),
        (ZT, PolySub(ZT, -1, 2)),
    ]
    for ring, alpha in cases:
        for _ in range(1000):
            p, q = ring.random(rng), ring.random(rng)
            if isinstance(alpha, PolySub) and not ring.base.is_zero(alpha.b):
                p = ring.make({abs(e): c for e, c in p.terms.items()})
                q = ring.make({abs(e): c for e, c in q.terms.items()})
            assert alpha.apply(p * q) == alpha.apply(p) * alpha.apply(q)
            assert alpha.apply(p + q) == alpha.apply(p) + alpha.apply(q)


def test_polysub_preserves_degree():
    rng = random.Random(31)
    alpha = PolySub(F3T, 2, 1)
    for _ in range(300):
        p = F3T.random(rng)
        if not p.is_zero():
            assert alpha.apply(p).degree == p.degree


def test_polysub_guards():
    with pytest.raises(RingError):
        PolySub(F2T, 0, 1)                        # leading coefficient not a unit
    alpha = PolySub(F5L, 2, 1)
    with pytest.raises(RingError):
        alpha.apply(F5L.parse("t^-1"))            # b != 0 on negative support
    assert PolySub(F5L, 2, 0).apply(F5L.parse("t^-1")) == F5L.parse("3*t^-1")


def test_laurent_auto_group_is_c2():
    flip = LaurentFlip(F5L)
    assert flip.compose(flip) == IdentityAuto()
    assert IdentityAuto().compose(flip) == flip
    sub = PolySub(F3T, 2, 1)
    # composing twice: t -> 2(2t+1)+1 = 4t+3 = t over gf(3)
    assert sub.compose(sub) == PolySub(F3T, 1, 0)
    assert sub.compose(sub).is_identity()


def test_parse_ring_auto():
    assert parse_ring_auto("t->t", F2T).is_identity()
    assert isinstance(parse_ring_auto("t->t^-1", F5L), LaurentFlip)
    a = parse_ring_auto("t->2*t+1", F3T)
    assert isinstance(a, PolySub) and a.a == 2 and a.b == 1
    a = parse_ring_auto("t -> t + 1", F2T)
    assert a.a == 1 and a.b == 1
    with pytest.raises(RingError):
        parse_ring_auto("t->t^-1", F2T)           # not a Laurent ring
    with pytest.raises(RingError):
        parse_ring_auto("u->u", F2T)


def test_augmentation():
    p = ZT.parse("t^2 + 3*t")
    assert augmentation(p) == 4 and sign_augmentation(p) == 1
    assert sign_augmentation(ZT.gen()) == -1
    assert augmentation(ZT.zero()) == 0 and sign_augmentation(ZT.zero()) == 1
    rng = random.Random(37)
    for _ in range(500):
        r = ZT.random(rng)
        s = ZT.random(rng)
        assert augmentation(r + s) == augmentation(r) + augmentation(s)
        assert sign_augmentation(-r) == sign_augmentation(r)
    with pytest.raises(RingError):
        augmentation(F2T.one())


def test_adic_valuation_examples():
    f = F3T.parse("t^2+1")
    L = parse_ring("gf(3)[t,t^-1]")
    x = L.make(dict((F3T.parse("t^2+1") * F3T.parse("t^2+1") * F3T.gen()).terms))
    assert adic_valuation(x, f) == 2
    assert adic_valuation(L.parse("t^5"), f) == 0
    assert adic_valuation(L.zero(), f) == math.inf
    assert adic_valuation(L.parse("t^-3 + t^-1"), f) == 1    # t^-3 (1 + t^2)


def test_adic_valuation_properties():
    f = F3T.parse("t^2+1")
    L = parse_ring("gf(3)[t,t^-1]")
    rng = random.Random(41)
    for _ in range(1000):
        x, y = L.random(rng), L.random(rng)
        vx, vy = adic_valuation(x, f), adic_valuation(y, f)
        assert adic_valuation(x * y, f) == vx + vy
        vs = adic_valuation(x + y, f)
        assert vs >= min(vx, vy)
        if vx != vy:
            assert vs == min(vx, vy)


def test_adic_valuation_guards():
    with pytest.raises(RingError):
        adic_valuation(F3T.one(), F3T.gen())                 # f = t
    with pytest.raises(RingError):
        adic_valuation(F3T.one(), F3T.parse("t^2+2"))        # (t+1)(t+2): reducible
    with pytest.raises(RingError):
        adic_valuation(F3T.one(), F3T.parse("2*t+1"))        # not monic


def test_irreducibility_and_division():
    assert first_irreducible(field(2), 2) == F2T.parse("t^2+t+1")
    assert is_irreducible(F3T.parse("t^2+1"))
    assert not is_irreducible(F3T.parse("t^2+2"))
    assert is_irreducible(F2T.parse("t^4+t+1"))
    assert not is_irreducible(F2T.parse("t^4+t^2+1"))
    rng = random.Random(43)
    for _ in range(200):
        a = F3T.random(rng)
        b = F3T.random(rng)
        if b.is_zero():
            continue
        q, r = divmod_poly(a, b)
        assert q * b + r == a
        assert r.is_zero() or r.degree < b.degree


def test_twist_split_examples():
    alpha = PolySub(F2T, 1, 1)
    principal, rem = twist_split(F2T.parse("t^3"), alpha)
    assert principal == []                        # coefficient 1*(1-a^2) = 0
    assert rem == F2T.parse("t^2+t+1")

    alpha3 = PolySub(F3T, 2, 0)
    principal, rem = twist_split(F3T.parse("t^5"), alpha3)
    assert principal == [(1, 2)]                  # 1 - 2^3 = 2 mod 3
    assert rem.is_zero()

    principal, rem = twist_split(F3T.parse("2"), alpha3)
    assert principal == [] and rem.is_zero()


def test_twist_split_recombination():
    rng = random.Random(47)
    for p, a, b in ((2, 1, 1), (3, 2, 1), (5, 3, 2)):
        ring = poly_ring(field(p), laurent=False)
        alpha = PolySub(ring, a, b)
        for _ in range(500):
            h = ring.random(rng, max_terms=6, span=3 * p)
            principal, rem = twist_split(h, alpha)
            back = rem
            for o, c in principal:
                back = back + ring.monomial(c, p * o + p - 1)
            assert back == h - alpha.apply(h)
            assert all(not (e >= 2 * p - 1 and e % p == p - 1) for e in rem.terms)
            assert all(o >= 1 and c != 0 for o, c in principal)


def test_twist_split_guards():
    with pytest.raises(RingError):
        twist_split(F2T.gen(), PolySub(F2T, 1, 0))           # identity excluded
    ring4 = poly_ring(field(4), laurent=False)
    with pytest.raises(RingError):
        twist_split(ring4.gen(), PolySub(ring4, 2, 0))       # not a prime field
