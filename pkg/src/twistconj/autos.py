"""The automorphism catalog: inner, central, type-Sigma, flip, ring-map,
corner-scaling, block-companion and reflection automorphisms, together
with homomorphism verification, the factor-preserving normalisation of a
semidirect-product automorphism, and induced actions on quotients.

Word grammar (composed with '*', applied right to left):

    inner(<elem>) ; central(i,<endo>) ; sigma(<endo>,<a>) ;
    sigmap(<endo>,<a>) ; flip ; ring(t->a*t+b) ; ring(t->t^-1) ;
    phiP(<poly>) ; mul(<a>) ; phiA(<a>) ; phiB(<a>) ; augB2 ;
    augB2plus ; tauAlpha(<ringauto>) ; id

    <endo> = zero | mulby(<r>) | halfsquare(<a>)
"""

from __future__ import annotations

import math
import random
import re
from typing import NamedTuple

from . import groups, poly, rings
from .groups import (
    Additive, AdditivePairs, Affine, AffElem, Borel, CornerDiag,
    CornerDiagGroup, GroupError, ProjBorel, ProjElem, TriMat, Unitriangular,
    diag_matrix, elementary, identity, normal_form, superdiagonal,
)
from .linalg import bareiss_det
from .poly import (
    Poly, PolyRing, RingAutoDesc, augmentation, is_irreducible,
    parse_ring_auto, sign_augmentation,
)
from .rings import RingError


# ---------------------------------------------------------------------------
# additive endomorphism descriptors

class EndoDesc:
    def apply(self, r):
        raise NotImplementedError

    def word(self):
        raise NotImplementedError

    def is_additive(self):
        return True


class ZeroEndo(EndoDesc):
    def __init__(self, ring):
        self.ring = ring

    def apply(self, r):
        return self.ring.zero()

    def word(self):
        return "zero"


class MulBy(EndoDesc):
    def __init__(self, ring, r):
        self.ring = ring
        self.r = r

    def apply(self, x):
        return self.ring.mul(self.r, x)

    def word(self):
        return f"mulby({self.ring.to_str(self.r)})"


class WindowLinear(EndoDesc):
    """Acts by a matrix on the coefficients inside a degree window and
    kills the monomials outside it; an additive endomorphism of (R,+)."""

    def __init__(self, window, matrix):
        self.window = window
        self.matrix = [list(r) for r in matrix]
        if len(self.matrix) != window.dim or any(len(r) != window.dim for r in self.matrix):
            raise RingError("window-linear matrix has the wrong shape")

    @property
    def ring(self):
        return self.window.ring

    def apply(self, x):
        w = self.window
        F = w.ring.base
        inside = {e: c for e, c in x.terms.items() if w.lo <= e <= w.hi}
        coords = w.coords(w.ring.make(inside))
        out = [F.zero()] * w.dim
        for i in range(w.dim):
            acc = F.zero()
            for j, c in enumerate(coords):
                if c:
                    acc = F.add(acc, F.mul(self.matrix[i][j], c))
            out[i] = acc
        return w.from_coords(out)

    def word(self):
        return "windowlinear(...)"


class HalfSquare(EndoDesc):
    """lambda(r) = a * r^2 / 2; satisfies the type-Sigma condition
    lambda(r+s) = a*r*s + lambda(r) + lambda(s) whenever 2 is a unit."""

    def __init__(self, ring, a):
        two = ring.from_int(2)
        if not ring.is_unit(two):
            raise RingError(f"halfsquare needs 2 invertible in {ring.tag}")
        self.ring = ring
        self.a = a
        self._half = ring.inv(two)

    def apply(self, r):
        ring = self.ring
        return ring.mul(self.a, ring.mul(ring.mul(r, r), self._half))

    def is_additive(self):
        return self.ring.is_zero(self.a)

    def word(self):
        return f"halfsquare({self.ring.to_str(self.a)})"


# ---------------------------------------------------------------------------
# automorphism descriptors

class Automorphism:
    domain = None

    def apply(self, x):
        raise NotImplementedError

    def __call__(self, x):
        return self.apply(x)

    def word(self):
        raise NotImplementedError

    def __repr__(self):
        return self.word()


class IdentityMap(Automorphism):
    def __init__(self, domain):
        self.domain = domain

    def apply(self, x):
        return x

    def word(self):
        return "id"


class Inner(Automorphism):
    """Conjugation h -> g h g^-1.  A projective g conjugates plain
    unitriangular matrices as well (scalars are central)."""

    def __init__(self, g, domain=None):
        self.g = g
        if domain is None:
            if isinstance(g, TriMat):
                domain = Borel(g.ring, g.n)
            elif isinstance(g, ProjElem):
                domain = ProjBorel(g.ring, g.n)
            elif isinstance(g, AffElem):
                domain = Affine(g.ring)
            elif isinstance(g, CornerDiag):
                domain = CornerDiagGroup(g.ring, g.n)
        self.domain = domain

    def apply(self, x):
        g = self.g
        if isinstance(g, ProjElem) and isinstance(x, TriMat):
            return g.conj(x)
        if isinstance(g, TriMat) and isinstance(x, ProjElem):
            return ProjElem(g) * x * ProjElem(g).inv()
        if type(g) is not type(x):
            raise GroupError("conjugation across incompatible element kinds")
        return g * x * g.inv()

    def word(self):
        if isinstance(self.g, TriMat):
            return f"inner({groups.element_word(self.g)})"
        if isinstance(self.g, ProjElem):
            return f"inner({groups.element_word(self.g.mat)})"
        return f"inner({self.g!r})"


class Central(Automorphism):
    """Multiplies by e_{1,n}(lambda(a_{i,i+1})); touches only the corner."""

    def __init__(self, group: Unitriangular, i: int, lam: EndoDesc):
        if not 1 <= i <= group.n - 1:
            raise GroupError("central automorphism index out of range")
        if not lam.is_additive():
            raise GroupError("central automorphisms need an additive map")
        self.domain = group
        self.i = i
        self.lam = lam

    def apply(self, m: TriMat):
        if not (isinstance(m, TriMat) and m.is_unitriangular()):
            raise GroupError("central automorphisms act on unitriangular matrices")
        g = self.domain
        val = self.lam.apply(m.entry(self.i, self.i + 1))
        return m * elementary(g.ring, g.n, 1, g.n, val)

    def word(self):
        return f"central({self.i},{self.lam.word()})"


def _check_sigma_pair(ring, lam, a, rng=None, samples=1000):
    rng = rng or random.Random(0)
    for _ in range(samples):
        r, s = ring.random(rng), ring.random(rng)
        lhs = lam.apply(ring.add(r, s))
        rhs = ring.add(ring.mul(a, ring.mul(r, s)),
                       ring.add(lam.apply(r), lam.apply(s)))
        if lhs != rhs:
            return (r, s)
    return None


class SigmaFirst(Automorphism):
    """u -> u * e_{2,n}(a*u_{1,2}) * e_{1,n}(lambda(u_{1,2}) - a*u_{1,2}^2)."""

    def __init__(self, group: Unitriangular, lam, a, unchecked=False):
        if group.n < 3:
            raise GroupError("type-Sigma automorphisms need n >= 3")
        if not unchecked:
            bad = _check_sigma_pair(group.ring, lam, a)
            if bad is not None:
                raise GroupError(f"(lambda, a) violates the Sigma condition at {bad}")
        self.domain = group
        self.lam = lam
        self.a = a

    def apply(self, m: TriMat):
        if not (isinstance(m, TriMat) and m.is_unitriangular()):
            raise GroupError("type-Sigma automorphisms act on unitriangular matrices")
        g = self.domain
        ring = g.ring
        r = m.entry(1, 2)
        corner = ring.sub(self.lam.apply(r), ring.mul(self.a, ring.mul(r, r)))
        return m * elementary(ring, g.n, 2, g.n, ring.mul(self.a, r)) \
                 * elementary(ring, g.n, 1, g.n, corner)

    def word(self):
        return f"sigma({self.lam.word()},{self.domain.ring.to_str(self.a)})"


class SigmaLast(Automorphism):
    """u -> u * e_{1,n-1}(a*u_{n-1,n}) * e_{1,n}(lambda(u_{n-1,n}))."""

    def __init__(self, group: Unitriangular, lam, a, unchecked=False):
        if group.n < 3:
            raise GroupError("type-Sigma automorphisms need n >= 3")
        if not unchecked:
            bad = _check_sigma_pair(group.ring, lam, a)
            if bad is not None:
                raise GroupError(f"(lambda, a) violates the Sigma condition at {bad}")
        self.domain = group
        self.lam = lam
        self.a = a

    def apply(self, m: TriMat):
        if not (isinstance(m, TriMat) and m.is_unitriangular()):
            raise GroupError("type-Sigma automorphisms act on unitriangular matrices")
        g = self.domain
        ring = g.ring
        r = m.entry(g.n - 1, g.n)
        return m * elementary(ring, g.n, 1, g.n - 1, ring.mul(self.a, r)) \
                 * elementary(ring, g.n, 1, g.n, self.lam.apply(r))

    def word(self):
        return f"sigmap({self.lam.word()},{self.domain.ring.to_str(self.a)})"


class Flip(Automorphism):
    """e_{i,j}(r) -> e_{n-j+1,n-i+1}((-1)^(j-i-1) r): the anti-diagonal
    reflection; an involution of the unitriangular group."""

    def __init__(self, group: Unitriangular):
        self.domain = group

    def apply(self, m: TriMat):
        if not (isinstance(m, TriMat) and m.is_unitriangular()):
            raise GroupError("flip acts on unitriangular matrices")
        g = self.domain
        ring = g.ring
        out = identity(ring, g.n)
        for (i, j), r in normal_form(m).factors():
            if ring.is_zero(r):
                continue
            if (j - i - 1) % 2:
                r = ring.neg(r)
            out = out * elementary(ring, g.n, g.n - j + 1, g.n - i + 1, r)
        return out

    def word(self):
        return "flip"


class RingMap(Automorphism):
    """Entrywise application of a coefficient-ring automorphism; on the
    additive group it is the same map viewed additively."""

    def __init__(self, alpha: RingAutoDesc, domain):
        self.alpha = alpha
        self.domain = domain

    def apply(self, x):
        a = self.alpha
        if isinstance(x, TriMat):
            return TriMat(x.ring, x.n, tuple(a.apply(u) for u in x.diag),
                          {k: a.apply(v) for k, v in x.upper.items()})
        if isinstance(x, ProjElem):
            return ProjElem(self.apply(x.mat))
        if isinstance(x, AffElem):
            return AffElem(x.ring, a.apply(x.u), a.apply(x.r))
        if isinstance(x, CornerDiag):
            return CornerDiag(x.ring, x.n, a.apply(x.r),
                              tuple(a.apply(u) for u in x.dunits))
        if isinstance(x, Poly):
            return a.apply(x)
        raise GroupError("ring maps act on matrix or additive elements")

    def word(self):
        return f"ring({self.alpha.word()})"


class BlockCompanion(Automorphism):
    """The additive automorphism of gf(q)[t] acting as the companion
    matrix of a monic irreducible P on each consecutive block of deg(P)
    coefficients."""

    def __init__(self, P: Poly):
        ring = P.ring
        if ring.laurent or not isinstance(ring.base, rings.GaloisField):
            raise GroupError("block companion lives over gf(q)[t]")
        if not is_irreducible(P):
            raise GroupError("companion polynomial must be irreducible")
        d = P.degree
        if P.coeff(d) != ring.base.one():
            raise GroupError("companion polynomial must be monic")
        self.P = P
        self.d = d
        self.ring = ring
        self.coeffs = [P.coeff(i) for i in range(d)]
        self.domain = Additive(ring)
        self.block_size = d

    def companion_matrix(self):
        F = self.ring.base
        d = self.d
        C = [[F.zero()] * d for _ in range(d)]
        for r in range(1, d):
            C[r][r - 1] = F.one()
        for r in range(d):
            C[r][d - 1] = F.sub(C[r][d - 1], self.coeffs[r])
        return C

    def apply(self, v: Poly):
        if not isinstance(v, Poly) or v.ring is not self.ring:
            raise GroupError(f"block companion acts on {self.ring.tag}")
        F = self.ring.base
        d = self.d
        blocks = {}
        for e, c in v.terms.items():
            blocks.setdefault(e // d, {})[e % d] = c
        out = {}
        for k, blk in blocks.items():
            last = blk.get(d - 1, F.zero())
            for r in range(d):
                val = blk.get(r - 1, F.zero()) if r >= 1 else F.zero()
                if last != F.zero():
                    val = F.sub(val, F.mul(self.coeffs[r], last))
                if val != F.zero():
                    out[k * d + r] = val
        return self.ring.make(out)

    def word(self):
        return f"phiP({self.P})"


class CenterScale(Automorphism):
    """Multiplication by a unit a on the additive group of the ring."""

    def __init__(self, ring, a):
        if not ring.is_unit(a):
            raise GroupError(f"{ring.to_str(a)} is not a unit of {ring.tag}")
        self.ring = ring
        self.a = a
        self.domain = Additive(ring)
        self.block_size = 1

    def apply(self, r):
        return self.ring.mul(self.a, r)

    def word(self):
        return f"mul({self.ring.to_str(self.a)})"


def _tf_monomial_exponent(ring, u):
    tor, exps = ring.unit_decompose(u)
    if tor != ring.one():
        raise GroupError("diagonal entry has a torsion factor; not in the '+' group")
    return exps[0]


class AffineReflect(Automorphism):
    """(t^k, f) -> (t^-k, a*f(1/t)) on the torsion-free affine group over
    gf(q)[t,t^-1]."""

    def __init__(self, ring: PolyRing, a):
        if not (ring.laurent and isinstance(ring.base, rings.GaloisField)):
            raise GroupError("reflection needs gf(q)[t,t^-1]")
        if not ring.base.is_unit(a):
            raise GroupError("the reflection scalar must be a nonzero field element")
        self.ring = ring
        self.a = a
        self.domain = Affine(ring, plus=True)

    def apply(self, x: AffElem):
        if not isinstance(x, AffElem) or x.ring is not self.ring:
            raise GroupError("reflection acts on the affine group over its ring")
        _tf_monomial_exponent(self.ring, x.u)
        r = x.r.reversed_var().scale(self.a)
        return AffElem(self.ring, self.ring.inv(x.u), r)

    def word(self):
        return f"phiA({self.ring.base.to_str(self.a)})"


class TriangularReflect(Automorphism):
    """((t^k, f), (0, t^j)) -> ((t^-k, a*f(1/t)), (0, t^-j)) on the
    torsion-free 2x2 triangular group over gf(q)[t,t^-1]."""

    def __init__(self, ring: PolyRing, a):
        if not (ring.laurent and isinstance(ring.base, rings.GaloisField)):
            raise GroupError("reflection needs gf(q)[t,t^-1]")
        if not ring.base.is_unit(a):
            raise GroupError("the reflection scalar must be a nonzero field element")
        self.ring = ring
        self.a = a
        self.domain = Borel(ring, 2, plus=True)

    def apply(self, m: TriMat):
        if not (isinstance(m, TriMat) and m.n == 2 and m.ring is self.ring):
            raise GroupError("reflection acts on 2x2 triangular matrices over its ring")
        for u in m.diag:
            _tf_monomial_exponent(self.ring, u)
        ring = self.ring
        diag = tuple(ring.inv(u) for u in m.diag)
        corner = m.entry(1, 2).reversed_var().scale(self.a)
        upper = {} if corner.is_zero() else {(1, 2): corner}
        return TriMat(ring, 2, diag, upper)

    def word(self):
        return f"phiB({self.ring.base.to_str(self.a)})"


class AugScale(Automorphism):
    """Scales a 2x2 integer-polynomial matrix by the sign augmentation of
    its corner; does not preserve the unitriangular subgroup."""

    def __init__(self, ring=None):
        ring = ring or poly.poly_ring(rings.ZZ, laurent=False)
        if ring.laurent or not isinstance(ring.base, rings.IntegerRing):
            raise GroupError("augmentation scaling lives over z[t]")
        self.ring = ring
        self.domain = Borel(ring, 2)

    def apply(self, m: TriMat):
        if not (isinstance(m, TriMat) and m.n == 2 and m.ring is self.ring):
            raise GroupError("augmentation scaling acts on 2x2 matrices over z[t]")
        s = sign_augmentation(m.entry(1, 2))
        return m if s == 1 else m.scaled(self.ring.from_int(-1))

    def word(self):
        return "augB2"


class AugShift(Automorphism):
    """Scales a 2x2 integer-Laurent matrix by t^(coefficient sum of its
    corner); an automorphism of the torsion-free group that moves
    unitriangular matrices off the unitriangular subgroup."""

    def __init__(self, ring=None):
        ring = ring or poly.poly_ring(rings.ZZ, laurent=True)
        if not ring.laurent or not isinstance(ring.base, rings.IntegerRing):
            raise GroupError("augmentation shifting lives over z[t,t^-1]")
        self.ring = ring
        self.domain = Borel(ring, 2, plus=True)

    def apply(self, m: TriMat):
        if not (isinstance(m, TriMat) and m.n == 2 and m.ring is self.ring):
            raise GroupError("augmentation shifting acts on 2x2 matrices over z[t,t^-1]")
        e = augmentation(m.entry(1, 2))
        return m.scaled(self.ring.monomial(1, e))

    def word(self):
        return "augB2plus"


class PairSwap(Automorphism):
    """(r, s) -> (alpha(s), alpha(r)) on R x R."""

    def __init__(self, alpha: RingAutoDesc, ring):
        self.alpha = alpha
        self.ring = ring
        self.domain = AdditivePairs(ring)
        self.block_size = 1

    def apply(self, x):
        if not (isinstance(x, tuple) and len(x) == 2):
            raise GroupError("pair swap acts on pairs")
        return (self.alpha.apply(x[1]), self.alpha.apply(x[0]))

    def word(self):
        return f"tauAlpha({self.alpha.word()})"


class Compose(Automorphism):
    """Right-to-left composition."""

    def __init__(self, parts):
        parts = list(parts)
        if not parts:
            raise GroupError("empty composition")
        names = {p.domain.name for p in parts if p.domain is not None}
        if len(names) > 1:
            raise GroupError(f"composition across domains {sorted(names)}")
        self.parts = parts
        self.domain = parts[-1].domain

    def apply(self, x):
        for p in reversed(self.parts):
            x = p.apply(x)
        return x

    def word(self):
        return "*".join(p.word() for p in self.parts)

    @property
    def block_size(self):
        out = 1
        for p in self.parts:
            out = math.lcm(out, getattr(p, "block_size", 1))
        return out


# ---------------------------------------------------------------------------
# homomorphism verification

class HomReport(NamedTuple):
    passed: bool
    samples: int
    counterexample: object  # (g, h, phi(gh), phi(g)phi(h)) when failing

    def __bool__(self):
        return self.passed


def verify_homomorphism(phi: Automorphism, samples=1000, rng=None, group=None) -> HomReport:
    """phi(g h) == phi(g) phi(h) on random pairs from the domain."""
    group = group or phi.domain
    rng = rng or random.Random(0)
    for k in range(samples):
        g, h = group.random(rng), group.random(rng)
        lhs = phi.apply(group.mul(g, h))
        rhs = group.mul(phi.apply(g), phi.apply(h))
        if lhs != rhs:
            return HomReport(False, k + 1, (g, h, lhs, rhs))
    return HomReport(True, samples, None)


# ---------------------------------------------------------------------------
# factor-preserving normalisation over a split extension N x| Q, N abelian

def _split_parts(group, g):
    ring = group.ring
    if isinstance(group, Borel):
        if group.n != 2:
            raise GroupError("the unipotent kernel is non-abelian for n > 2")
        d = diag_matrix(ring, 2, g.diag)
        return g * d.inv(), d
    if isinstance(group, Affine):
        return (AffElem(ring, ring.one(), g.r),
                AffElem(ring, g.u, ring.zero()))
    if isinstance(group, CornerDiagGroup):
        return (CornerDiag(ring, group.n, g.r, (ring.one(),) * group.n),
                CornerDiag(ring, group.n, ring.zero(), g.dunits))
    raise GroupError(f"no split decomposition registered for {group.name}")


def _in_kernel_part(group, x):
    if isinstance(group, Borel):
        return x.is_unitriangular()
    if isinstance(group, Affine):
        return x.u == group.ring.one()
    if isinstance(group, CornerDiagGroup):
        return all(u == group.ring.one() for u in x.dunits)
    return False


class Phi0(Automorphism):
    """The factor-preserving automorphism with the same restriction to the
    abelian kernel and the same induced map on the complement; it has the
    same number of twisted conjugacy classes as the original."""

    def __init__(self, phi, group=None):
        group = group or phi.domain
        if not isinstance(group, (Borel, Affine, CornerDiagGroup)):
            raise GroupError(f"no split decomposition registered for {group.name}")
        if isinstance(group, Borel) and group.n != 2:
            raise GroupError("the unipotent kernel is non-abelian for n > 2")
        rng = random.Random(1)
        for _ in range(64):
            n_elt, _ = _split_parts(group, group.random(rng))
            if not _in_kernel_part(group, phi.apply(n_elt)):
                raise GroupError("the abelian kernel is not invariant")
        self.phi = phi
        self.group = group
        self.domain = group

    def apply(self, g):
        group = self.group
        n, q = _split_parts(group, g)
        fn = self.phi.apply(n)
        if not _in_kernel_part(group, fn):
            raise GroupError("the abelian kernel is not invariant")
        _, qphi = _split_parts(group, self.phi.apply(q))
        return group.mul(fn, qphi)

    def word(self):
        return f"phi0[{self.phi.word()}]"


def make_phi0(phi: Automorphism, group=None) -> Phi0:
    return Phi0(phi, group)


# ---------------------------------------------------------------------------
# induced actions on quotients

class DiagAction(NamedTuple):
    """Action on the diagonal quotient modulo torsion, as an integer
    matrix over the torsion-free unit generators (columns = images)."""
    gens: tuple
    matrix: tuple     # matrix[i][j] = exponent of gens[i] in the image of gens[j]
    torsion: tuple    # torsion component of each image

    def det_one_minus(self) -> int:
        m = len(self.gens)
        rows = [[(1 if i == j else 0) - self.matrix[i][j] for j in range(m)]
                for i in range(m)]
        return bareiss_det(rows)

    def is_identity(self):
        return all(self.matrix[i][j] == (1 if i == j else 0)
                   for i in range(len(self.gens)) for j in range(len(self.gens)))


def induced_diag_action(phi: Automorphism, group: Affine = None) -> DiagAction:
    """The matrix of the induced map on the diagonal quotient of an affine
    group; requires the translation subgroup to be invariant."""
    group = group or phi.domain
    if not isinstance(group, Affine):
        raise GroupError("diagonal quotient action is computed on affine groups")
    ring = group.ring
    rng = random.Random(2)
    for _ in range(32):
        img = phi.apply(AffElem(ring, ring.one(), ring.random(rng)))
        if img.u != ring.one():
            raise GroupError("the translation subgroup is not invariant")
    gens = ring.unit_group().torsion_free
    cols, tors = [], []
    for g in gens:
        img = phi.apply(AffElem(ring, g, ring.zero()))
        tor, exps = ring.unit_decompose(img.u)
        cols.append(exps)
        tors.append(tor)
    m = len(gens)
    matrix = tuple(tuple(cols[j][i] for j in range(m)) for i in range(m))
    return DiagAction(gens=tuple(gens), matrix=matrix, torsion=tuple(tors))


class FactorMap:
    """An additive self-map of one abelianization factor: a composition
    of unit scalings and coefficient-ring automorphisms."""

    def __init__(self, ops=()):
        self.ops = tuple(ops)

    def apply(self, ring, r):
        for kind, data in self.ops:
            r = ring.mul(data, r) if kind == "mul" else data.apply(r)
        return r

    def then(self, other):
        return FactorMap(self.ops + other.ops)

    def is_plain_identity(self):
        return not self.ops

    def describe(self):
        if not self.ops:
            return "id"
        return ";".join("mul" if k == "mul" else d.word() for k, d in self.ops)


class SuperdiagAction(NamedTuple):
    """Induced action on the abelianization factors E_{i,i+1}: a factor
    permutation plus an additive map on each factor."""
    n: int
    perm: tuple        # 0-based: source factor j lands in factor perm[j]
    maps: tuple        # FactorMap applied to the coefficient on the way

    def apply(self, ring, rs):
        out = [ring.zero()] * (self.n - 1)
        for j, r in enumerate(rs):
            out[self.perm[j]] = ring.add(out[self.perm[j]], self.maps[j].apply(ring, r))
        return tuple(out)

    def is_identity(self):
        return all(p == j for j, p in enumerate(self.perm)) and \
            all(m.is_plain_identity() for m in self.maps)


def induced_superdiag_action(phi: Automorphism) -> SuperdiagAction:
    """Structural action of a unitriangular automorphism on the
    abelianization; verified against the matrix action on samples."""
    group = phi.domain
    if not isinstance(group, Unitriangular):
        raise GroupError("abelianization action is computed on unitriangular groups")
    n = group.n
    act = _superdiag_action(phi, n)
    ring = group.ring
    rng = random.Random(3)
    for _ in range(32):
        u = group.random(rng)
        if act.apply(ring, superdiagonal(u)) != superdiagonal(phi.apply(u)):
            raise AssertionError("structural abelianization action disagrees with samples")
    return act


def _identity_action(n):
    return SuperdiagAction(n, tuple(range(n - 1)), tuple(FactorMap() for _ in range(n - 1)))


def _superdiag_action(phi, n):
    if isinstance(phi, (Central, SigmaFirst, SigmaLast, IdentityMap)):
        return _identity_action(n)
    if isinstance(phi, Flip):
        return SuperdiagAction(n, tuple(n - 2 - j for j in range(n - 1)),
                               tuple(FactorMap() for _ in range(n - 1)))
    if isinstance(phi, RingMap):
        return SuperdiagAction(n, tuple(range(n - 1)),
                               tuple(FactorMap((("alpha", phi.alpha),)) for _ in range(n - 1)))
    if isinstance(phi, Inner):
        g = phi.g
        mat = g.mat if isinstance(g, ProjElem) else g
        if not isinstance(mat, TriMat):
            raise GroupError("inner factor action needs a triangular conjugator")
        ring = mat.ring
        maps = []
        for i in range(n - 1):
            q = ring.mul(mat.diag[i], ring.inv(mat.diag[i + 1]))
            maps.append(FactorMap() if q == ring.one() else FactorMap((("mul", q),)))
        return SuperdiagAction(n, tuple(range(n - 1)), tuple(maps))
    if isinstance(phi, Compose):
        act = _identity_action(n)
        for p in reversed(phi.parts):
            step = _superdiag_action(p, n)
            perm = tuple(step.perm[act.perm[j]] for j in range(n - 1))
            maps = tuple(act.maps[j].then(step.maps[act.perm[j]]) for j in range(n - 1))
            act = SuperdiagAction(n, perm, maps)
        return act
    raise GroupError(f"no abelianization action for {phi.word()}")


class EmidAction(NamedTuple):
    """Restriction of the abelianization action to the middle factors."""
    indices: tuple     # 1-based middle factor indices (one or two)
    swapped: bool
    maps: tuple        # FactorMap per middle factor

    def apply(self, ring, rs):
        if len(self.indices) == 1:
            return (self.maps[0].apply(ring, rs[0]),)
        a = self.maps[0].apply(ring, rs[0])
        b = self.maps[1].apply(ring, rs[1])
        return (b, a) if self.swapped else (a, b)


def induced_emid_action(phi: Automorphism) -> EmidAction:
    group = phi.domain
    if not isinstance(group, Unitriangular):
        raise GroupError("middle-factor action is computed on unitriangular groups")
    n = group.n
    act = induced_superdiag_action(phi)
    a = -(-(n - 1) // 2)          # ceil((n-1)/2), 1-based factor index
    b = n - a
    mid = sorted({a, b})
    idx = [m - 1 for m in mid]
    for j in idx:
        if act.perm[j] not in idx:
            raise GroupError("the middle factors are not invariant")
    if len(idx) == 1:
        return EmidAction(indices=tuple(mid), swapped=False, maps=(act.maps[idx[0]],))
    swapped = act.perm[idx[0]] == idx[1]
    return EmidAction(indices=tuple(mid), swapped=swapped,
                      maps=(act.maps[idx[0]], act.maps[idx[1]]))


def induced_on_quotient(phi: Automorphism, kind: str):
    """kind: 'diag' or 'mod-torsion' (affine diagonal quotient),
    'abelianization', or 'emid' (unitriangular)."""
    if kind in ("diag", "mod-torsion"):
        return induced_diag_action(phi)
    if kind == "abelianization":
        return induced_superdiag_action(phi)
    if kind == "emid":
        return induced_emid_action(phi)
    raise GroupError(f"unknown quotient {kind!r}")


# ---------------------------------------------------------------------------
# word grammar

def _split_top(s, sep):
    out, depth, start = [], 0, 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append(s[start:i])
            start = i + 1
    out.append(s[start:])
    return out


def parse_endo(s: str, ring) -> EndoDesc:
    s = s.strip()
    if s == "zero":
        return ZeroEndo(ring)
    m = re.fullmatch(r"mulby\((.*)\)", s)
    if m:
        return MulBy(ring, ring.parse(m.group(1)))
    m = re.fullmatch(r"halfsquare\((.*)\)", s)
    if m:
        return HalfSquare(ring, ring.parse(m.group(1)))
    raise GroupError(f"bad endomorphism {s!r}")


def parse_auto(word: str, ring=None, group=None) -> Automorphism:
    """Parse an automorphism word.  `ring` supplies the coefficient ring
    for catalog entries that pin their own group; `group` is the domain
    for inner/central/sigma/flip words."""
    tokens = [t.strip() for t in _split_top(word.strip(), "*")]
    parts = []
    for tok in tokens:
        low = tok.lower()
        if low == "id":
            if group is None:
                raise GroupError("id needs a domain group")
            parts.append(IdentityMap(group))
            continue
        if low == "flip":
            if not isinstance(group, Unitriangular):
                raise GroupError("flip needs a unitriangular domain")
            parts.append(Flip(group))
            continue
        if low == "augb2":
            parts.append(AugScale(ring))
            continue
        if low == "augb2plus":
            parts.append(AugShift(ring))
            continue
        m = re.fullmatch(r"(\w+)\((.*)\)", tok, re.DOTALL)
        if not m:
            raise GroupError(f"bad automorphism token {tok!r}")
        head, body = m.group(1).lower(), m.group(2)
        if head == "inner":
            if group is None:
                raise GroupError("inner(...) needs a domain group")
            g = groups.parse_element(body, group.ring, group.n)
            if isinstance(group, ProjBorel):
                parts.append(Inner(ProjElem(g), group))
            else:
                parts.append(Inner(g, group))
        elif head == "central":
            i, endo = _split_top(body, ",")
            if not isinstance(group, Unitriangular):
                raise GroupError("central(...) needs a unitriangular domain")
            parts.append(Central(group, int(i), parse_endo(endo, group.ring)))
        elif head in ("sigma", "sigmap"):
            endo, a = _split_top(body, ",")
            if not isinstance(group, Unitriangular):
                raise GroupError("sigma(...) needs a unitriangular domain")
            cls = SigmaFirst if head == "sigma" else SigmaLast
            parts.append(cls(group, parse_endo(endo, group.ring), group.ring.parse(a)))
        elif head == "ring":
            target = group.ring if group is not None else ring
            if not isinstance(target, PolyRing):
                raise GroupError("ring(...) needs a polynomial coefficient ring")
            alpha = parse_ring_auto(body, target)
            domain = group if group is not None else Additive(target)
            parts.append(RingMap(alpha, domain))
        elif head == "phip":
            target = group.ring if group is not None else ring
            if not isinstance(target, PolyRing) or target.laurent:
                raise GroupError("phiP(...) needs gf(q)[t]")
            parts.append(BlockCompanion(target.parse(body)))
        elif head == "mul":
            target = group.ring if group is not None else ring
            parts.append(CenterScale(target, target.parse(body)))
        elif head in ("phia", "phib"):
            target = group.ring if group is not None else ring
            if not isinstance(target, PolyRing):
                raise GroupError("the reflections need gf(q)[t,t^-1]")
            cls = AffineReflect if head == "phia" else TriangularReflect
            parts.append(cls(target, target.base.parse(body)))
        elif head == "taualpha":
            target = group.ring if group is not None else ring
            if not isinstance(target, PolyRing):
                raise GroupError("tauAlpha(...) needs a polynomial coefficient ring")
            parts.append(PairSwap(parse_ring_auto(body, target), target))
        else:
            raise GroupError(f"unknown automorphism {head!r}")
    return parts[0] if len(parts) == 1 else Compose(parts)
