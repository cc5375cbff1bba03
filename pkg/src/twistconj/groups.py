"""Upper triangular matrix groups over a base ring: elements, normal
forms, the series and center machinery, affine and projective variants,
and finite enumerations.

A TriMat keeps the diagonal as a tuple of units and the strictly upper
part as a sparse {(i,j): value} map (1-based, i < j).  Everything is
immutable and hashable, so elements can live in sets, union-find tables
and dict-keyed partitions.

Element word form (printer/parser round-trip):

    e(1,2;t+1) e(2,3;2) d(1;t) d(3;w+1)       identity prints as "1"

Matrix JSON form:

    {"n": 3, "ring": "gf(2)[t]", "rows": [["1","t","0"], ...]}
"""

from __future__ import annotations

import re
from typing import NamedTuple

class GroupError(ValueError):
    pass


# ---------------------------------------------------------------------------
# triangular matrices

class TriMat:
    __slots__ = ("ring", "n", "diag", "upper", "_h")

    def __init__(self, ring, n, diag, upper):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "diag", tuple(diag))
        object.__setattr__(self, "upper", dict(upper))
        object.__setattr__(self, "_h", None)

    def __setattr__(self, *a):
        raise AttributeError("TriMat is immutable")

    # access -----------------------------------------------------------------
    def entry(self, i, j):
        if i == j:
            return self.diag[i - 1]
        if i > j:
            return self.ring.zero()
        return self.upper.get((i, j), self.ring.zero())

    def rows(self):
        return [[self.entry(i, j) for j in range(1, self.n + 1)]
                for i in range(1, self.n + 1)]

    def is_unitriangular(self):
        one = self.ring.one()
        return all(u == one for u in self.diag)

    def is_diagonal(self):
        return not self.upper

    def is_identity(self):
        return self.is_unitriangular() and not self.upper

    # arithmetic ---------------------------------------------------------------
    def __mul__(self, o):
        if not isinstance(o, TriMat) or o.ring is not self.ring or o.n != self.n:
            raise GroupError("incompatible matrices")
        ring = self.ring
        diag = tuple(ring.mul(a, b) for a, b in zip(self.diag, o.diag))
        upper = {}
        for (i, j), v in o.upper.items():
            upper[(i, j)] = ring.mul(self.diag[i - 1], v)
        for (i, k), v in self.upper.items():
            key = (i, k)
            c = ring.mul(v, o.diag[k - 1])
            prev = upper.get(key)
            upper[key] = c if prev is None else ring.add(prev, c)
            for (k2, j), w in o.upper.items():
                if k2 == k:
                    key = (i, j)
                    c = ring.mul(v, w)
                    prev = upper.get(key)
                    upper[key] = c if prev is None else ring.add(prev, c)
        upper = {k: v for k, v in upper.items() if not ring.is_zero(v)}
        return TriMat(ring, self.n, diag, upper)

    def inv(self):
        ring = self.ring
        n = self.n
        dinv = tuple(ring.inv(u) for u in self.diag)
        x = {}

        def xval(i, j):
            if i == j:
                return dinv[i - 1]
            return x.get((i, j), ring.zero())

        for j in range(1, n + 1):
            for i in range(j - 1, 0, -1):
                acc = ring.zero()
                for k in range(i + 1, j + 1):
                    a = self.upper.get((i, k))
                    if a is not None:
                        acc = ring.add(acc, ring.mul(a, xval(k, j)))
                if not ring.is_zero(acc):
                    x[(i, j)] = ring.neg(ring.mul(dinv[i - 1], acc))
        return TriMat(ring, n, dinv, x)

    def commutator(self, o):
        return self * o * self.inv() * o.inv()

    def scaled(self, u):
        """The product (u * identity) * self for a unit u."""
        ring = self.ring
        return TriMat(
            ring, self.n,
            tuple(ring.mul(u, d) for d in self.diag),
            {k: ring.mul(u, v) for k, v in self.upper.items()},
        )

    # identity / hashing ---------------------------------------------------------
    def __eq__(self, o):
        return (
            isinstance(o, TriMat)
            and o.ring is self.ring
            and o.n == self.n
            and o.diag == self.diag
            and o.upper == self.upper
        )

    def __hash__(self):
        if self._h is None:
            object.__setattr__(
                self, "_h",
                hash((self.ring.tag, self.n, self.diag,
                      tuple(sorted(self.upper.items(), key=lambda kv: kv[0])))),
            )
        return self._h

    def __repr__(self):
        return element_word(self)


def identity(ring, n) -> TriMat:
    return TriMat(ring, n, (ring.one(),) * n, {})


def elementary(ring, n, i, j, r) -> TriMat:
    """e_{i,j}(r); requires 1 <= i < j <= n."""
    if not 1 <= i < j <= n:
        raise GroupError(f"elementary position ({i},{j}) needs i < j <= n")
    upper = {} if ring.is_zero(r) else {(i, j): r}
    return TriMat(ring, n, (ring.one(),) * n, upper)


def diag_elem(ring, n, i, u) -> TriMat:
    """d_i(u) for a unit u."""
    if not 1 <= i <= n:
        raise GroupError(f"diagonal index {i} out of range")
    if not ring.is_unit(u):
        raise GroupError(f"{ring.to_str(u)} is not a unit of {ring.tag}")
    diag = [ring.one()] * n
    diag[i - 1] = u
    return TriMat(ring, n, diag, {})


def diag_matrix(ring, n, units) -> TriMat:
    units = tuple(units)
    if len(units) != n:
        raise GroupError("diagonal length mismatch")
    for u in units:
        if not ring.is_unit(u):
            raise GroupError(f"{ring.to_str(u)} is not a unit of {ring.tag}")
    return TriMat(ring, n, units, {})


def from_rows(ring, rows) -> TriMat:
    n = len(rows)
    diag = []
    upper = {}
    for i, row in enumerate(rows, start=1):
        if len(row) != n:
            raise GroupError("ragged matrix")
        for j, v in enumerate(row, start=1):
            if i > j:
                if not ring.is_zero(v):
                    raise GroupError("nonzero entry below the diagonal")
            elif i == j:
                if not ring.is_unit(v):
                    raise GroupError("diagonal entries must be units")
                diag.append(v)
            elif not ring.is_zero(v):
                upper[(i, j)] = v
    return TriMat(ring, n, diag, upper)


# ---------------------------------------------------------------------------
# normal form: superdiagonal-ordered product of elementaries

def nf_positions(n):
    """Positions (i, j) ordered by superdiagonal then by row."""
    return [(i, i + d) for d in range(1, n) for i in range(1, n - d + 1)]


class NormalForm(NamedTuple):
    ring: object
    n: int
    coeffs: tuple  # aligned with nf_positions(n)

    def factors(self):
        return list(zip(nf_positions(self.n), self.coeffs))


def normal_form(m: TriMat) -> NormalForm:
    """The unique coefficients with m equal to the ordered product of
    elementaries e(i,i+1)...e(1,n); unitriangular input only."""
    if not m.is_unitriangular():
        raise GroupError("normal form needs a unitriangular matrix")
    ring, n = m.ring, m.n
    coeffs = []
    v = m
    for d in range(1, n):
        layer = []
        block = identity(ring, n)
        for i in range(1, n - d + 1):
            r = v.entry(i, i + d)
            layer.append(r)
            block = block * elementary(ring, n, i, i + d, r)
        coeffs.extend(layer)
        v = block.inv() * v
    if not v.is_identity():
        raise AssertionError("normal form peel did not terminate")
    return NormalForm(ring, n, tuple(coeffs))


def recompose(nf: NormalForm) -> TriMat:
    out = identity(nf.ring, nf.n)
    for (i, j), r in nf.factors():
        if not nf.ring.is_zero(r):
            out = out * elementary(nf.ring, nf.n, i, j, r)
    return out


def gamma_member(m: TriMat, k: int) -> bool:
    """Membership in the k-th term of the lower central series: all
    entries at distance 0 < j-i < k vanish."""
    if not 1 <= k <= m.n:
        raise GroupError("series index out of range")
    if not m.is_unitriangular():
        return False
    return all(j - i >= k for (i, j) in m.upper)


def superdiagonal(m: TriMat):
    """The images of a unitriangular matrix in the abelianization factors."""
    return tuple(m.entry(i, i + 1) for i in range(1, m.n))


# ---------------------------------------------------------------------------
# projective elements: matrices modulo scalars

class ProjElem:
    """A class of B_n(R) modulo the scalar matrices, stored by the unique
    representative whose (1,1) entry is 1."""

    __slots__ = ("mat",)

    def __init__(self, mat: TriMat):
        u1 = mat.diag[0]
        if u1 != mat.ring.one():
            mat = mat.scaled(mat.ring.inv(u1))
        object.__setattr__(self, "mat", mat)

    def __setattr__(self, *a):
        raise AttributeError("ProjElem is immutable")

    @property
    def ring(self):
        return self.mat.ring

    @property
    def n(self):
        return self.mat.n

    def __mul__(self, o):
        if isinstance(o, TriMat):
            o = ProjElem(o)
        return ProjElem(self.mat * o.mat)

    def inv(self):
        return ProjElem(self.mat.inv())

    def is_identity(self):
        return self.mat.is_identity()

    def unipotent_part(self) -> TriMat:
        """x with self = x * [d]; canonical in the split decomposition."""
        d = diag_matrix(self.ring, self.n, self.mat.diag)
        return self.mat * d.inv()

    def diag_ratios(self):
        """Successive ratios u_i / u_{i+1}; class invariants."""
        ring = self.ring
        return tuple(
            ring.mul(self.mat.diag[i], ring.inv(self.mat.diag[i + 1]))
            for i in range(self.n - 1)
        )

    def conj(self, x: TriMat) -> TriMat:
        """Conjugate a unitriangular matrix by this class (well defined
        because scalars are central)."""
        return self.mat * x * self.mat.inv()

    def __eq__(self, o):
        return isinstance(o, ProjElem) and self.mat == o.mat

    def __hash__(self):
        return hash(("proj", self.mat))

    def __repr__(self):
        return f"[{element_word(self.mat)}]"


# ---------------------------------------------------------------------------
# affine elements

class AffElem:
    """(u, r) acting as x -> u*x + r; the matrix ((u, r), (0, 1))."""

    __slots__ = ("ring", "u", "r")

    def __init__(self, ring, u, r):
        if not ring.is_unit(u):
            raise GroupError(f"{ring.to_str(u)} is not a unit of {ring.tag}")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "r", r)

    def __setattr__(self, *a):
        raise AttributeError("AffElem is immutable")

    def __mul__(self, o):
        ring = self.ring
        return AffElem(ring, ring.mul(self.u, o.u),
                       ring.add(self.r, ring.mul(self.u, o.r)))

    def inv(self):
        ring = self.ring
        ui = ring.inv(self.u)
        return AffElem(ring, ui, ring.neg(ring.mul(ui, self.r)))

    def is_identity(self):
        return self.u == self.ring.one() and self.ring.is_zero(self.r)

    def as_matrix(self) -> TriMat:
        return from_rows(self.ring, [[self.u, self.r], [self.ring.zero(), self.ring.one()]])

    def __eq__(self, o):
        return isinstance(o, AffElem) and self.ring is o.ring and \
            self.u == o.u and self.r == o.r

    def __hash__(self):
        return hash(("aff", self.ring.tag, self.u, self.r))

    def __repr__(self):
        return f"aff({self.ring.to_str(self.u)}; {self.ring.to_str(self.r)})"


def aff_from_proj(g: ProjElem) -> AffElem:
    """The isomorphism PB_2(R) -> Aff(R): e(r)[d(u1,u2)] -> (u1/u2, r)."""
    if g.n != 2:
        raise GroupError("projective-to-affine needs n = 2")
    ring = g.ring
    u = ring.mul(g.mat.diag[0], ring.inv(g.mat.diag[1]))
    x = g.unipotent_part()
    return AffElem(ring, u, x.entry(1, 2))


def proj_from_aff(a: AffElem) -> ProjElem:
    return ProjElem(a.as_matrix())


# ---------------------------------------------------------------------------
# corner-diagonal subgroup: center of U_n extended by the diagonal classes

class CornerDiag:
    """e_{1,n}(r) [d1(u_1)...dn(u_n)] with the diagonal class normalised
    to u_1 = 1.  Multiplication twists the corner by u_1/u_n."""

    __slots__ = ("ring", "n", "r", "dunits")

    def __init__(self, ring, n, r, dunits):
        dunits = tuple(dunits)
        if len(dunits) != n:
            raise GroupError("diagonal length mismatch")
        u1 = dunits[0]
        if u1 != ring.one():
            ui = ring.inv(u1)
            dunits = tuple(ring.mul(ui, u) for u in dunits)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "dunits", dunits)

    def __setattr__(self, *a):
        raise AttributeError("CornerDiag is immutable")

    def ratio(self):
        """u_1 / u_n of the diagonal class."""
        return self.ring.inv(self.dunits[-1])

    def __mul__(self, o):
        ring = self.ring
        r = ring.add(self.r, ring.mul(self.ratio(), o.r))
        d = tuple(ring.mul(a, b) for a, b in zip(self.dunits, o.dunits))
        return CornerDiag(ring, self.n, r, d)

    def inv(self):
        ring = self.ring
        rinv = ring.neg(ring.mul(ring.inv(self.ratio()), self.r))
        return CornerDiag(ring, self.n, rinv, tuple(ring.inv(u) for u in self.dunits))

    def is_identity(self):
        return self.ring.is_zero(self.r) and all(u == self.ring.one() for u in self.dunits)

    def __eq__(self, o):
        return isinstance(o, CornerDiag) and self.ring is o.ring and \
            self.n == o.n and self.r == o.r and self.dunits == o.dunits

    def __hash__(self):
        return hash(("cd", self.ring.tag, self.n, self.r, self.dunits))

    def __repr__(self):
        ring = self.ring
        ds = " ".join(f"d({i+1};{ring.to_str(u)})" for i, u in enumerate(self.dunits)
                      if u != ring.one())
        rs = f"e(1,{self.n};{ring.to_str(self.r)})" if not ring.is_zero(self.r) else ""
        return " ".join(x for x in (rs, ds) if x) or "1"


def to_affine(w: CornerDiag) -> AffElem:
    """The epimorphism onto Aff(R): e_{1,n}(r)[d] -> (u_1/u_n, r); its
    kernel is exactly {r = 0, u_1 = u_n}."""
    return AffElem(w.ring, w.ratio(), w.r)


# ---------------------------------------------------------------------------
# group contexts

class Group:
    name = "?"

    def identity(self):
        raise NotImplementedError

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inv()

    def random(self, rng):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def elements(self):
        raise NotImplementedError("not a finite enumeration")

    def generators(self):
        raise NotImplementedError

    def __repr__(self):
        return self.name


def _field_units_in_exp_order(F):
    g = F.primitive()
    out = []
    x = F.one()
    for _ in range(F.q - 1):
        out.append(x)
        x = F.mul(x, g)
    return out


class Additive(Group):
    """The underlying additive group of a ring, written multiplicatively."""

    def __init__(self, ring):
        self.ring = ring
        self.name = f"addi({ring.tag})"

    def identity(self):
        return self.ring.zero()

    def mul(self, a, b):
        return self.ring.add(a, b)

    def inv(self, a):
        return self.ring.neg(a)

    def random(self, rng):
        return self.ring.random(rng)

    def contains(self, x):
        return True

    def is_identity(self, x):
        return self.ring.is_zero(x)


class AdditivePairs(Group):
    """R x R as an additive group; elements are pairs."""

    def __init__(self, ring):
        self.ring = ring
        self.name = f"addi({ring.tag})^2"

    def identity(self):
        return (self.ring.zero(), self.ring.zero())

    def mul(self, a, b):
        return (self.ring.add(a[0], b[0]), self.ring.add(a[1], b[1]))

    def inv(self, a):
        return (self.ring.neg(a[0]), self.ring.neg(a[1]))

    def random(self, rng):
        return (self.ring.random(rng), self.ring.random(rng))

    def contains(self, x):
        return isinstance(x, tuple) and len(x) == 2


class Unitriangular(Group):
    def __init__(self, ring, n):
        if n < 2:
            raise GroupError("dimension must be >= 2")
        self.ring, self.n = ring, n
        self.name = f"u{n}({ring.tag})"

    def identity(self):
        return identity(self.ring, self.n)

    def random(self, rng):
        coeffs = [self.ring.random(rng) for _ in nf_positions(self.n)]
        return recompose(NormalForm(self.ring, self.n, tuple(coeffs)))

    def contains(self, x):
        return isinstance(x, TriMat) and x.n == self.n and \
            x.ring is self.ring and x.is_unitriangular()

    def elements(self):
        """Lexicographic in the normal-form coefficients (code order)."""
        F = self.ring
        pos = nf_positions(self.n)
        els = list(F.elements())

        def rec(k, acc):
            if k == len(pos):
                yield recompose(NormalForm(F, self.n, tuple(acc)))
                return
            for c in els:
                yield from rec(k + 1, acc + [c])

        yield from rec(0, [])

    def generators(self):
        out = []
        for i in range(1, self.n):
            for b in self.ring.additive_gens():
                out.append(elementary(self.ring, self.n, i, i + 1, b))
        return out


class Borel(Group):
    def __init__(self, ring, n, plus=False):
        if n < 2:
            raise GroupError("dimension must be >= 2")
        self.ring, self.n, self.plus = ring, n, plus
        self.name = f"b{n}{'plus' if plus else ''}({ring.tag})"

    def identity(self):
        return identity(self.ring, self.n)

    def _random_unit(self, rng):
        ring = self.ring
        if not self.plus:
            return ring.random_unit(rng)
        tf = ring.unit_group().torsion_free
        u = ring.one()
        for g in tf:
            u = ring.mul(u, ring.pow_unit(g, rng.randint(-3, 3)))
        return u

    def random(self, rng):
        u = Unitriangular(self.ring, self.n).random(rng)
        d = diag_matrix(self.ring, self.n, [self._random_unit(rng) for _ in range(self.n)])
        return u * d

    def contains(self, x):
        if not (isinstance(x, TriMat) and x.n == self.n and x.ring is self.ring):
            return False
        if not self.plus:
            return True
        one = self.ring.one()
        return all(self.ring.unit_decompose(u)[0] == one for u in x.diag)

    def elements(self):
        """Lexicographic in (normal-form coefficients, diagonal exponents
        over the primitive generator)."""
        F = self.ring
        units = _field_units_in_exp_order(F)
        if self.plus:
            units = [F.one()]
        for u in Unitriangular(F, self.n).elements():
            def rec(k, acc):
                if k == self.n:
                    yield u * diag_matrix(F, self.n, acc)
                    return
                for v in units:
                    yield from rec(k + 1, acc + [v])
            yield from rec(0, [])

    def generators(self):
        out = Unitriangular(self.ring, self.n).generators()
        ug = self.ring.unit_group()
        gens = ug.torsion_free if self.plus else (tuple(ug.torsion) + tuple(ug.torsion_free))
        for i in range(1, self.n + 1):
            for g in gens:
                out.append(diag_elem(self.ring, self.n, i, g))
        return out


class ProjBorel(Group):
    def __init__(self, ring, n, plus=False):
        self.ring, self.n, self.plus = ring, n, plus
        self.name = f"pb{n}{'plus' if plus else ''}({ring.tag})"
        self._borel = Borel(ring, n, plus)

    def identity(self):
        return ProjElem(identity(self.ring, self.n))

    def random(self, rng):
        return ProjElem(self._borel.random(rng))

    def contains(self, x):
        return isinstance(x, ProjElem) and x.n == self.n and \
            x.ring is self.ring and self._borel.contains(x.mat)

    def elements(self):
        F = self.ring
        units = [F.one()] if self.plus else _field_units_in_exp_order(F)
        for u in Unitriangular(F, self.n).elements():
            def rec(k, acc):
                if k == self.n:
                    yield ProjElem(u * diag_matrix(F, self.n, acc))
                    return
                for v in units:
                    yield from rec(k + 1, acc + [v])
            # first diagonal entry pinned to 1: classes modulo scalars
            yield from rec(1, [F.one()])

    def generators(self):
        return [ProjElem(g) for g in self._borel.generators()]


class Affine(Group):
    def __init__(self, ring, plus=False):
        self.ring, self.plus = ring, plus
        self.name = f"aff{'plus' if plus else ''}({ring.tag})"

    def identity(self):
        return AffElem(self.ring, self.ring.one(), self.ring.zero())

    def _random_unit(self, rng):
        return Borel(self.ring, 2, self.plus)._random_unit(rng)

    def random(self, rng):
        return AffElem(self.ring, self._random_unit(rng), self.ring.random(rng))

    def contains(self, x):
        if not (isinstance(x, AffElem) and x.ring is self.ring):
            return False
        if not self.plus:
            return True
        return self.ring.unit_decompose(x.u)[0] == self.ring.one()

    def elements(self):
        F = self.ring
        units = [F.one()] if self.plus else _field_units_in_exp_order(F)
        for r in F.elements():
            for u in units:
                yield AffElem(F, u, r)

    def generators(self):
        ug = self.ring.unit_group()
        gens = ug.torsion_free if self.plus else (tuple(ug.torsion) + tuple(ug.torsion_free))
        out = [AffElem(self.ring, self.ring.one(), b) for b in self.ring.additive_gens()]
        out += [AffElem(self.ring, g, self.ring.zero()) for g in gens]
        return out


class CornerDiagGroup(Group):
    def __init__(self, ring, n):
        self.ring, self.n = ring, n
        self.name = f"w{n}({ring.tag})"

    def identity(self):
        return CornerDiag(self.ring, self.n, self.ring.zero(), (self.ring.one(),) * self.n)

    def random(self, rng):
        units = [self.ring.one()] + [self.ring.random_unit(rng) for _ in range(self.n - 1)]
        return CornerDiag(self.ring, self.n, self.ring.random(rng), units)

    def contains(self, x):
        return isinstance(x, CornerDiag) and x.n == self.n and x.ring is self.ring

    def elements(self):
        """Corner coordinate first, then diagonal exponents."""
        F = self.ring
        units = _field_units_in_exp_order(F)
        for r in F.elements():
            def rec(k, acc):
                if k == self.n:
                    yield CornerDiag(F, self.n, r, acc)
                    return
                for v in units:
                    yield from rec(k + 1, acc + [v])
            yield from rec(1, [F.one()])

    def generators(self):
        F = self.ring
        out = [CornerDiag(F, self.n, b, (F.one(),) * self.n) for b in F.additive_gens()]
        units = F.unit_group().torsion + F.unit_group().torsion_free
        for i in range(1, self.n):
            for g in units:
                d = [F.one()] * self.n
                d[i] = g
                out.append(CornerDiag(F, self.n, F.zero(), d))
        return out


# ---------------------------------------------------------------------------
# centers

def center_bruteforce(group: Group, budget: int = 10 ** 6, full_pairs: bool = False):
    """The exact center of a finite enumeration.

    Commuting against a generating set is equivalent to commuting against
    every element (the centralizer of a generating set is the centralizer
    of the group); full_pairs forces the quadratic check instead.
    """
    els = []
    for k, g in enumerate(group.elements()):
        if k >= budget:
            raise GroupError("enumeration budget exceeded")
        els.append(g)
    tests = els if full_pairs else group.generators()
    out = []
    for g in els:
        if all(group.mul(g, h) == group.mul(h, g) for h in tests):
            out.append(g)
    return out


# ---------------------------------------------------------------------------
# the escape construction: no diagonal class sits in a nilpotent normal subgroup

class EscapeReport(NamedTuple):
    k: int                  # the adjacent position with distinct diagonal ratios
    witness: object         # s, built inside the normal closure of m
    target: object          # m itself, or its elementary perturbation
    chain: tuple            # chain[0] = s, chain[i] = [chain[i-1], target]
    leading: tuple          # (k,k+1) coefficients of the chain
    ratio_factor: object    # 1 - u_k / u_{k+1}


def commutator_escape(m: ProjElem, depth: int) -> EscapeReport:
    """Iterated commutators [s, m], [[s, m], m], ... with nonvanishing
    superdiagonal coefficient r*(1-u)^i, certifying that no projective
    class outside the unitriangular part normalises into a nilpotent
    subgroup over an integral domain.
    """
    ring, n = m.ring, m.n
    one = ring.one()
    ratios = m.diag_ratios()
    k = next((i + 1 for i, q in enumerate(ratios) if q != one), None)
    if k is None:
        raise GroupError("all adjacent diagonal ratios are 1: the class is unipotent")
    target = m
    x = m.unipotent_part()
    if ring.is_zero(x.entry(k, k + 1)):
        seed = elementary(ring, n, k, k + 1, one)
        target = ProjElem(seed) * m * ProjElem(seed).inv()
        x = target.unipotent_part()
    r = x.entry(k, k + 1)
    u = target.diag_ratios()[k - 1]
    factor = ring.sub(one, u)
    delta = diag_elem(ring, n, k, target.mat.diag[k - 1]) * \
        diag_elem(ring, n, k + 1, target.mat.diag[k])
    pd = ProjElem(delta)
    s = target * (pd * target * pd.inv()).inv()
    chain = [s]
    for _ in range(depth - 1):
        chain.append(chain[-1] * target * chain[-1].inv() * target.inv())
    leading = tuple(c.unipotent_part().entry(k, k + 1) for c in chain)
    # chain[i] carries r * factor^(i+1) at position (k, k+1)
    check = r
    for coeff in leading:
        check = ring.mul(check, factor)
        if coeff != check:
            raise AssertionError("escape chain disagrees with its closed form")
        if ring.is_zero(coeff):
            raise AssertionError("escape chain died; the ring is not a domain?")
    return EscapeReport(k=k, witness=s, target=target, chain=tuple(chain),
                        leading=leading, ratio_factor=factor)


# ---------------------------------------------------------------------------
# printing and serialisation

def element_word(m: TriMat) -> str:
    """The ordered word e(i,j;r)... d(i;u)... of a triangular matrix."""
    ring, n = m.ring, m.n
    d = diag_matrix(ring, n, m.diag)
    x = m * d.inv()
    parts = []
    for (i, j), r in normal_form(x).factors():
        if not ring.is_zero(r):
            parts.append(f"e({i},{j};{ring.to_str(r)})")
    for i, u in enumerate(m.diag, start=1):
        if u != ring.one():
            parts.append(f"d({i};{ring.to_str(u)})")
    return " ".join(parts) if parts else "1"


_FACTOR_RE = re.compile(r"([ed])\(([^()]*(?:\([^()]*\))?[^()]*)\)")


def parse_element(s: str, ring, n: int) -> TriMat:
    """Parse an element word back into a matrix."""
    s = s.strip()
    if s == "1":
        return identity(ring, n)
    out = identity(ring, n)
    pos = 0
    for m in _FACTOR_RE.finditer(s):
        between = s[pos:m.start()].strip(" *")
        if between:
            raise GroupError(f"bad element word {s!r}")
        pos = m.end()
        kind, body = m.group(1), m.group(2)
        if kind == "e":
            head, val = body.split(";", 1)
            i, j = (int(x) for x in head.split(","))
            out = out * elementary(ring, n, i, j, ring.parse(val))
        else:
            head, val = body.split(";", 1)
            out = out * diag_elem(ring, n, int(head), ring.parse(val))
    if s[pos:].strip(" *"):
        raise GroupError(f"bad element word {s!r}")
    return out


def mat_to_json(m: TriMat) -> dict:
    return {
        "n": m.n,
        "ring": m.ring.tag,
        "rows": [[m.ring.to_str(v) for v in row] for row in m.rows()],
    }


def mat_from_json(data: dict, ring=None) -> TriMat:
    from .poly import parse_ring
    if ring is None:
        ring = parse_ring(data["ring"])
    rows = [[ring.parse(v) for v in row] for row in data["rows"]]
    if len(rows) != data["n"]:
        raise GroupError("dimension mismatch in matrix JSON")
    return from_rows(ring, rows)
