"""Twisted conjugacy: the twist action h g phi(h)^-1, constructive class
solvers for the reflection automorphisms, image/cokernel computations on
truncated coefficient windows, a union-find partition oracle for finite
universes, eigenvalue-1 tests, and the exponent-tuple case search for
diagonal substitutions.

The additive computations run over windows: a window fixes a finite range
of monomial exponents and treats the corresponding coefficient space as a
vector space over gf(q).  Deciding membership of r in the image of
(id - phi) grows the solving window until the image intersected with the
target window stops moving twice in a row; "undecided" is an explicit
outcome, never silently converted into an answer.
"""

from __future__ import annotations

from typing import NamedTuple

from . import linalg, rings
from .autos import Automorphism, PairSwap
from .groups import Additive, AdditivePairs, AffElem, GroupError, TriMat, from_rows
from .linalg import bareiss_det
from .poly import Poly, PolyRing, poly_ring
from .rings import RingError


# ---------------------------------------------------------------------------
# windows

class LinearWindow:
    """The monomials t^lo .. t^hi of a gf(q)-coefficient polynomial ring,
    as a coordinate space of dimension hi - lo + 1."""

    def __init__(self, ring: PolyRing, lo: int, hi: int):
        if not isinstance(ring.base, rings.GaloisField):
            raise RingError("windows need gf(q) coefficients")
        if lo > hi:
            raise RingError("empty window")
        if lo < 0 and not ring.laurent:
            raise RingError(f"negative exponents outside {ring.tag}")
        self.ring = ring
        self.lo, self.hi = lo, hi
        self.dim = hi - lo + 1

    @property
    def field(self):
        return self.ring.base

    def positions(self):
        return range(self.lo, self.hi + 1)

    def basis(self):
        one = self.field.one()
        return [self.ring.monomial(one, e) for e in self.positions()]

    def contains(self, p: Poly) -> bool:
        return all(self.lo <= e <= self.hi for e in p.terms)

    def coords(self, p: Poly):
        if not self.contains(p):
            raise RingError("support leaves the window")
        z = self.field.zero()
        return [p.terms.get(e, z) for e in self.positions()]

    def from_coords(self, cs):
        return self.ring.make({self.lo + i: c for i, c in enumerate(cs)})

    def grow(self, step: int) -> "LinearWindow":
        lo = self.lo - step if self.ring.laurent else max(0, self.lo - step)
        return LinearWindow(self.ring, lo, self.hi + step)

    def elements(self):
        F = self.field
        pos = list(self.positions())

        def rec(k, acc):
            if k == len(pos):
                yield self.ring.make(dict(zip(pos, acc)))
                return
            for c in F.elements():
                yield from rec(k + 1, acc + [c])

        yield from rec(0, [])

    def random(self, rng):
        return self.ring.make({e: self.field.random(rng) for e in self.positions()})

    def __repr__(self):
        return f"window({self.ring.tag}, [{self.lo}, {self.hi}])"


class PairWindow:
    """Two copies of a window; vectors are pairs of polynomials."""

    def __init__(self, win: LinearWindow):
        self.win = win
        self.ring = win.ring
        self.dim = 2 * win.dim

    @property
    def field(self):
        return self.win.field

    def contains(self, x):
        return self.win.contains(x[0]) and self.win.contains(x[1])

    def coords(self, x):
        return self.win.coords(x[0]) + self.win.coords(x[1])

    def from_coords(self, cs):
        half = self.win.dim
        return (self.win.from_coords(cs[:half]), self.win.from_coords(cs[half:]))

    def basis(self):
        zero = self.ring.zero()
        out = [(b, zero) for b in self.win.basis()]
        out += [(zero, b) for b in self.win.basis()]
        return out

    def grow(self, step):
        return PairWindow(self.win.grow(step))

    def elements(self):
        for a in self.win.elements():
            for b in self.win.elements():
                yield (a, b)

    def random(self, rng):
        return (self.win.random(rng), self.win.random(rng))

    def __repr__(self):
        return f"pair {self.win!r}"


# ---------------------------------------------------------------------------
# the twist action

def twist(phi: Automorphism, h, g, group=None):
    """h g phi(h)^-1 (written additively on additive domains)."""
    group = group or phi.domain
    return group.mul(group.mul(h, g), group.inv(phi.apply(h)))


# ---------------------------------------------------------------------------
# additive membership with image stabilisation

class MembershipVerdict(NamedTuple):
    decided: bool
    member: bool
    witness: object          # h with r = h - phi(h), when member
    windows_tried: tuple     # (lo, hi) of each solving window

    def __bool__(self):
        return self.decided and self.member


def _pair_diff(group, a, b):
    return group.mul(a, group.inv(b))


def additive_membership(r, phi: Automorphism, window, growth=None,
                        max_rounds=8) -> MembershipVerdict:
    """Decide r in Im(id - phi) against a target window.

    The solving window grows by `growth` (default twice the window span)
    until either a witness appears or the image intersected with the
    target window is unchanged twice in a row.
    """
    pairs = isinstance(window, PairWindow)
    dom = phi.domain
    if pairs and not isinstance(dom, AdditivePairs):
        raise GroupError("pair window needs an automorphism of R x R")
    if not pairs and not isinstance(dom, Additive):
        raise GroupError("additive membership needs an additive automorphism")
    if not window.contains(r):
        raise RingError("target vector leaves the window")
    F = window.field
    ring = window.ring
    span = window.win.dim if pairs else window.dim
    step = growth if growth is not None else 2 * span
    target_pos = _positions_of(window)
    tried = []
    prev_rref = None
    stable = 0
    source = window
    for _ in range(max_rounds + 1):
        tried.append(_bounds_of(source))
        basis = source.basis()
        images = [_sub_vec(dom, b, phi.apply(b)) for b in basis]
        ambient = sorted(set(target_pos)
                         | {p for img in images for p in _support_of(img)}
                         | set(_support_of(r)))
        index = {p: i for i, p in enumerate(ambient)}
        cols = [_ambient_coords(img, ambient, index, F) for img in images]
        rhs = _ambient_coords(r, ambient, index, F)
        rows = [[col[i] for col in cols] for i in range(len(ambient))]
        sol = linalg.gf_solve(F, rows, rhs) if rows else None
        if sol is not None:
            h = source.from_coords(sol)
            if _sub_vec(dom, h, phi.apply(h)) != r:
                raise AssertionError("membership witness failed re-verification")
            return MembershipVerdict(True, True, h, tuple(tried))
        keep = {index[p] for p in target_pos}
        inter = linalg.gf_intersect_coordinates(F, cols, keep)
        # canonical form inside the fixed target coordinate space
        proj = [[v[index[p]] for p in target_pos] for v in inter]
        rref = tuple(tuple(row) for row in linalg.gf_column_space_rref(F, proj))
        if rref == prev_rref:
            stable += 1
            if stable >= 2:
                return MembershipVerdict(True, False, None, tuple(tried))
        else:
            stable = 0
        prev_rref = rref
        source = source.grow(step)
    return MembershipVerdict(False, False, None, tuple(tried))


def _positions_of(window):
    if isinstance(window, PairWindow):
        return [(0, e) for e in window.win.positions()] + \
               [(1, e) for e in window.win.positions()]
    return list(window.positions())


def _bounds_of(window):
    w = window.win if isinstance(window, PairWindow) else window
    return (w.lo, w.hi)


def _support_of(x):
    if isinstance(x, tuple):
        return [(0, e) for e in x[0].terms] + [(1, e) for e in x[1].terms]
    return list(x.terms)


def _ambient_coords(x, ambient, index, F):
    out = [F.zero()] * len(ambient)
    if isinstance(x, tuple):
        for side in (0, 1):
            for e, c in x[side].terms.items():
                out[index[(side, e)]] = c
    else:
        for e, c in x.terms.items():
            out[index[e]] = c
    return out


def _sub_vec(dom, a, b):
    return dom.mul(a, dom.inv(b))


# ---------------------------------------------------------------------------
# class counts on invariant windows

class ClassCount(NamedTuple):
    count: int
    stabilized: bool
    dim: int
    rank: int
    counts_tried: tuple


def additive_class_count(phi: Automorphism, window, rounds=2) -> ClassCount:
    """q ** dim(coker(id - phi)) on a phi-invariant window.  The window is
    regrown `rounds` times; the count is flagged stable when it does not
    move, and a growing count is evidence of an infinite class set."""
    counts = []
    first = None
    src = window
    block = getattr(phi, "block_size", 1)
    for k in range(rounds + 1):
        dim, rank = _window_rank(phi, src)
        counts.append(window.field.q ** (dim - rank))
        if first is None:
            first = (dim, rank, counts[0])
        src = src.grow(block * max(1, (src.win.dim if isinstance(src, PairWindow)
                                       else src.dim) // 2))
    return ClassCount(
        count=counts[0],
        stabilized=all(c == counts[0] for c in counts),
        dim=first[0],
        rank=first[1],
        counts_tried=tuple(counts),
    )


def _window_rank(phi, window):
    F = window.field
    dom = phi.domain
    cols = []
    for b in window.basis():
        img = _sub_vec(dom, b, phi.apply(b))
        if not window.contains(img):
            raise GroupError(f"{window!r} is not invariant under {phi.word()}")
        cols.append(window.coords(img))
    return window.dim, linalg.gf_rank(F, cols)


# ---------------------------------------------------------------------------
# the union-find partition oracle

class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if ry < rx:
            rx, ry = ry, rx
        self.parent[ry] = rx
        return True


class TwistedPartition(NamedTuple):
    auto_word: str
    universe: str
    classes: tuple          # ((representative, size), ...) in first-seen order
    count: int
    complete: bool          # False when the twist action left the universe
    witnesses: tuple        # merge log: (h, g, twisted) with twisted = h g phi(h)^-1

    def verify(self, phi, group=None):
        group = group or phi.domain
        for h, g, t in self.witnesses:
            if twist(phi, h, g, group) != t:
                return False
        return True


def brute_force_partition(universe, phi: Automorphism, group=None,
                          universe_name="") -> TwistedPartition:
    """Union-find closure of g ~ h g phi(h)^-1 over all h in the universe.

    Exact when the universe is a whole finite group (or any twist-closed
    set); otherwise the partition is flagged incomplete.
    """
    group = group or phi.domain
    els = list(universe)
    index = {}
    for i, g in enumerate(els):
        if g in index:
            raise GroupError("universe contains duplicates")
        index[g] = i
    uf = _UnionFind(len(els))
    complete = True
    witnesses = []
    for g in els:
        gi = index[g]
        for h in els:
            t = twist(phi, h, g, group)
            ti = index.get(t)
            if ti is None:
                complete = False
                continue
            if uf.union(gi, ti):
                witnesses.append((h, g, t))
    buckets = {}
    for i in range(len(els)):
        buckets.setdefault(uf.find(i), []).append(i)
    classes = tuple(
        (els[min(members)], len(members))
        for _, members in sorted(buckets.items())
    )
    return TwistedPartition(
        auto_word=phi.word(),
        universe=universe_name or f"{len(els)} elements",
        classes=classes,
        count=len(classes),
        complete=complete,
        witnesses=tuple(witnesses),
    )


# ---------------------------------------------------------------------------
# constructive class solver for the reflection automorphisms

def reflection_unit(F) -> int | None:
    """The least field element a with 1 - a^2 invertible, if any.  Exists
    exactly when q >= 4."""
    one = F.one()
    for a in F.units():
        if F.is_unit(F.sub(one, F.mul(a, a))):
            return a
    return None


def solve_reflection_corner(h: Poly, a, k: int, l: int, x: int, y: int) -> Poly:
    """The f with h(t) = t^(l+y) f(t) - a t^(2k+l+x) f(1/t).

    Pairs the coefficient at m with the one at 2k+2l+x+y-m and solves the
    2x2 system X - aY = h_m, -aX + Y = h_{m'}; solvable because 1 - a^2
    is a unit (this needs q >= 4)."""
    ring = h.ring
    F = ring.base
    if not (ring.laurent and isinstance(F, rings.GaloisField)):
        raise RingError("the corner equation lives over gf(q)[t,t^-1]")
    one = F.one()
    disc = F.sub(one, F.mul(a, a))
    if not F.is_unit(disc):
        raise RingError(f"no unit with 1 - a^2 invertible for a={F.to_str(a)} in {F.tag}")
    total = 2 * k + 2 * l + x + y
    dinv = F.inv(disc)
    fterms = {}
    done = set()
    for m in sorted(set(h.terms) | {total - e for e in h.terms}):
        if m in done:
            continue
        mp = total - m
        done.add(m)
        done.add(mp)
        hm, hmp = h.coeff(m), h.coeff(mp)
        if m == mp:
            X = F.mul(hm, F.inv(F.sub(one, a)))
            if X:
                fterms[m - l - y] = X
            continue
        X = F.mul(dinv, F.add(hm, F.mul(a, hmp)))
        Y = F.mul(dinv, F.add(F.mul(a, hm), hmp))
        if X:
            fterms[m - l - y] = X
        if Y:
            fterms[mp - l - y] = Y
    f = ring.make(fterms)
    check = f.shift(l + y) - f.reversed_var().scale(a).shift(2 * k + l + x)
    if check != h:
        raise AssertionError("corner solve failed re-verification")
    return f


class ReflectionClass(NamedTuple):
    representative: object   # the diagonal matrix with exponents in {0,1}
    witness: object          # u with u * rep * phi(u)^-1 = g
    parity: tuple            # (x, y)


def classify_reflection(g, phi) -> ReflectionClass:
    """Send an element of the torsion-free triangular or affine group over
    gf(q)[t,t^-1] to its class representative under the reflection
    automorphism, with an exactly verified witness.  The representative
    is determined by the diagonal exponent parities alone."""
    ring = phi.ring
    a = phi.a
    if isinstance(g, AffElem):
        _, (i,) = ring.unit_decompose(g.u)
        j = 0
        h = g.r
    elif isinstance(g, TriMat) and g.n == 2:
        _, (i,) = ring.unit_decompose(g.diag[0])
        _, (j,) = ring.unit_decompose(g.diag[1])
        h = g.entry(1, 2)
    else:
        raise GroupError("classification needs a 2x2 triangular or affine element")
    x, y = i % 2, j % 2
    k, l = (i - x) // 2, (j - y) // 2
    f = solve_reflection_corner(h, a, k, l, x, y)
    one = ring.base.one()
    if isinstance(g, AffElem):
        rep = AffElem(ring, ring.monomial(one, x), ring.zero())
        wit = AffElem(ring, ring.monomial(one, k), f)
    else:
        rep = from_rows(ring, [[ring.monomial(one, x), ring.zero()],
                               [ring.zero(), ring.monomial(one, y)]])
        wit = from_rows(ring, [[ring.monomial(one, k), f],
                               [ring.zero(), ring.monomial(one, l)]])
    if twist(phi, wit, rep) != g:
        raise AssertionError("classification witness failed re-verification")
    return ReflectionClass(representative=rep, witness=wit, parity=(x, y))


# ---------------------------------------------------------------------------
# eigenvalue-1 test

def int_det(rows) -> int:
    return bareiss_det(rows)


def has_eigenvalue_one(rows) -> bool:
    """det(I - M) == 0 for a square integer matrix M with det(M) != 0;
    equivalently the induced map on Z^r has infinitely many twisted
    classes."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("square matrix required")
    if bareiss_det(rows) == 0:
        raise ValueError("the matrix must be invertible over the rationals")
    one_minus = [[(1 if i == j else 0) - rows[i][j] for j in range(n)] for i in range(n)]
    return bareiss_det(one_minus) == 0


# ---------------------------------------------------------------------------
# exponent-tuple case search for diagonal substitutions

class CaseSolution(NamedTuple):
    a: int
    b: int
    c: int
    d: int
    det: int             # ad - bc
    det_one_minus: int   # det(I - [[a, c], [b, d]])


class CaseReport(NamedTuple):
    f: str
    q: int
    box: int
    solutions: tuple
    all_eigenvalue_one: bool
    exceptions: tuple

    def summary(self):
        if self.all_eigenvalue_one:
            return f"{len(self.solutions)} solution(s), all with eigenvalue 1"
        ex = ", ".join(f"({s.a},{s.b},{s.c},{s.d})" for s in self.exceptions)
        return f"{len(self.solutions)} solution(s); eigenvalue-1 fails at {ex}"


def case_analysis(f: Poly, box: int) -> CaseReport:
    """Exhaust the tuples (a,b,c,d) with ad - bc = +-1 and |.| <= box that
    satisfy  t^c f^d = sum_k lambda_k t^(ak) f^(bk)  in the localisation,
    comparing exactly after clearing f-denominators into gf(q)[t,t^-1].

    f must be monic irreducible over gf(q), with prime-field coefficients
    and f != t.  Every solution is reported with det(I - M) for
    M = ((a, c), (b, d)), the matrix of the induced diagonal action.
    """
    from .poly import is_irreducible
    ring = f.ring
    F = ring.base
    if ring.laurent or not isinstance(F, rings.GaloisField):
        raise RingError("the case search needs f in gf(q)[t]")
    m = f.degree
    if m < 1:  # covers the zero polynomial (degree -inf)
        raise RingError("f must be non-constant")
    if f.coeff(m) != F.one():
        raise RingError("f must be monic")
    if F.is_zero(f.coeff(0)):
        raise RingError("f = t (or a multiple of t) is excluded")
    if any(c >= F.p for c in f.terms.values()):
        raise RingError("f needs prime-field coefficients")
    if not is_irreducible(f):
        raise RingError("f must be irreducible")
    lam = [f.coeff(k) for k in range(m + 1)]
    L = poly_ring(F, laurent=True)
    fL = L.make(dict(f.terms))
    fpow = {0: L.one()}

    def f_to(e):
        if e not in fpow:
            top = max(fpow)
            while top < e:
                fpow[top + 1] = fpow[top] * fL
                top += 1
        return fpow[e]

    sols = []
    rng_box = range(-box, box + 1)
    for a in rng_box:
        for b in rng_box:
            for c in rng_box:
                for d in rng_box:
                    if a * d - b * c not in (1, -1):
                        continue
                    clear = max(0, -d, -b * m if b < 0 else 0)
                    lhs = f_to(d + clear).shift(c)
                    rhs = L.zero()
                    for k in range(m + 1):
                        if lam[k] == F.zero():
                            continue
                        rhs = rhs + f_to(b * k + clear).shift(a * k).scale(lam[k])
                    if lhs == rhs:
                        sols.append(CaseSolution(
                            a, b, c, d,
                            det=a * d - b * c,
                            det_one_minus=(1 - a) * (1 - d) - c * b,
                        ))
    exceptions = tuple(s for s in sols if s.det_one_minus != 0)
    return CaseReport(
        f=str(f), q=F.q, box=box,
        solutions=tuple(sols),
        all_eigenvalue_one=not exceptions,
        exceptions=exceptions,
    )


# ---------------------------------------------------------------------------
# distinctness of pairs under the swap automorphism

def pair_distinctness(alpha, pairs, window: PairWindow, growth=None,
                      max_rounds=8):
    """Membership verdicts for (A - B) in Im(id - tau_alpha) for each
    (A, B) in pairs; 'not member, decided' certifies distinct classes."""
    phi = PairSwap(alpha, window.ring)
    dom = phi.domain
    out = []
    for A, B in pairs:
        diff = _pair_diff(dom, A, B)
        out.append(additive_membership(diff, phi, window, growth=growth,
                                       max_rounds=max_rounds))
    return out


# ---------------------------------------------------------------------------
# report shape shared with the command line

def partition_report(experiment, ring_tag, auto_word, universe, count,
                     classes, stabilized, seed, extra=None):
    rep = {
        "experiment": experiment,
        "ring": ring_tag,
        "auto": auto_word,
        "universe": universe,
        "count": count,
        "classes": classes,
        "stabilized": stabilized,
        "seed": seed,
    }
    if extra:
        rep.update(extra)
    return rep
