"""Exact linear algebra: fraction-free integer determinants and dense
Gaussian elimination over the finite fields of the rings module.

Matrices are plain lists of row lists.  Field entries are gf codes, so a
field context must accompany every gf routine.  Everything here is pure
and allocation-light; the dimensions in this package stay below ~100.
"""

from __future__ import annotations


def bareiss_det(rows) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# gf(q) routines; `F` is a GaloisField context, entries are codes

def gf_rref(F, rows):
    """(rref, pivot columns).  Input rows are not mutated."""
    a = [list(r) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if a[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        s = F.inv(a[r][c])
        if s != 1:
            a[r] = [F.mul(s, x) for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [row for row in a[:r]], pivots


def gf_rank(F, rows) -> int:
    return len(gf_rref(F, rows)[0])


def gf_solve(F, rows, rhs):
    """One solution x of A x = b over gf, or None.  A given as row lists."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    aug = [list(r) + [v] for r, v in zip(rows, rhs)]
    red, pivots = gf_rref(F, aug)
    x = [0] * ncols
    for row, c in zip(red, pivots):
        if c == ncols:
            return None  # pivot in the constant column: inconsistent
        x[c] = row[-1]
    return x


def gf_nullspace(F, rows):
    """Basis of {x : A x = 0} over gf."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    red, pivots = gf_rref(F, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(red, pivots):
            v[pc] = F.neg(row[fc])
        basis.append(v)
    return basis


def gf_det(F, rows):
    a = [list(r) for r in rows]
    n = len(a)
    det = F.one()
    for c in range(n):
        pr = None
        for i in range(c, n):
            if a[i][c] != 0:
                pr = i
                break
        if pr is None:
            return F.zero()
        if pr != c:
            a[c], a[pr] = a[pr], a[c]
            det = F.neg(det)
        det = F.mul(det, a[c][c])
        s = F.inv(a[c][c])
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = F.mul(a[i][c], s)
                a[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(a[i], a[c])]
    return det


def gf_column_space_rref(F, cols):
    """Canonical form (rref rows) of the span of the given vectors."""
    if not cols:
        return []
    return gf_rref(F, cols)[0]


def gf_in_span(F, rref_rows, vec) -> bool:
    """Membership of vec in a space given by rref rows."""
    v = list(vec)
    for row in rref_rows:
        p = next((c for c, x in enumerate(row) if x != 0), None)
        if p is not None and v[p] != 0:
            f = v[p]
            v = [F.sub(x, F.mul(f, y)) for x, y in zip(v, row)]
    return all(x == 0 for x in v)


def gf_intersect_coordinates(F, basis, keep):
    """Intersection of span(basis) with the coordinate subspace supported
    on the index set `keep`; returns a canonical rref basis (full-length
    vectors, zero off `keep`)."""
    if not basis:
        return []
    n = len(basis[0])
    out_idx = [i for i in range(n) if i not in keep]
    if not out_idx:
        return gf_column_space_rref(F, basis)
    # combinations c with sum c_k * basis_k vanishing outside `keep`
    rows = [[b[i] for b in basis] for i in out_idx]
    combos = gf_nullspace(F, rows)
    vecs = []
    for c in combos:
        v = [0] * n
        for ck, b in zip(c, basis):
            if ck != 0:
                v = [F.add(x, F.mul(ck, y)) for x, y in zip(v, b)]
        vecs.append(v)
    return gf_column_space_rref(F, vecs)
