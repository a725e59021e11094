"""Exact integer and rational matrix helpers.

Matrices are plain sequences of rows (lists or tuples of ``int`` /
``Fraction``).  Nothing here uses floating point.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Matrix) -> list[list[int]]:
    return [list(col) for col in zip(*a)]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def congruent(t, g):
    """Return ``t * g * t^T``."""
    tg = matmul(t, g)
    return [[sum(x * y for x, y in zip(r, s)) for s in t] for r in tg]


def as_tuple(a) -> tuple[tuple, ...]:
    return tuple(tuple(row) for row in a)


def det(a) -> int | Fraction:
    """Determinant by Bareiss elimination (fraction-free on integer input)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                if isinstance(num, int) and isinstance(prev, int):
                    m[i][j] = num // prev
                else:
                    m[i][j] = Fraction(num) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def leading_minors(a) -> list:
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


def rank(a) -> int:
    """Rank over Q."""
    m = [[Fraction(x) for x in row] for row in a]
    if not m:
        return 0
    r = 0
    ncols = len(m[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def inverse(a) -> list[list[Fraction]]:
    """Inverse over Q (Gauss-Jordan)."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n:] for row in m]


def hnf_with_transform(a: Matrix) -> tuple[list[list[int]], list[list[int]], int]:
    """Row-style Hermite normal form.

    Returns ``(H, U, r)`` with ``H = U * a``, ``U`` unimodular, the first ``r``
    rows of ``H`` in echelon form with positive pivots and entries above each
    pivot reduced into ``[0, pivot)``, and the remaining rows zero.
    """
    h = [list(map(int, row)) for row in a]
    nrows = len(h)
    ncols = len(h[0]) if nrows else 0
    u = identity(nrows)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        # Euclid down the column until only row r is nonzero.
        while True:
            nz = [i for i in range(r, nrows) if h[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(h[i][c]))
            if piv != r:
                h[r], h[piv] = h[piv], h[r]
                u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, nrows):
                if h[i][c] != 0:
                    q = h[i][c] // h[r][c]
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                    if h[i][c] != 0:
                        done = False
            if done:
                break
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return h, u, r


def hnf(a: Matrix) -> list[list[int]]:
    """Nonzero rows of the row-style Hermite normal form of ``a``."""
    if not a:
        return []
    h, _, r = hnf_with_transform(a)
    return h[:r]


def left_kernel(a: Matrix) -> list[list[int]]:
    """Basis (HNF) of the lattice ``{x in Z^k : x * a = 0}`` for a k x l matrix."""
    k = len(a)
    if k == 0:
        return []
    if not a[0]:
        return identity(k)
    _, u, r = hnf_with_transform(a)
    return hnf(u[r:])


def invariant_factors(a: Matrix) -> list[int]:
    """Nonzero invariant factors (Smith normal form diagonal) of an integer matrix."""
    m = [list(map(int, row)) for row in a]
    if not m or not m[0]:
        return []
    nrows, ncols = len(m), len(m[0])
    out = []
    t = 0
    while t < min(nrows, ncols):
        nz = [(abs(m[i][j]), i, j) for i in range(t, nrows) for j in range(t, ncols) if m[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        m[t], m[pi] = m[pi], m[t]
        for row in m:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            p = m[t][t]
            for i in range(t + 1, nrows):
                if m[i][t]:
                    q = m[i][t] // p
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                    if m[i][t]:
                        changed = True
            for j in range(t + 1, ncols):
                if m[t][j]:
                    q = m[t][j] // p
                    for row in m:
                        row[j] -= q * row[t]
                    if m[t][j]:
                        changed = True
            if changed:
                # move the smallest remaining entry of row/column t into the pivot
                cands = [(abs(m[i][t]), i, t) for i in range(t, nrows) if m[i][t]]
                cands += [(abs(m[t][j]), t, j) for j in range(t, ncols) if m[t][j]]
                _, pi, pj = min(cands)
                m[t], m[pi] = m[pi], m[t]
                for row in m:
                    row[t], row[pj] = row[pj], row[t]
                continue
            # pivot must divide the rest of the block
            bad = next(((i, j) for i in range(t + 1, nrows) for j in range(t + 1, ncols)
                        if m[i][j] % p), None)
            if bad is None:
                break
            m[t] = [x + y for x, y in zip(m[t], m[bad[0]])]
        out.append(abs(m[t][t]))
        t += 1
    return out


def is_primitive_rows(rows: Matrix) -> bool:
    """True iff the rows extend to a basis of Z^m (all invariant factors 1)."""
    if not rows:
        return True
    f = invariant_factors(rows)
    return len(f) == len(rows) and all(x == 1 for x in f)


def rank_mod_p(rows: Matrix, p: int) -> int:
    a = [[x % p for x in r] for r in rows]
    r = 0
    for c in range(len(a[0]) if a else 0):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c] * inv
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def solve_in_basis(vectors: Matrix, basis: Matrix) -> list[list[int]] | None:
    """Integer coordinates of ``vectors`` w.r.t. the rows of ``basis``.

    Returns None when some vector is not an integral combination.
    """
    if not vectors:
        return []
    n = len(basis)
    if n == 0:
        return None if any(any(v) for v in vectors) else [[] for _ in vectors]
    # Solve c * basis = v via the normal equations over Q.
    bbt = matmul(basis, transpose(basis))
    inv = inverse(bbt)
    out = []
    for v in vectors:
        vb = [sum(x * y for x, y in zip(v, b)) for b in basis]
        c = [sum(vb[j] * inv[j][i] for j in range(n)) for i in range(n)]
        if any(x.denominator != 1 for x in c):
            return None
        ci = [int(x) for x in c]
        back = [sum(ci[i] * basis[i][j] for i in range(n)) for j in range(len(v))]
        if back != list(v):
            return None
        out.append(ci)
    return out


def same_row_lattice(a: Matrix, b: Matrix) -> bool:
    return hnf(a) == hnf(b)


def rational_diagonal(gram) -> list[Fraction]:
    """Diagonal entries of a rational diagonalization of a nondegenerate form."""
    m = [[Fraction(x) for x in row] for row in gram]
    n = len(m)
    out = []
    for k in range(n):
        if m[k][k] == 0:
            j = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if j is not None:
                m[k], m[j] = m[j], m[k]
                for row in m:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                if j is None:
                    raise ValueError("degenerate form")
                # e_k <- e_k + e_j makes the pivot 2*B(e_k, e_j) != 0
                m[k] = [x + y for x, y in zip(m[k], m[j])]
                for row in m:
                    row[k] += row[j]
        piv = m[k][k]
        out.append(piv)
        for i in range(k + 1, n):
            f = m[i][k] / piv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
                for row in m:
                    row[i] -= f * row[k]
    return out
