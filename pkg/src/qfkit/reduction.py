"""Exact reduction and short-vector enumeration for lattices of rank <= 8.

All pruning decisions are made in rational arithmetic; floats only seed the
integer interval endpoints, which are then corrected by exact comparisons.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import intmat
from .errors import BoundTooLarge, RankTooLarge
from .lattice import Lattice

MAX_RANK = 8
# Cap on the Gaussian-heuristic estimate of the number of enumerated points.
MAX_ENUMERATION = 3_000_000

Vector = tuple[int, ...]


def _check_rank(L: Lattice) -> None:
    if L.rank > MAX_RANK:
        raise RankTooLarge(f"rank {L.rank} exceeds the supported maximum {MAX_RANK}")


def _gso(g):
    """Gram-Schmidt data (mu, squared norms) from a Gram matrix."""
    n = len(g)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bs = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            s = Fraction(g[i][j])
            for k in range(j):
                s -= mu[j][k] * mu[i][k] * bs[k]
            mu[i][j] = s / bs[j]
        s = Fraction(g[i][i])
        for k in range(i):
            s -= mu[i][k] * mu[i][k] * bs[k]
        bs[i] = s
    return mu, bs


def _round(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


@lru_cache(maxsize=4096)
def lll(L: Lattice, delta: Fraction = Fraction(99, 100)) -> tuple[tuple[Vector, ...], Lattice]:
    """LLL-reduce the Gram matrix exactly.

    Returns ``(U, R)`` with U unimodular (rows are the new basis in the old
    coordinates) and ``R = U G U^T``.
    """
    n = L.rank
    g = [list(r) for r in L.gram]
    u = intmat.identity(n)

    def sub(i, j, q):
        # b_i <- b_i - q b_j
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]
        gii = g[i][i] - 2 * q * g[i][j] + q * q * g[j][j]
        for t in range(n):
            g[i][t] -= q * g[j][t]
        for t in range(n):
            g[t][i] = g[i][t]
        g[i][i] = gii

    def swap(i, j):
        u[i], u[j] = u[j], u[i]
        g[i], g[j] = g[j], g[i]
        for row in g:
            row[i], row[j] = row[j], row[i]

    k = 1
    mu, bs = _gso(g)
    while k < n:
        q = _round(mu[k][k - 1])
        if q:
            sub(k, k - 1, q)
            mu, bs = _gso(g)
        if bs[k] < (delta - mu[k][k - 1] ** 2) * bs[k - 1]:
            swap(k, k - 1)
            mu, bs = _gso(g)
            k = max(k - 1, 1)
            continue
        for j in range(k - 2, -1, -1):
            q = _round(mu[k][j])
            if q:
                sub(k, j, q)
                mu, bs = _gso(g)
        k += 1
    return tuple(map(tuple, u)), Lattice(intmat.as_tuple(g))


def _floor_upper(c: Fraction, r2: Fraction) -> int:
    """Largest integer x with x <= c + sqrt(r2)."""
    x = math.floor(float(c) + math.sqrt(float(r2)))
    ok = lambda t: t <= c or (t - c) ** 2 <= r2
    while ok(x + 1):
        x += 1
    while not ok(x):
        x -= 1
    return x


def _ceil_lower(c: Fraction, r2: Fraction) -> int:
    """Smallest integer x with x >= c - sqrt(r2)."""
    return -_floor_upper(-c, r2)


def _estimate_count(L: Lattice, bound: int) -> float:
    n = L.rank
    vol = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    return vol * bound ** (n / 2) / math.sqrt(L.discriminant)


def _canonical_sign(v: Vector) -> Vector:
    for x in v:
        if x:
            return v if x > 0 else tuple(-y for y in v)
    return v


@lru_cache(maxsize=4096)
def short_vectors(L: Lattice, bound: int, max_count: float | None = None) -> tuple[tuple[Vector, int], ...]:
    """All nonzero v with Q(v) <= bound, one per ± pair, sorted by (Q, v).

    The representative of each pair has its first nonzero entry positive.
    """
    _check_rank(L)
    if bound <= 0 or L.rank == 0:
        return ()
    cap = MAX_ENUMERATION if max_count is None else max_count
    if _estimate_count(L, bound) > cap:
        raise BoundTooLarge(f"enumeration up to {bound} is estimated beyond the cap {cap:g}")
    n = L.rank
    u, red = lll(L)
    mu, bs = _gso(red.gram)
    out = []
    x = [0] * n
    bound = Fraction(bound)

    def rec(i, remaining):
        # centre for coordinate i: -sum_{j>i} mu[j][i] x_j
        c = -sum((mu[j][i] * x[j] for j in range(i + 1, n)), Fraction(0))
        r2 = remaining / bs[i]
        lo, hi = _ceil_lower(c, r2), _floor_upper(c, r2)
        for xi in range(lo, hi + 1):
            d = xi - c
            rest = remaining - bs[i] * d * d
            if rest < 0:
                continue
            x[i] = xi
            if i == 0:
                if any(x):
                    out.append(tuple(x))
            else:
                rec(i - 1, rest)
        x[i] = 0

    rec(n - 1, bound)
    results = {}
    for y in out:
        v = _canonical_sign(tuple(sum(y[i] * u[i][j] for i in range(n)) for j in range(n)))
        if v not in results:
            results[v] = L.Q(v)
    return tuple(sorted(((v, q) for v, q in results.items()), key=lambda t: (t[1], t[0])))


@dataclass(frozen=True)
class MinimaProfile:
    minima: tuple[int, ...]
    witnesses: tuple[Vector, ...]

    def to_json(self) -> dict:
        return {"minima": list(self.minima), "witnesses": [list(w) for w in self.witnesses]}


class _Independence:
    """Incremental rank test over Q."""

    def __init__(self, n):
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []
        self.n = n

    def reduce(self, v):
        w = [Fraction(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            if w[p]:
                f = w[p] / row[p]
                w = [a - f * b for a, b in zip(w, row)]
        return w

    def add(self, v) -> bool:
        w = self.reduce(v)
        p = next((i for i, a in enumerate(w) if a), None)
        if p is None:
            return False
        self.rows.append(w)
        self.pivots.append(p)
        return True


@lru_cache(maxsize=4096)
def successive_minima(L: Lattice) -> MinimaProfile:
    """Successive minima with an independent witness set, by layered enumeration."""
    _check_rank(L)
    n = L.rank
    if n == 0:
        return MinimaProfile((), ())
    _, red = lll(L)
    top = max(red.diagonal())
    bound = min(red.diagonal())
    while True:
        bound = min(bound, top)
        ind = _Independence(n)
        mins, wits = [], []
        for v, q in short_vectors(L, bound):
            if ind.add(v):
                mins.append(q)
                wits.append(v)
                if len(mins) == n:
                    return MinimaProfile(tuple(mins), tuple(wits))
        bound *= 2


@lru_cache(maxsize=4096)
def minkowski_reduce(L: Lattice) -> tuple[Lattice, tuple[Vector, ...]]:
    """Greedy Minkowski reduction.

    The i-th basis vector is the first vector in (Q, lexicographic) order that
    extends the previous ones to a primitive set.  For rank <= 4 the diagonal
    of the result equals the successive minima.
    """
    _check_rank(L)
    n = L.rank
    if n == 0:
        return L, ()
    _, red = lll(L)
    bound = max(red.diagonal())
    basis: list[Vector] = []
    while len(basis) < n:
        found = False
        for v, _ in short_vectors(L, bound):
            if intmat.is_primitive_rows(basis + [v]):
                basis.append(v)
                found = True
                break
        if not found:
            bound *= 2
    gram = intmat.as_tuple(intmat.congruent(basis, L.gram))
    return Lattice(gram, L.label), tuple(basis)


def _signed(vectors):
    for v, _ in vectors:
        yield v
        yield tuple(-x for x in v)


@lru_cache(maxsize=4096)
def canonical_gram(L: Lattice) -> tuple[tuple[int, ...], ...]:
    """An isometry-class invariant Gram matrix for rank <= 4.

    Among all bases with Q(v_i) = mu_i, take the one whose off-diagonal
    entries (read row by row below the diagonal) are lexicographically least.
    For larger rank the greedy Minkowski Gram is returned, which is not
    canonical.
    """
    n = L.rank
    if n > 4:
        return minkowski_reduce(L)[0].gram
    prof = successive_minima(L)
    pool = {m: [w for w in _signed(short_vectors(L, m)) if L.Q(w) == m] for m in set(prof.minima)}
    best: list = [None, None]

    def rec(chosen, key):
        i = len(chosen)
        if best[0] is not None and key > best[0][: len(key)]:
            return
        if i == n:
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, list(chosen)
            return
        options = []
        for v in pool[prof.minima[i]]:
            if v in chosen:
                continue
            row = tuple(L.B(v, w) for w in chosen)
            options.append((row, v))
        options.sort()
        for row, v in options:
            if not intmat.is_primitive_rows(chosen + [v]):
                continue
            rec(chosen + [v], key + row)

    rec([], ())
    return intmat.as_tuple(intmat.congruent(best[1], L.gram))
