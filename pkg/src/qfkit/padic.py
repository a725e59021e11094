"""Local invariants: Hilbert symbols, Hasse invariants, isotropy, Jordan splittings."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

from . import intmat
from ._localrep import hensel_precision, ord_p, solve
from .errors import IsotropicInput, NotNormalized, PreconditionViolation, SearchExhausted
from .lattice import Lattice, make_lattice, orthogonal_complement, embed

INF = "inf"

__all__ = [
    "INF", "ord_p", "legendre", "is_local_square", "hilbert_symbol", "hasse_invariant",
    "is_isotropic_space", "is_anisotropic_lattice", "JordanComponent", "JordanSplitting",
    "jordan_decompose", "last_scale", "primitive_norm_gap", "primitive_order_profile",
    "anisotropic_primes_quaternary", "CharacteristicPrimeSet", "characteristic_primes",
    "norm_image_full", "norm_image_full_oracle", "represents_number", "prime_factors",
]


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of |n| by trial division."""
    n = abs(int(n))
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _unit(x: Fraction, p: int) -> Fraction:
    return x / Fraction(p) ** ord_p(x, p)


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _as_int_class(x) -> int:
    """An integer in the same square class as the nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no square class")
    return x.numerator * x.denominator


def is_local_square(a, place) -> bool:
    a = _as_int_class(a)
    if place == INF:
        return a > 0
    p = place
    v = ord_p(a, p)
    if v % 2:
        return False
    u = a // p ** v
    if p == 2:
        return u % 8 == 1
    return legendre(u, p) == 1


def hilbert_symbol(a, b, place) -> int:
    """The Hilbert symbol (a, b) at a prime or at ``INF``."""
    a, b = _as_int_class(a), _as_int_class(b)
    if place == INF:
        return -1 if a < 0 and b < 0 else 1
    p = place
    al, be = ord_p(a, p), ord_p(b, p)
    u, v = a // p ** al, b // p ** be
    if p == 2:
        eps = lambda t: ((t % 8) - 1) // 2 % 2
        omega = lambda t: (((t % 8) ** 2 - 1) // 8) % 2
        e = eps(u) * eps(v) + al * omega(v) + be * omega(u)
        return -1 if e % 2 else 1
    s = (-1) ** (al * be * ((p - 1) // 2) % 2)
    if be % 2:
        s *= legendre(u, p)
    if al % 2:
        s *= legendre(v, p)
    return s


def hasse_invariant(diag: Sequence, place) -> int:
    """Product of (a_i, a_j) over i < j."""
    out = 1
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            out *= hilbert_symbol(diag[i], diag[j], place)
    return out


def is_isotropic_space(diag: Sequence, place) -> bool:
    diag = [Fraction(x) for x in diag]
    if any(x == 0 for x in diag):
        raise ValueError("degenerate form")
    n = len(diag)
    if place == INF:
        return any(x > 0 for x in diag) and any(x < 0 for x in diag)
    if n <= 1:
        return False
    d = reduce(lambda x, y: x * y, diag, Fraction(1))
    eps = hasse_invariant(diag, place)
    if n == 2:
        return is_local_square(-d, place)
    if n == 3:
        return eps == hilbert_symbol(-1, -d, place)
    if n == 4:
        return not is_local_square(d, place) or eps == hilbert_symbol(-1, -1, place)
    return True


def is_anisotropic_lattice(L: Lattice, p) -> bool:
    return not is_isotropic_space(intmat.rational_diagonal(L.gram), p)


# -- Jordan splittings -------------------------------------------------------

@dataclass(frozen=True)
class JordanComponent:
    """A p^scale-modular component; ``gram`` is the unit part (Gram / p^scale).

    ``blocks`` lists the 1x1 and 2x2 unit-part blocks that make up ``gram``.
    """

    scale: int
    gram: tuple
    blocks: tuple

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        """All diagonal entries of the unit part are even (meaningful at p = 2)."""
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def block_kinds(self, p: int) -> tuple[str, ...]:
        """'u' for a rank-one block; 'H' or 'A' for an even binary block at p = 2."""
        out = []
        for b in self.blocks:
            if len(b) == 1:
                out.append("u")
            else:
                out.append("H" if intmat.det(b) % 8 == 7 else "A")
        return tuple(out)

    def unit_square_class(self, p: int) -> int:
        """Legendre symbol of the unit-part determinant (p odd)."""
        return legendre(int(intmat.det(self.gram)), p)

    def to_json(self) -> dict:
        return {"scale": self.scale, "rank": self.rank, "gram": [list(r) for r in self.gram]}


@dataclass(frozen=True)
class JordanSplitting:
    """``basis`` has p-unit determinant and ``basis G basis^T`` is the orthogonal sum
    of the components, each multiplied by p^scale."""

    p: int
    components: tuple[JordanComponent, ...]
    basis: tuple

    def full_blocks(self) -> list:
        out = []
        for c in self.components:
            f = self.p ** c.scale
            for b in c.blocks:
                out.append([[f * x for x in row] for row in b])
        return out

    def reassembled(self) -> list[list[int]]:
        n = sum(c.rank for c in self.components)
        g = [[0] * n for _ in range(n)]
        off = 0
        for blk in self.full_blocks():
            for i, row in enumerate(blk):
                for j, x in enumerate(row):
                    g[off + i][off + j] = x
            off += len(blk)
        return g

    def to_json(self) -> dict:
        return {"p": self.p, "components": [c.to_json() for c in self.components]}


def _jordan_raw(gram, p: int):
    """Greedy splitting; returns [(scale, exact integer block, basis rows)]."""
    n = len(gram)
    m = [[Fraction(x) for x in row] for row in gram]
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    active = list(range(n))
    pieces = []

    def op(k, coeffs):
        # e_k <- e_k - sum c_i e_i, applied as row then column operation
        for i, c in coeffs:
            m[k] = [a - c * b for a, b in zip(m[k], m[i])]
            t[k] = [a - c * b for a, b in zip(t[k], t[i])]
        for row in m:
            row[k] -= sum(c * row[i] for i, c in coeffs)

    while active:
        best = None
        for i in active:
            for j in active:
                if j < i or m[i][j] == 0:
                    continue
                v = ord_p(m[i][j], p)
                key = (v, 0 if i == j else 1)
                if best is None or key < best[0]:
                    best = (key, i, j)
        if best is None:
            raise ValueError("degenerate form")
        (v, offdiag), i, j = best
        if offdiag and p != 2:
            # make a diagonal entry of minimal valuation
            # e_i <- e_i + e_j; the new diagonal entry has valuation v since 2 is a unit
            op(i, [(j, Fraction(-1))])
            offdiag = 0
        if not offdiag:
            piv = [i]
            for k in active:
                if k != i and m[k][i]:
                    op(k, [(i, m[k][i] / m[i][i])])
        else:
            piv = [i, j]
            a, b, c = m[i][i], m[i][j], m[j][j]
            det = a * c - b * b
            for k in active:
                if k in piv:
                    continue
                x, y = m[k][i], m[k][j]
                if x or y:
                    ci = (x * c - y * b) / det
                    cj = (y * a - x * b) / det
                    op(k, [(i, ci), (j, cj)])
        active = [k for k in active if k not in piv]
        pieces.append((v, piv))

    out = []
    for v, piv in pieces:
        rows = []
        for k in piv:
            lam = reduce(lambda x, y: x * y // math.gcd(x, y), (f.denominator for f in t[k]), 1)
            rows.append([int(f * lam) for f in t[k]])
        blk = intmat.congruent(rows, gram)
        out.append((v, blk, rows))
    out.sort(key=lambda z: z[0])
    return out


@lru_cache(maxsize=2048)
def _jordan_cached(gram: tuple, p: int) -> JordanSplitting:
    raw = _jordan_raw(gram, p)
    comps = []
    basis = []
    i = 0
    while i < len(raw):
        s = raw[i][0]
        group = []
        while i < len(raw) and raw[i][0] == s:
            group.append(raw[i])
            i += 1
        f = p ** s
        units = [[[x // f for x in row] for row in blk] for _, blk, _ in group]
        n = sum(len(u) for u in units)
        g = [[0] * n for _ in range(n)]
        off = 0
        for u in units:
            for a, row in enumerate(u):
                for b, x in enumerate(row):
                    g[off + a][off + b] = x
            off += len(u)
        comps.append(JordanComponent(s, intmat.as_tuple(g), tuple(intmat.as_tuple(u) for u in units)))
        for _, _, rows in group:
            basis.extend(tuple(r) for r in rows)
    return JordanSplitting(p, tuple(comps), tuple(basis))


def jordan_decompose(L, p: int) -> JordanSplitting:
    """Jordan splitting of L over Z_p (L a Lattice or a nondegenerate Gram)."""
    gram = L.gram if isinstance(L, Lattice) else intmat.as_tuple(L)
    return _jordan_cached(gram, p)


def last_scale(L, p: int) -> int:
    """ord_p of the norm ideal of the last Jordan component."""
    last = jordan_decompose(L, p).components[-1]
    if p == 2 and last.is_even:
        return last.scale + 1
    return last.scale


# -- local representation of numbers ------------------------------------------

def represents_number(L, c: int, p: int, primitive: bool = False) -> bool:
    """Whether L_p (primitively) represents the nonzero p-adic integer c."""
    js = jordan_decompose(L, p)
    k = hensel_precision([[c]], p)
    res = solve(js.full_blocks(), js.basis, [[c]], p, k, want_witness=False, primitive=primitive)
    return res.primitive if primitive else res.represented


def _nonresidue(p: int) -> int:
    return next(a for a in range(2, p) if legendre(a, p) == -1)


def norm_image_full_oracle(L: Lattice, p: int) -> bool:
    """Q(L_p) = 2Z_p decided by testing a finite set of square-class representatives.

    Every element of 2Z_p is t^2 times one of them, so this is exact.
    """
    if not L.is_normalized:
        raise NotNormalized("lattice must have norm ideal 2Z")
    if p == 2:
        reps = [2 * u for u in (1, 3, 5, 7)] + [4 * u for u in (1, 3, 5, 7)]
    else:
        d = _nonresidue(p)
        reps = [2, 2 * d, 2 * p, 2 * p * d]
    return all(represents_number(L, c, p) for c in reps)


def norm_image_full(L: Lattice, p: int) -> bool:
    """True iff every element of 2Z_p is represented by L_p (L normalized)."""
    if not L.is_normalized:
        raise NotNormalized("lattice must have norm ideal 2Z")
    if p == 2:
        return norm_image_full_oracle(L, p)
    comps = {c.scale: c for c in jordan_decompose(L, p).components}
    r0 = comps[0].rank if 0 in comps else 0
    r1 = comps[1].rank if 1 in comps else 0
    if r0 >= 3:
        return True
    if r0 == 2:
        if is_local_square(-intmat.det(comps[0].gram), p):
            return True
        return r1 >= 2
    return False


# -- anisotropic lattices ------------------------------------------------------

def primitive_order_profile(K: Lattice, p: int) -> tuple[int, tuple[int, ...]]:
    """Largest ord_p Q(v) over primitive v of K_p, with a vector mod p^(max+1) attaining it.

    Lifts the sets {v mod p^j primitive : Q(v) ≡ 0 mod p^j} one level at a time
    until they die out, which happens because K_p is anisotropic.
    """
    if not is_anisotropic_lattice(K, p):
        raise IsotropicInput(f"lattice is isotropic at {p}")
    n = K.rank
    digits = [tuple(d) for d in _all_vectors(p, n)]
    level = [v for v in digits if any(v) and K.Q(v) % p == 0]
    if not level:
        return 0, next(v for v in digits if any(v))
    j = 1
    witness = level[0]
    while True:
        pj = p ** j
        nxt = []
        for v in level:
            for x in digits:
                w = tuple(a + pj * b for a, b in zip(v, x))
                if K.Q(w) % (pj * p) == 0:
                    nxt.append(w)
        if not nxt:
            return j, witness
        level = nxt
        witness = level[0]
        j += 1
        if j > 200:
            raise IsotropicInput("lifting did not terminate")


def _all_vectors(p, n):
    if n == 0:
        yield ()
        return
    for head in range(p):
        for tail in _all_vectors(p, n - 1):
            yield (head,) + tail


def primitive_norm_gap(K: Lattice, p: int) -> int:
    """Smallest even e with ord_p Q(v) < e for every primitive v in K_p."""
    top, _ = primitive_order_profile(K, p)
    return top + 1 if (top + 1) % 2 == 0 else top + 2


def anisotropic_primes_quaternary(U: Sequence) -> frozenset:
    """All primes at which the quaternary diagonal form U is anisotropic."""
    U = [Fraction(x) for x in U]
    if len(U) != 4:
        raise PreconditionViolation("need exactly four entries")
    if any(x <= 0 for x in U):
        raise PreconditionViolation("form must be positive definite")
    d = reduce(lambda x, y: x * y, U, Fraction(1))
    if math.isqrt(d.numerator) ** 2 != d.numerator or math.isqrt(d.denominator) ** 2 != d.denominator:
        raise PreconditionViolation("discriminant is not a square")
    cands = {2}
    for x in U:
        cands.update(prime_factors(x.numerator))
        cands.update(prime_factors(x.denominator))
    return frozenset(p for p in sorted(cands) if not is_isotropic_space(U, p))


@dataclass(frozen=True)
class CharacteristicPrimeSet:
    space: tuple
    square_disc_subspace: tuple
    primes: frozenset
    vector: tuple

    def to_json(self) -> dict:
        return {
            "space": [str(x) for x in self.space],
            "square_disc_subspace": [str(x) for x in self.square_disc_subspace],
            "primes": sorted(self.primes),
            "vector": list(self.vector),
        }


def _squarefree_part(n: int) -> int:
    out = 1
    for p in prime_factors(n):
        if ord_p(n, p) % 2:
            out *= p
    return out


def _box(coeffs, bound):
    """All x with sum c_i x_i^2 <= bound (first coordinate >= 0), and their values."""
    axes = [np.arange(-math.isqrt(bound // c), math.isqrt(bound // c) + 1, dtype=np.int64)
            for c in coeffs]
    axes[0] = axes[0][axes[0] >= 0]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(coeffs))
    vals = (grid * grid) @ np.array(coeffs, dtype=np.int64)
    keep = vals <= bound
    return grid[keep], vals[keep]


def _find_class_vector(ints, s, max_bound):
    """Nonzero v with sum a_i v_i^2 = s m^2, by meet in the middle on (v1..v3 | v4, v5, m).

    Tries norms s m^2 <= Y for Y = 2^j * max(a) up to max_bound; the hit with
    the smallest norm is returned, ties broken lexicographically.
    """
    Y = max(max(ints), s)
    while True:
        Y = min(Y, max_bound)
        if Y < s or Y ** 1.5 > 4e7:
            return None
        left, lval = _box(ints[:3], Y)
        order = np.argsort(lval, kind="stable")
        left, lval = left[order], lval[order]
        ms = np.arange(1, math.isqrt(Y // s) + 1, dtype=np.int64)
        for m in ms:
            target = s * int(m) * int(m)
            right, rval = _box(ints[3:], target)
            need = target - rval
            pos = np.searchsorted(lval, need)
            pos = np.minimum(pos, len(lval) - 1)
            hit = lval[pos] == need
            if hit.any():
                cands = [tuple(int(x) for x in left[pos[i]]) + tuple(int(x) for x in right[i])
                         for i in np.nonzero(hit)[0]]
                return min(_positive(c) for c in cands)
        if Y == max_bound:
            return None
        Y *= 2


def _positive(v):
    first = next(x for x in v if x)
    return v if first > 0 else tuple(-x for x in v)


def characteristic_primes(W: Sequence, max_bound: int = 1 << 17) -> CharacteristicPrimeSet:
    """Primes where the square-discriminant quaternary subspace of W is anisotropic.

    On an integral diagonal lattice on W a vector v with Q(v) d(W) a square is
    found by bounded enumeration (Q(v) <= max_bound); U is its orthogonal
    complement.
    """
    W = tuple(Fraction(x) for x in W)
    if len(W) != 5 or any(x <= 0 for x in W):
        raise PreconditionViolation("need a positive definite quinary diagonal form")
    den = reduce(lambda x, y: x * y // math.gcd(x, y), (x.denominator for x in W), 1)
    ints = [int(x * den * den) for x in W]
    L = make_lattice([[ints[i] if i == j else 0 for j in range(5)] for i in range(5)])
    s = _squarefree_part(L.discriminant)
    v = _find_class_vector(ints, s, max_bound)
    if v is None:
        raise SearchExhausted(f"no vector representing the discriminant class up to norm {max_bound}")
    comp, _ = orthogonal_complement(embed(L, [v]))
    U = intmat.rational_diagonal(comp.sub_gram.gram)
    return CharacteristicPrimeSet(W, tuple(U), anisotropic_primes_quaternary(U), v)
