"""Finite tables of local representations.

For a Z_p-lattice split into Jordan blocks ``L_p = J_1 ⊥ ... ⊥ J_t`` and an
n x m matrix X, ``X G X^T = sum_b X_b G_b X_b^T``.  The set of pairs

    (X G X^T mod p^k, column span of X mod p)

is therefore the iterated sumset of the per-block sets, which we store as
boolean arrays over ``span x (Z/p^k)^{n(n+1)/2}`` and combine by FFT
convolution (certified by a rounding-gap check, with an exact fallback).

Precision: put M in Jordan form, with scale p^t_i attached to row i.  If
``X G X^T - M = E`` and ``ord_p E_ij >= c + max(t_i, t_j)`` with
``c = ord_p(4) + 1``, the Newton step ``X <- X - (1/2) E M^{-1} X`` moves X
only by multiples of p and leaves an error of order ``2c - ord_p(4) +
max(t_i, t_j)``, so it converges to an exact representation.  The table
built with those per-entry moduli therefore decides both plain and
primitive representability (the correction does not change X mod p).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import intmat
from .errors import ResourceLimit

# Largest table (number of residue classes, times spans) we are willing to build.
TABLE_CAP = 1 << 24


def ord_p(x, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def hensel_precision(target, p: int) -> int:
    """A single modulus exponent that makes the mod p^k search decide exact representability."""
    inv = intmat.inverse(target)
    alpha = max([0] + [-ord_p(x, p) for row in inv for x in row if x != 0])
    return ord_p(4, p) + alpha + 1


def pair_precisions(scales, p: int, extra: int = 0, sizes=None) -> tuple[int, ...]:
    """Per-entry exponents (upper triangle, row major) for a Jordan-form target.

    ``sizes`` gives the block sizes of the target in order (default: all 1).
    Entries inside one block need c + t with c = ord(4) + 1 + extra.  Between
    blocks of scales t_i <= t_j the entry is 0 and only needs
    max(t_i + 1, ceil((c + t_i + t_j) / 2)): orthogonalizing from the small
    scale up then moves every value by less than its own precision.
    """
    c = ord_p(4, p) + 1 + extra
    n = len(scales)
    block = []
    for b, size in enumerate(sizes or [1] * n):
        block += [b] * size
    out = []
    for i, j in _upper_pairs(n):
        lo, hi = sorted((scales[i], scales[j]))
        if block[i] == block[j]:
            out.append(c + hi)
        else:
            out.append(max(lo + 1, -(-(c + lo + hi) // 2)))
    return tuple(out)


# -- subspaces of F_p^n -----------------------------------------------------

def _rref(vectors, p):
    rows = [list(v) for v in vectors if any(x % p for x in v)]
    rows = [[x % p for x in r] for r in rows]
    out = []
    n = len(vectors[0]) if vectors else 0
    col = 0
    for col in range(n):
        piv = next((i for i, r in enumerate(rows) if r[col] % p), None)
        if piv is None:
            continue
        r = rows.pop(piv)
        inv = pow(r[col], -1, p)
        r = [(x * inv) % p for x in r]
        rows = [[(a - b * s[col]) % p for a, b in zip(s, r)] for s in rows]
        out = [[(a - b * s[col]) % p for a, b in zip(s, r)] for s in out]
        out.append(r)
        rows = [s for s in rows if any(s)]
    return tuple(sorted(tuple(r) for r in out))


@lru_cache(maxsize=None)
def _subspaces(p: int, n: int):
    """All subspaces of F_p^n (canonical RREF), with index and join table."""
    spaces = {(): 0}
    frontier = [()]
    vecs = [v for v in itertools.product(range(p), repeat=n) if any(v)]
    while frontier:
        nxt = []
        for s in frontier:
            for v in vecs:
                t = _rref(list(s) + [v], p)
                if t not in spaces:
                    spaces[t] = len(spaces)
                    nxt.append(t)
        frontier = nxt
    order = sorted(spaces, key=lambda s: (len(s), s))
    index = {s: i for i, s in enumerate(order)}
    size = len(order)
    join = np.zeros((size, size), dtype=np.int64)
    for a in order:
        for b in order:
            join[index[a], index[b]] = index[_rref(list(a) + list(b), p) if (a or b) else ()]
    full = index[_rref([tuple(int(i == j) for j in range(n)) for i in range(n)], p)]
    return order, index, join, full


@lru_cache(maxsize=None)
def _span_lookup(p: int, n: int, r: int) -> np.ndarray:
    """Span index of the columns of every n x r matrix mod p (row-major digits)."""
    _, index, _, _ = _subspaces(p, n)
    out = np.zeros(p ** (n * r), dtype=np.int64)
    for code, digits in enumerate(itertools.product(range(p), repeat=n * r)):
        cols = [tuple(digits[i * r + c] for i in range(n)) for c in range(r)]
        out[code] = index[_rref(cols, p) if any(any(c) for c in cols) else ()]
    return out


# -- per-block tables ------------------------------------------------------

def _upper_pairs(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


@dataclass
class BlockTable:
    table: np.ndarray          # bool, shape (spans, q**N)
    keys: np.ndarray           # sorted span * G + value for reachable pairs
    reps: np.ndarray           # for each key, the n*r digits (mod p**kk) of a representative X
    kk: int                    # the block matrices are enumerated mod p**kk
    r: int


def _num_subspaces(p: int, n: int) -> int:
    """Number of subspaces of F_p^n (sum of Gaussian binomials)."""
    total = 0
    for d in range(n + 1):
        num = den = 1
        for i in range(d):
            num *= p ** (n - i) - 1
            den *= p ** (i + 1) - 1
        total += num // den
    return total


def table_size(p: int, ks, primitive: bool = True) -> int:
    """Number of (span, value) cells a search with exponents ks needs."""
    n = 0
    while n * (n + 1) // 2 < len(ks):
        n += 1
    return math.prod(p ** e for e in ks) * (_num_subspaces(p, n) if primitive else 1)


def _flat(vals: np.ndarray, moduli) -> np.ndarray:
    """Mixed-radix index of each row of vals (moduli: one per column, or a single int)."""
    if isinstance(moduli, (int, np.integer)):
        moduli = [int(moduli)] * vals.shape[1]
    out = np.zeros(len(vals), dtype=np.int64)
    for c in range(vals.shape[1]):
        out = out * moduli[c] + vals[:, c]
    return out


@lru_cache(maxsize=32)
def _block_table(block: tuple, n: int, p: int, ks: tuple, spans: bool = True) -> BlockTable:
    """Reachable (span of X mod p, X b X^T) over n x r matrices X; entry c mod p^ks[c].

    Row i of X only matters mod p^kk_i, kk_i = max_l k_il - ord_p(b).  Writing
    X_i = X0_i + p^j_i X1_i with j_i + j_l >= k_il - ord_p(b), the value is
    X0 b X0^T plus a term linear in X1, so each X0 contributes a coset of the
    subgroup spanned by its linear terms; X0 with equal spanning sets share it.
    """
    r = len(block)
    s = min(ord_p(x, p) for row in block for x in row if x)
    N = n * (n + 1) // 2
    pairs = _upper_pairs(n)
    kk = [max(1, max(e for (u, w), e in zip(pairs, ks) if i in (u, w)) - s) for i in range(n)]
    jj = [(e + 1) // 2 for e in kk]
    q = p ** max(ks)
    G = math.prod(p ** e for e in ks)
    S = _num_subspaces(p, n) if spans else 1
    if G * S > TABLE_CAP or p ** (r * sum(jj)) > TABLE_CAP:
        raise ResourceLimit(f"local table too large (p={p}, precision {ks}, n={n}, block rank {r})")
    mods = np.array([p ** e for e in ks], dtype=np.int64)
    ranges = [p ** jj[i] for i in range(n) for _ in range(r)]
    digits = np.indices(ranges).reshape(n * r, -1).T.astype(np.int64)
    T = len(digits)
    X0 = digits.reshape(T, n, r)
    B = np.array(block, dtype=np.int64) % q
    XB = np.einsum("tia,ab->tib", X0, B) % q
    V = np.einsum("tib,tjb->tij", XB, X0) % q
    v0 = np.stack([V[:, a, b] for a, b in pairs], axis=1) % mods
    if spans:
        code = _flat(digits % p, p)
        sidx = _span_lookup(p, n, r)[code]
    else:
        sidx = np.zeros(T, dtype=np.int64)
    # linear term of X1_i = E_ia in entry (u, w)
    gens = [(i, a) for i in range(n) for a in range(r) if kk[i] > jj[i]]
    D = np.zeros((T, len(gens), N), dtype=np.int64)
    for g, (i, a) in enumerate(gens):
        for idx, (u, w) in enumerate(pairs):
            d = 0
            if u == i:
                d = d + XB[:, w, a]
            if w == i:
                d = d + XB[:, u, a]
            D[:, g, idx] = p ** jj[i] * (d % mods[idx]) % mods[idx]
    if gens:
        _, group = np.unique(D.reshape(T, -1), axis=0, return_inverse=True)
        group = group.reshape(-1)
    else:
        group = np.zeros(T, dtype=np.int64)
    order = np.argsort(group, kind="stable")
    bounds = np.flatnonzero(np.diff(group[order])) + 1
    all_keys, all_reps = [], []
    for rows in np.split(order, bounds):
        hv = np.zeros((1, N), dtype=np.int64)
        hx = np.zeros((1, n * r), dtype=np.int64)
        for g, (i, a) in enumerate(gens):
            delta = D[rows[0], g]
            if not delta.any():
                continue
            m1 = p ** (kk[i] - jj[i])
            c = np.arange(m1, dtype=np.int64)
            nv = (hv[:, None, :] + c[None, :, None] * delta[None, None, :]) % mods
            nx = np.repeat(hx[:, None, :], m1, axis=1)
            nx[:, :, i * r + a] = c[None, :] * p ** jj[i]
            nv = nv.reshape(-1, N)
            nx = nx.reshape(-1, n * r)
            _, keep = np.unique(_flat(nv, mods), return_index=True)
            hv, hx = nv[keep], nx[keep]
        vals = (v0[rows][:, None, :] + hv[None, :, :]) % mods
        key = sidx[rows][:, None] * G + _flat(vals.reshape(-1, N), mods).reshape(len(rows), -1)
        rep = digits[rows][:, None, :] + hx[None, :, :]
        all_keys.append(key.reshape(-1))
        all_reps.append(rep.reshape(-1, n * r))
    key = np.concatenate(all_keys)
    keys, first = np.unique(key, return_index=True)
    reps = np.concatenate(all_reps)[first]
    table = np.zeros((S, G), dtype=bool)
    table[keys // G, keys % G] = True
    return BlockTable(table, keys, reps, max(kk), r)


# -- combination -------------------------------------------------------------

def _combine(state: np.ndarray, blk: np.ndarray, join: np.ndarray, shape) -> np.ndarray:
    S = state.shape[0]
    live_a = [s for s in range(S) if state[s].any()]
    live_b = [s for s in range(S) if blk[s].any()]
    fa = {s: np.fft.rfftn(state[s].reshape(shape).astype(float)) for s in live_a}
    fb = {s: np.fft.rfftn(blk[s].reshape(shape).astype(float)) for s in live_b}
    acc = {}
    for a in live_a:
        for b in live_b:
            t = int(join[a, b])
            prod = fa[a] * fb[b]
            acc[t] = acc[t] + prod if t in acc else prod
    out = np.zeros_like(state)
    for t, f in acc.items():
        vals = np.fft.irfftn(f, s=shape, axes=tuple(range(len(shape))))
        if np.abs(vals - np.rint(vals)).max() > 0.25:
            return _combine_exact(state, blk, join, shape)
        out[t] = (np.rint(vals) > 0).reshape(-1)
    return out


def _combine_exact(state, blk, join, shape):
    S = state.shape[0]
    out = np.zeros_like(state)
    for a in range(S):
        if not state[a].any():
            continue
        arr = state[a].reshape(shape)
        for b in range(S):
            pos = np.flatnonzero(blk[b])
            if not len(pos):
                continue
            t = int(join[a, b])
            acc = out[t].reshape(shape)
            for flat in pos:
                shift = np.unravel_index(flat, shape)
                acc |= np.roll(arr, shift, axis=tuple(range(len(shape))))
            out[t] = acc.reshape(-1)
    return out


@dataclass
class LocalResult:
    represented: bool
    primitive: bool | None
    witness: tuple | None          # n x m integer matrix, X G X^T ≡ target entrywise mod p^ks
    primitive_witness: tuple | None
    precision: tuple


def solve(blocks, basis, target, p: int, k, want_witness: bool = True,
          primitive: bool = True) -> LocalResult:
    """Decide X G X^T ≡ target entrywise (mod p^k), plainly and with X mod p of full rank.

    ``k`` is one exponent or a tuple with one exponent per upper-triangular
    entry (row major).  ``blocks`` are the Jordan blocks (full integer Gram,
    scale included) in the order of the rows of ``basis`` with
    ``basis G basis^T = diag(blocks)``.  With ``primitive=False`` column spans
    are not tracked (much smaller tables) and the primitive fields of the
    result are None.
    """
    n = len(target)
    N = n * (n + 1) // 2
    ks = tuple(k) if isinstance(k, (tuple, list)) else (k,) * N
    shape = tuple(p ** e for e in ks)
    G = math.prod(shape)
    if G * (_num_subspaces(p, n) if primitive else 1) > TABLE_CAP:
        raise ResourceLimit(f"local table too large (p={p}, precision {ks}, n={n})")
    if primitive:
        order, _, join, full = _subspaces(p, n)
    else:
        order, join, full = [()], np.zeros((1, 1), dtype=np.int64), None
    state = np.zeros((len(order), G), dtype=bool)
    state[0, 0] = True
    history = [state]
    tables = []
    for blk in blocks:
        bt = _block_table(tuple(map(tuple, blk)), n, p, ks, primitive)
        tables.append(bt)
        state = _combine(state, bt.table, join, shape)
        history.append(state)
    tv = 0
    for (i, j), m in zip(_upper_pairs(n), shape):
        tv = tv * m + target[i][j] % m
    plain = bool(state[:, tv].any())
    prim = bool(state[full, tv]) if primitive else None
    wit = pwit = None
    if want_witness and plain:
        t_plain = next(s for s in range(len(order)) if state[s, tv])
        wit = _reconstruct(history, tables, basis, t_plain, tv, n, p, join, shape)
        if prim:
            pwit = wit if t_plain == full else _reconstruct(
                history, tables, basis, full, tv, n, p, join, shape)
    return LocalResult(plain, prim, wit, pwit, ks)


def _reconstruct(history, tables, basis, span, value, n, p, join, shape):
    mods = np.array(shape, dtype=np.int64)[:, None]
    q = int(max(shape))
    G = int(np.prod(shape))
    pieces = []
    for b in range(len(tables) - 1, -1, -1):
        bt = tables[b]
        prev = history[b]
        tv = np.array(np.unravel_index(value, shape))
        chosen = None
        spans2 = bt.keys // G
        vals2 = bt.keys % G
        coords2 = np.array(np.unravel_index(vals2, shape))
        diff = np.ravel_multi_index(tuple((tv[:, None] - coords2) % mods), shape)
        for s1 in range(prev.shape[0]):
            ok = (join[s1, spans2] == span) & prev[s1, diff]
            hit = np.flatnonzero(ok)
            if len(hit):
                chosen = (s1, int(diff[hit[0]]), int(hit[0]))
                break
        assert chosen is not None, "inconsistent local tables"
        s1, value, ki = chosen
        span = s1
        d = [int(x) for x in bt.reps[ki]]
        pieces.append([d[i * bt.r:(i + 1) * bt.r] for i in range(n)])
    pieces.reverse()
    xj = [sum((piece[i] for piece in pieces), []) for i in range(n)]
    x = intmat.matmul(xj, basis)
    return tuple(tuple(v % q for v in row) for row in x)
