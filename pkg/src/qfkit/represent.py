"""Representations of lattices by lattices: local, genus and global tests."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from . import intmat
from ._localrep import ord_p, pair_precisions, solve, table_size
from .errors import BoundTooLarge, PrecisionUnstable, ResourceLimit
from .lattice import Lattice
from .padic import jordan_decompose, legendre, prime_factors
from .reduction import minkowski_reduce, short_vectors

MAX_PRECISION = 40
DEFAULT_EFFORT = 10 ** 7
# odd p: tables larger than this go through the unimodular split instead
SPLIT_ABOVE = 1 << 16


@dataclass(frozen=True)
class RepresentationWitness:
    """T with T G_L T^T = G_M; ``primitive`` records whether T extends to a unimodular matrix."""

    T: tuple
    target: Lattice
    ambient: Lattice
    primitive: bool

    def to_json(self) -> dict:
        return {"T": [list(r) for r in self.T], "primitive": self.primitive}


def make_witness(T, target: Lattice, ambient: Lattice) -> RepresentationWitness:
    T = tuple(tuple(int(x) for x in row) for row in T)
    return RepresentationWitness(T, target, ambient, intmat.is_primitive_rows(T))


def verify_witness(W: RepresentationWitness) -> bool:
    T = [list(r) for r in W.T]
    if len(T) != W.target.rank or any(len(r) != W.ambient.rank for r in T):
        return False
    if intmat.as_tuple(intmat.congruent(T, W.ambient.gram)) != W.target.gram:
        return False
    return W.primitive == intmat.is_primitive_rows(T)


# -- local ---------------------------------------------------------------------

@dataclass(frozen=True)
class LocalVerdict:
    """``precision`` is the largest modulus exponent searched (None when the
    unimodular rule decided); witnesses satisfy X G_L X^T ≡ G_M entrywise
    mod p^witness_precision."""

    p: int
    represented: bool
    primitively_represented: bool | None
    precision: int | None
    witness: tuple | None = None
    primitive_witness: tuple | None = None
    witness_precision: int | None = None
    # witnesses in the Jordan frame of M, kept for the lifting recheck
    frame: tuple | None = field(default=None, repr=False, compare=False)

    def to_json(self) -> dict:
        out = {"p": self.p, "represented": self.represented,
               "primitively_represented": self.primitively_represented,
               "precision": self.precision}
        if self.witness_precision is not None:
            out["witness_precision"] = self.witness_precision
        if self.witness is not None:
            out["witness"] = [list(r) for r in self.witness]
        if self.primitive_witness is not None:
            out["primitive_witness"] = [list(r) for r in self.primitive_witness]
        return out


def _unimodular_verdict(M: Lattice, L: Lattice, p: int) -> LocalVerdict:
    # p odd and both lattices unimodular at p
    if M.rank < L.rank:
        return LocalVerdict(p, True, True, None)
    ok = M.rank == L.rank and legendre(M.discriminant * L.discriminant, p) == 1
    return LocalVerdict(p, ok, ok, None)


def _inverse_mod(P, q: int) -> list[list[int]]:
    out = []
    for row in intmat.inverse(P):
        out.append([x.numerator * pow(x.denominator, -1, q) % q for x in row])
    return out


def _jordan_target(M: Lattice, p: int, extra: int):
    jm = jordan_decompose(M, p)
    scales = [c.scale for c in jm.components for _ in range(c.rank)]
    sizes = [len(b) for c in jm.components for b in c.blocks]
    return jm, pair_precisions(scales, p, extra, sizes)


def _oracle(M: Lattice, L: Lattice, p: int, extra: int, primitive: bool,
            split: bool = True) -> LocalVerdict:
    """Finite search on the Jordan form of M with per-entry precision (``extra`` digits added).

    At odd p a large table is avoided by splitting off the unimodular part of
    M, or scaling M down by p when it has none (``split=False`` forces the table).
    """
    jm, ks = _jordan_target(M, p, extra)
    if split and p != 2 and table_size(p, ks, primitive) > SPLIT_ABOVE:
        try:
            return _split_unimodular(M, L, p, max(ks), primitive)
        except ResourceLimit:
            pass
    js = jordan_decompose(L, p)
    try:
        res = solve(js.full_blocks(), js.basis, jm.reassembled(), p, ks, primitive=primitive)
    except ResourceLimit:
        if p == 2:
            raise
        return _split_unimodular(M, L, p, max(ks), primitive)
    # back from the Jordan basis of M: X = P^{-1} X', exact mod p^min(ks)
    w = min(ks)
    q = p ** w
    Pinv = _inverse_mod(jm.basis, q)

    def back(X):
        if X is None:
            return None
        return tuple(tuple(v % q for v in row) for row in intmat.matmul(Pinv, [list(r) for r in X]))

    return LocalVerdict(p, res.represented, res.primitive, max(ks), back(res.witness),
                        back(res.primitive_witness), w if res.witness is not None else None,
                        (res.witness, res.primitive_witness))


def _padic(x, p: int, q: int):
    x = Fraction(x)
    if x and ord_p(x, p) < 0:
        return None
    return x.numerator * pow(x.denominator, -1, q) % q


def _lifts(X, G, blocks, p: int, ks, primitive: bool) -> bool:
    """Lift X (a solution for the Jordan-form target at lower precision) and check it mod p^ks.

    Rows are orthogonalized block by block in order of increasing scale, then
    each block is Newton-corrected inside its own span; the final congruences
    are checked exactly, so a wrong lift can only make this return False.
    """
    n = len(X)
    q = p ** (2 * max(ks) + 8)
    X = [[v % q for v in r] for r in X]
    starts, off = [], 0
    for b in blocks:
        starts.append(range(off, off + len(b)))
        off += len(b)

    def gram(rows):
        return intmat.congruent([X[i] for i in rows], G)

    for a, rows in enumerate(starts):
        for _ in range(16):
            cur = gram(rows)
            E = [[cur[i][j] - blocks[a][i][j] for j in range(len(rows))] for i in range(len(rows))]
            if all(e % q == 0 for r in E for e in r):
                break
            inv = intmat.inverse(cur)
            Y = intmat.matmul(intmat.matmul(E, inv), [X[i] for i in rows])
            for i, row in zip(rows, Y):
                step = [_padic(Fraction(y) / 2, p, q) for y in row]
                if None in step:
                    return False
                X[i] = [(u - v) % q for u, v in zip(X[i], step)]
        inv = intmat.inverse(gram(rows))
        for b in starts[a + 1:]:
            for j in b:
                pair = [sum(x * y for x, y in zip(X[i], intmat.matmul([X[j]], G)[0])) for i in rows]
                lam = [_padic(v, p, q) for v in intmat.matmul([pair], inv)[0]]
                if None in lam:
                    return False
                for i, l in zip(rows, lam):
                    X[j] = [(u - l * v) % q for u, v in zip(X[j], X[i])]
    target = [[0] * n for _ in range(n)]
    for rows, blk in zip(starts, blocks):
        for i, r in zip(rows, blk):
            for j, v in zip(rows, r):
                target[i][j] = v
    got = intmat.congruent(X, G)
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    if any((got[i][j] - target[i][j]) % p ** e for (i, j), e in zip(pairs, ks)):
        return False
    return not primitive or intmat.rank_mod_p(X, p) == n


def _confirm_by_lifting(v: LocalVerdict, M: Lattice, L: Lattice, p: int, extra: int,
                        primitive: bool) -> bool:
    """Recheck v at precision ``extra`` without a table.

    Positive answers are confirmed by lifting the stored witness and checking
    the congruences exactly; a negative answer carries over because any
    solution at the higher precision reduces to one at the lower.
    """
    jm, ks = _jordan_target(M, p, extra)
    blocks = jm.full_blocks()
    plain, prim = v.frame or (None, None)
    if v.represented and (plain is None or not _lifts(plain, L.gram, blocks, p, ks, False)):
        return False
    if primitive and v.primitively_represented and (
            prim is None or not _lifts(prim, L.gram, blocks, p, ks, True)):
        return False
    return True


def _diag(entries) -> Lattice:
    n = len(entries)
    return Lattice(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))


def _split_unimodular(M: Lattice, L: Lattice, p: int, k: int, primitive: bool) -> LocalVerdict:
    """Odd p: peel the unimodular part M0 of M off L and recurse on the rest.

    A representation of the unimodular M0 splits L = M0 ⊥ L'', and by
    cancellation L'' is fixed up to isometry, so M = M0 ⊥ M' is (primitively)
    represented by L iff M0 is and M' is (primitively) represented by L''.
    No witness is produced on this route.
    """
    mc = jordan_decompose(M, p).components
    lc = jordan_decompose(L, p).components
    if mc[0].scale != 0:
        return _scale_down(mc, lc, p, k, primitive)
    m0 = mc[0]
    l0 = lc[0] if lc[0].scale == 0 else None
    r0 = l0.rank if l0 else 0
    d0 = int(intmat.det(l0.gram)) if l0 else 1
    dm = int(intmat.det(m0.gram))
    no = LocalVerdict(p, False, False if primitive else None, k)
    if m0.rank > r0 or (m0.rank == r0 and legendre(d0 * dm, p) != 1):
        return no
    rest_l = [1] * (r0 - m0.rank - 1) + [d0 * dm] if r0 > m0.rank else []
    for c in lc:
        if c.scale:
            rest_l += [p ** c.scale * c.gram[i][i] for i in range(c.rank)]
    rest_m = [p ** c.scale * c.gram[i][i] for c in mc[1:] for i in range(c.rank)]
    if not rest_m:
        return LocalVerdict(p, True, True if primitive else None, k)
    if len(rest_m) == 1 and all(x % p for x in rest_l):
        plain, prim = _unary_by_unimodular(rest_m[0], rest_l, p)
        return LocalVerdict(p, plain, prim if primitive else None, k)
    sub = local_represents(_diag(rest_m), _diag(rest_l), p, primitive, oracle=True)
    return LocalVerdict(p, sub.represented, sub.primitively_represented, k)


def _witt_index(units: list, p: int) -> int:
    """Dimension of a maximal totally isotropic subspace of the residue form of ``units``."""
    k = len(units)
    if k % 2:
        return k // 2
    d = (-1) ** (k // 2)
    for u in units:
        d *= u
    return k // 2 if legendre(d, p) == 1 else k // 2 - 1


def _scale_down(mc, lc, p: int, k: int, primitive: bool) -> LocalVerdict:
    """Odd p, every Jordan scale of M at least 1: recurse on M/p.

    If L itself is p^s times a lattice, divide both sides by p^s. Otherwise
    write L = L0 ⊥ L1 with L0 unimodular. The L0-part of a solution X is
    totally isotropic mod p, hence lies (up to O(L0)) in a fixed maximal
    isotropic W, and the preimage of W scaled by 1/p is H^ν ⊥ pU' ⊥ L1/p.
    A primitive X needs an isotropic residue subspace of dimension rank M,
    which settles the case L = L0 outright; with both L0 and L1 present the
    primitive question is left to the table.
    """
    no = LocalVerdict(p, False, False if primitive else None, k)
    s, t = lc[0].scale, mc[0].scale
    if s:
        if t < s:
            return no
        M2 = [p ** (c.scale - s) * c.gram[i][i] for c in mc for i in range(c.rank)]
        L2 = [p ** (c.scale - s) * c.gram[i][i] for c in lc for i in range(c.rank)]
        sub = local_represents(_diag(M2), _diag(L2), p, primitive, oracle=True)
        return LocalVerdict(p, sub.represented, sub.primitively_represented, k)
    n = sum(c.rank for c in mc)
    units = [lc[0].gram[i][i] for i in range(lc[0].rank)]
    nu = _witt_index(units, p)
    prim = None
    if primitive:
        if len(lc) > 1:
            raise ResourceLimit(f"local table too large at p={p} for a primitive target of positive scale")
        prim = nu >= n
        if prim:
            return LocalVerdict(p, True, True, k)
    d = (-1) ** nu
    for u in units:
        d *= u
    aniso = {0: [], 1: [d], 2: [1, d]}[len(units) - 2 * nu]
    L2 = [1, -1] * nu + [p * x for x in aniso]
    L2 += [p ** (c.scale - 1) * c.gram[i][i] for c in lc[1:] for i in range(c.rank)]
    M2 = [p ** (c.scale - 1) * c.gram[i][i] for c in mc for i in range(c.rank)]
    sub = local_represents(_diag(M2), _diag(L2), p, False, oracle=True)
    return LocalVerdict(p, sub.represented, prim, k)


def _unary_by_unimodular(a: int, units: list, p: int) -> tuple[bool, bool]:
    """Odd p, p | a: is a = Q(x) over Z_p for the unimodular diagonal form ``units``?

    Primitive x needs an isotropic residue; otherwise Q(p^f y) = p^2f Q(y)
    only reaches even valuations.
    """
    m = len(units)
    e = ord_p(a, p)
    u = a // p ** e
    if m >= 3 or (m == 2 and legendre(-units[0] * units[1], p) == 1):
        return True, True
    if m == 2:
        return e % 2 == 0, False
    if m == 1:
        return e % 2 == 0 and legendre(units[0] * u, p) == 1, False
    return False, False


def _key(v: LocalVerdict):
    return v.represented, v.primitively_represented


def local_represents(M: Lattice, L: Lattice, p: int, primitive: bool = False,
                     stability_check: bool = False, oracle: bool = False,
                     split: bool = True) -> LocalVerdict:
    """Decide whether M_p is represented (and, with ``primitive``, primitively) by L_p.

    Primes not dividing 2 d(L) d(M) use the unimodular rule unless ``oracle``
    forces the finite search, and ``split=False`` keeps odd primes on the
    table route.  ``stability_check`` recomputes with two more digits in
    every entry and escalates while the answers disagree; when that table is
    too large the answer is confirmed by lifting its witness instead.
    """
    if M.rank > L.rank:
        return LocalVerdict(p, False, False if primitive else None, None)
    if not oracle and (2 * M.discriminant * L.discriminant) % p:
        v = _unimodular_verdict(M, L, p)
        return v if primitive else LocalVerdict(p, v.represented, None, None)
    extra = 0
    v = _oracle(M, L, p, extra, primitive, split)
    if not stability_check:
        return v
    while True:
        try:
            w = _oracle(M, L, p, extra + 2, primitive, split)
        except ResourceLimit:
            if _confirm_by_lifting(v, M, L, p, extra + 2, primitive):
                return v
            raise
        if _key(w) == _key(v):
            return v
        extra += 2
        if w.precision + 2 > MAX_PRECISION:
            raise PrecisionUnstable(f"verdict at p={p} did not stabilize below precision {MAX_PRECISION}")
        v = w


def relevant_primes(M: Lattice, L: Lattice) -> list[int]:
    return prime_factors(2 * M.discriminant * L.discriminant)


def genus_represents(M: Lattice, L: Lattice, primitive: bool = False,
                     stability_check: bool = False) -> tuple[bool, dict[int, LocalVerdict]]:
    """Representation by the genus of L: every completion, including the real one."""
    if M.rank > L.rank:
        return False, {}
    per = {}
    ok = True
    for p in relevant_primes(M, L):
        v = local_represents(M, L, p, primitive, stability_check)
        per[p] = v
        ok = ok and (v.primitively_represented if primitive else v.represented)
    return ok, per


# -- global --------------------------------------------------------------------

class Status(enum.Enum):
    FOUND = "Found"
    NOT_FOUND = "NotFound"
    EXHAUSTED = "Exhausted"


@dataclass
class GlobalResult:
    status: Status
    witness: RepresentationWitness | None = None
    nodes: int = 0
    detail: str = ""

    def to_json(self) -> dict:
        out = {"verdict": self.status.value, "nodes": self.nodes}
        out["witness"] = self.witness.to_json() if self.witness else None
        if self.detail:
            out["detail"] = self.detail
        return out


def global_represents(M: Lattice, L: Lattice, primitive: bool = False,
                      effort: int = DEFAULT_EFFORT) -> GlobalResult:
    """Search for T with T G_L T^T = G_M by backtracking over short vectors of L."""
    n = M.rank
    if n > L.rank:
        return GlobalResult(Status.NOT_FOUND)
    red, P = minkowski_reduce(M)
    target = red.gram
    diag = [target[i][i] for i in range(n)]
    try:
        pool = short_vectors(L, max(diag))
    except BoundTooLarge as exc:
        return GlobalResult(Status.EXHAUSTED, detail=str(exc))
    by_value: dict[int, list] = {}
    for v, q in pool:
        by_value.setdefault(q, []).append(v)
    cands = []
    for i, d in enumerate(diag):
        vs = by_value.get(d, [])
        if i > 0:
            vs = [w for v in vs for w in (v, tuple(-x for x in v))]
            vs.sort()
        cands.append([(v, intmat.matmul([v], L.gram)[0]) for v in vs])
    nodes = 0
    chosen: list = []

    def rec(i):
        nonlocal nodes
        if i == n:
            return True
        for v, vg in cands[i]:
            nodes += 1
            if nodes > effort:
                raise _Stop
            if any(sum(a * b for a, b in zip(vg, u)) != target[i][j]
                   for j, (u, _) in enumerate(chosen)):
                continue
            rows = [u for u, _ in chosen] + [v]
            if primitive and not intmat.is_primitive_rows(rows):
                continue
            chosen.append((v, vg))
            if rec(i + 1):
                return True
            chosen.pop()
        return False

    try:
        found = rec(0)
    except _Stop:
        return GlobalResult(Status.EXHAUSTED, nodes=nodes, detail=f"effort bound {effort} reached")
    if not found:
        return GlobalResult(Status.NOT_FOUND, nodes=nodes)
    # the reduced target is P G_M P^T, so T = P^{-1} T'
    Tred = [list(u) for u, _ in chosen]
    Pinv = [[int(x) for x in row] for row in intmat.inverse(P)]
    T = intmat.matmul(Pinv, Tred)
    W = make_witness(T, M, L)
    assert verify_witness(W)
    return GlobalResult(Status.FOUND, W, nodes)


class _Stop(Exception):
    pass
