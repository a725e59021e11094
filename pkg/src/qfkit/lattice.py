"""Positive definite integral lattices given by exact Gram matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from numbers import Rational
from typing import Iterable, Sequence

from . import intmat
from .errors import (
    NotIntegral,
    NotIntegralAfterScaling,
    NotPositiveDefinite,
    NotSymmetric,
    LatticeError,
)

Gram = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Lattice:
    """A Z-lattice with Gram matrix ``gram``; ``Q(x) = x G x^T``.

    Use :func:`make_lattice` for validated construction.  The label is
    carried along for display only and ignored by equality and hashing.
    """

    gram: Gram
    label: str | None = field(default=None, compare=False)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def discriminant(self) -> int:
        return int(intmat.det(self.gram))

    @cached_property
    def scale(self) -> int:
        return reduce(gcd, (x for row in self.gram for x in row), 0)

    @cached_property
    def norm(self) -> int:
        diag = [self.gram[i][i] for i in range(self.rank)]
        return reduce(gcd, diag, 2 * self.scale)

    @property
    def is_normalized(self) -> bool:
        return self.rank > 0 and self.norm == 2

    def Q(self, v: Sequence[int]) -> int:
        return self.B(v, v)

    def B(self, u: Sequence[int], v: Sequence[int]) -> int:
        return sum(u[i] * sum(g * y for g, y in zip(row, v)) for i, row in enumerate(self.gram))

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.gram[i][i] for i in range(self.rank))

    def to_json(self) -> dict:
        out = {"gram": [list(r) for r in self.gram]}
        if self.label is not None:
            out["label"] = self.label
        return out

    def __repr__(self):
        return f"Lattice({[list(r) for r in self.gram]})"


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise NotIntegral(f"boolean entry {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, float):
        if x.is_integer():
            return int(x)
        raise NotIntegral(f"non-integer entry {x!r}")
    if isinstance(x, (Rational, str)):
        try:
            f = Fraction(x)
        except ValueError as exc:
            raise NotIntegral(f"unparseable entry {x!r}") from exc
        if f.denominator != 1:
            raise NotIntegral(f"non-integer entry {x!r}")
        return int(f)
    try:
        return _as_int(int(x)) if int(x) == x else _as_int(float(x))
    except (TypeError, ValueError) as exc:
        raise NotIntegral(f"non-integer entry {x!r}") from exc


def make_lattice(gram: Iterable[Iterable], label: str | None = None) -> Lattice:
    """Validate ``gram`` and return a :class:`Lattice`.

    Raises NotIntegral, NotSymmetric or NotPositiveDefinite.
    """
    rows = [list(r) for r in gram]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotSymmetric("Gram matrix is not square")
    g = tuple(tuple(_as_int(x) for x in r) for r in rows)
    for i in range(n):
        for j in range(i):
            if g[i][j] != g[j][i]:
                raise NotSymmetric(f"entry ({i},{j}) differs from ({j},{i})")
    for k, minor in enumerate(intmat.leading_minors(g), start=1):
        if minor <= 0:
            raise NotPositiveDefinite(f"leading minor of size {k} is {minor}")
    return Lattice(g, label)


def diagonal_lattice(*entries: int) -> Lattice:
    n = len(entries)
    return make_lattice([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


def discriminant(L: Lattice) -> int:
    return L.discriminant


def scale_ideal(L: Lattice) -> int:
    """Positive generator of s(L): the gcd of all Gram entries."""
    return L.scale


def norm_ideal(L: Lattice) -> int:
    """Positive generator of n(L): gcd of the diagonal and twice the scale."""
    return L.norm


def rescale(L: Lattice, r) -> Lattice:
    """Multiply the quadratic map by the positive rational ``r``."""
    r = Fraction(r)
    if r <= 0:
        raise ValueError("scaling factor must be positive")
    out = []
    for row in L.gram:
        new = []
        for x in row:
            y = r * x
            if y.denominator != 1:
                raise NotIntegralAfterScaling(f"{x} * {r} is not an integer")
            new.append(int(y))
        out.append(tuple(new))
    return Lattice(tuple(out), L.label)


def normalize(L: Lattice) -> tuple[Lattice, Fraction]:
    """Return the similar lattice with norm ideal exactly 2Z and the factor used."""
    if L.rank == 0:
        raise LatticeError("the zero lattice has no norm ideal")
    r = Fraction(2, L.norm)
    return rescale(L, r), r


def orthogonal_sum(L1: Lattice, L2: Lattice) -> Lattice:
    n1, n2 = L1.rank, L2.rank
    rows = [tuple(L1.gram[i]) + (0,) * n2 for i in range(n1)]
    rows += [(0,) * n1 + tuple(L2.gram[i]) for i in range(n2)]
    return Lattice(tuple(rows))


@dataclass(frozen=True)
class SublatticeEmbedding:
    """Sublattice M of ``ambient`` whose basis rows are ``coords`` (n x m)."""

    coords: tuple[tuple[int, ...], ...]
    ambient: Lattice

    def __post_init__(self):
        coords = tuple(tuple(int(x) for x in row) for row in self.coords)
        object.__setattr__(self, "coords", coords)
        m = self.ambient.rank
        if any(len(row) != m for row in coords):
            raise LatticeError("coordinate rows must have the ambient rank as length")
        if intmat.rank(coords) != len(coords):
            raise LatticeError("coordinate matrix must have full row rank")

    @property
    def rank(self) -> int:
        return len(self.coords)

    @cached_property
    def sub_gram(self) -> Lattice:
        return Lattice(intmat.as_tuple(intmat.congruent(self.coords, self.ambient.gram)))

    def same_sublattice(self, other: "SublatticeEmbedding") -> bool:
        return self.ambient == other.ambient and intmat.same_row_lattice(
            self.coords, other.coords)


def embed(ambient: Lattice, coords) -> SublatticeEmbedding:
    return SublatticeEmbedding(tuple(tuple(r) for r in coords), ambient)


def is_primitive_sublattice(E: SublatticeEmbedding) -> bool:
    """True iff L/M is torsion free, i.e. every invariant factor of coords is 1."""
    return intmat.is_primitive_rows(E.coords)


def saturate(E: SublatticeEmbedding) -> SublatticeEmbedding:
    """Return QM ∩ L.  A primitive input is returned unchanged."""
    if is_primitive_sublattice(E):
        return E
    m = E.ambient.rank
    # vectors orthogonal (dot product) to the row space, then their annihilator
    perp = intmat.left_kernel(intmat.transpose(E.coords))
    if not perp:
        return SublatticeEmbedding(tuple(map(tuple, intmat.identity(m))), E.ambient)
    sat = intmat.left_kernel(intmat.transpose(perp))
    return SublatticeEmbedding(tuple(map(tuple, sat)), E.ambient)


def orthogonal_complement(E: SublatticeEmbedding) -> tuple[SublatticeEmbedding, int | None]:
    """M^⊥ in L with its induced Gram, and the positive generator of n(M^⊥)."""
    L = E.ambient
    if E.rank == 0:
        comp = tuple(map(tuple, intmat.identity(L.rank)))
    else:
        pairing = intmat.matmul(L.gram, intmat.transpose(E.coords))
        comp = tuple(map(tuple, intmat.left_kernel(pairing)))
    out = SublatticeEmbedding(comp, L)
    if out.rank == 0:
        return out, None
    return out, out.sub_gram.norm


def k_section(L: Lattice, k: int) -> SublatticeEmbedding:
    """Span of the first k vectors of a Minkowski reduced basis."""
    from .reduction import minkowski_reduce

    if not 1 <= k <= L.rank:
        raise ValueError(f"k must lie in 1..{L.rank}")
    _, change = minkowski_reduce(L)
    return SublatticeEmbedding(tuple(tuple(r) for r in change[:k]), L)
