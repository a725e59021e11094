"""Local invariants: Jordan splittings, Hilbert symbols, anisotropy."""
from fractions import Fraction

from qfkit import (INF, characteristic_primes, diagonal_lattice, hasse_invariant, hilbert_symbol,
                   is_anisotropic_lattice, jordan_decompose, make_lattice, primitive_norm_gap)

L = diagonal_lattice(1, 2, 12)
for p in (2, 3):
    comps = jordan_decompose(L, p).components
    print(f"Jordan at {p}:", [(c.scale, c.rank) for c in comps])

a, b = Fraction(3, 5), -7
places = [INF, 2, 3, 5, 7]
print("(3/5, -7) at", places, "->", [hilbert_symbol(a, b, v) for v in places])
print("Hasse invariant of <1,1,1> at 2:", hasse_invariant([1, 1, 1], 2))

A2 = make_lattice([[2, 1], [1, 2]])
print("A2 anisotropic at 2?", is_anisotropic_lattice(A2, 2))
print("primitive norm gap of A2 at 2:", primitive_norm_gap(A2, 2))

print("characteristic primes of <1,1,1,1,1>:", characteristic_primes([1, 1, 1, 1, 1]).primes)
