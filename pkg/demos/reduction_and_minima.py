"""Reduction, short vectors and successive minima."""
from qfkit import canonical_gram, lll, make_lattice, minkowski_reduce, short_vectors, successive_minima

L = make_lattice([[5, 7, 3], [7, 11, 5], [3, 5, 6]])
basis, reduced = lll(L)
print("LLL Gram:", reduced.gram)
print("Minkowski Gram:", minkowski_reduce(L)[0].gram)

prof = successive_minima(L)
print("successive minima:", prof.minima)

for v, q in short_vectors(L, 3):
    print("  short vector", v, "norm", q)

# canonical forms agree across equivalent bases, and separate different classes
print("L ~ its LLL form?", canonical_gram(L) == canonical_gram(reduced))
other = make_lattice([[2, 1, 1], [1, 3, 1], [1, 1, 4]])
print("L ~", other.gram, "?", canonical_gram(L) == canonical_gram(other))
