"""Building lattices, sublattices and orthogonal complements."""
from qfkit import (diagonal_lattice, embed, is_primitive_sublattice, make_lattice, normalize,
                   orthogonal_complement, orthogonal_sum, saturate)

A2 = make_lattice([[2, -1], [-1, 2]], label="A2")
print("A2:", A2.gram, "discriminant", A2.discriminant)

L = orthogonal_sum(A2, diagonal_lattice(6))
print("A2 + <6>:", L.gram)

# a rescaled copy normalizes back to norm ideal 2Z
M, r = normalize(make_lattice([[6, 3], [3, 6]]))
print("normalized:", M.gram, "by factor", r)

E = embed(L, [[2, 0, 0]])
print("2*e1 primitive?", is_primitive_sublattice(E))
print("saturation:", saturate(E).coords)
perp, _ = orthogonal_complement(embed(L, [[1, 0, 0]]))
print("complement of e1:", perp.coords, "with Gram", perp.sub_gram.gram)
