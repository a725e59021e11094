"""Watson's transformation and the drive towards a full norm image."""
from qfkit import diagonal_lattice, drive_to_full_norm, embed, lambda_normalized, transform_sublattice, watson_lambda

L = diagonal_lattice(2, 6)
E = watson_lambda(L, 6)
print("Lambda_6 of <2,6>: basis", E.coords, "Gram", E.sub_gram.gram)

new, r, step = lambda_normalized(L, 3)
print("normalized step: factor", r, "Gram", new.gram)

res = drive_to_full_norm(diagonal_lattice(2, 2, 18, 18), 3)
print("drive at 3:", [str(s.r) for s in res.sequence.steps], "->", res.lattice.gram)

# a primitive sublattice is carried along
img = transform_sublattice(embed(L, [[1, 0]]), 3)
print("image of e1:", img.coords, "norm", img.sub_gram.gram)
