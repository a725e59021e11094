"""Local, genus and global representation tests.

<3> is represented by x^2 + 11y^2 everywhere locally but not globally.
"""
from qfkit import diagonal_lattice, genus_represents, global_represents, local_represents, verify_witness

L, M = diagonal_lattice(1, 11), diagonal_lattice(3)

for p in (2, 3, 11):
    v = local_represents(M, L, p, primitive=True)
    print(f"at {p}: represented={v.represented} primitively={v.primitively_represented}")

ok, per = genus_represents(M, L)
print("genus represents <3>:", ok)
print("globally:", global_represents(M, L).status.name)

hit = global_represents(diagonal_lattice(12), L)
print("<12> globally:", hit.status.name, hit.witness.T, verify_witness(hit.witness))
