"""Bounded regularity audits and the minima inequalities."""
from qfkit import Lattice, audit_regularity, check_minima_inequalities, diagonal_lattice, embed

rep = audit_regularity(diagonal_lattice(1, 1, 1), 1, 50)
print("sums of three squares up to 50:", rep.verdict.value)

rep = audit_regularity(diagonal_lattice(1, 11), 1, 10)
print("x^2 + 11y^2 up to 10:", rep.verdict.value, rep.counterexample["candidate"])

rep = audit_regularity(diagonal_lattice(1, 1, 1, 1), 2, 6, strict=True)
print("I4 strictly 2-regular up to 6:", rep.verdict.value)

E = embed(diagonal_lattice(1, 1, 3), [[1, 0, 0], [0, 1, 0]])
for c in check_minima_inequalities(E, Lattice(((3,),))).checks:
    print(f"  {c.name}: applicable={c.applicable} holds={c.holds} {c.lhs} >= {c.rhs}")
