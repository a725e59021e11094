"""A small bundled corpus of lattices used by demos and property checks.

Entries map a short name to ``(lattice, max_n)``: the audits over this corpus
run for n up to ``max_n``.
"""
from .lattice import Lattice, diagonal_lattice, make_lattice, rescale

D4 = make_lattice([[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]], "D4")
A2 = make_lattice([[2, -1], [-1, 2]], "A2")
A3 = make_lattice([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], "A3")


def _named(L: Lattice, name: str) -> Lattice:
    return Lattice(L.gram, name)


CORPUS: dict[str, tuple[Lattice, int]] = {
    "I3": (_named(diagonal_lattice(1, 1, 1), "I3"), 2),
    "I4": (_named(diagonal_lattice(1, 1, 1, 1), "I4"), 2),
    "I5": (_named(diagonal_lattice(1, 1, 1, 1, 1), "I5"), 2),
    "<1,1,2>": (_named(diagonal_lattice(1, 1, 2), "<1,1,2>"), 2),
    "<1,1,3>": (_named(diagonal_lattice(1, 1, 3), "<1,1,3>"), 2),
    "<1,11>": (_named(diagonal_lattice(1, 11), "<1,11>"), 1),
    "A2": (A2, 1),
    "A3": (A3, 2),
    "D4": (D4, 2),
    "2I3": (_named(rescale(diagonal_lattice(1, 1, 1), 2), "2I3"), 2),
    "2I4": (_named(rescale(diagonal_lattice(1, 1, 1, 1), 2), "2I4"), 2),
    "2<1,1,3>": (_named(rescale(diagonal_lattice(1, 1, 3), 2), "2<1,1,3>"), 2),
}


def corpus() -> dict[str, tuple[Lattice, int]]:
    return dict(CORPUS)


def normalized_corpus() -> dict[str, Lattice]:
    """The corpus members whose norm ideal is 2Z."""
    return {k: L for k, (L, _) in CORPUS.items() if L.is_normalized}
