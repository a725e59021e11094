from fractions import Fraction

import numpy as np
import pytest

from oracles import (lambda_bruteforce, random_lattice, random_unimodular,
                     row_lattice_membership, seeded)
from qfkit import intmat
from qfkit.errors import CapExceeded, HypothesisUnmet, NotNormalized, UnsupportedModulus
from qfkit.lattice import (Lattice, SublatticeEmbedding, diagonal_lattice, is_primitive_sublattice,
                           normalize, orthogonal_sum, rescale)
from qfkit.padic import is_local_square, jordan_decompose, norm_image_full, prime_factors
from qfkit.reduction import canonical_gram, successive_minima
from qfkit.watson import (drive_to_full_norm, lambda_normalized, lemma_hypothesis_holds,
                          transform_sublattice, watson_lambda)


def gram_of(E):
    return [list(r) for r in E.sub_gram.gram]


def same_class(L, diag):
    return canonical_gram(L) == canonical_gram(diagonal_lattice(*diag))


def index_in(coords):
    return abs(intmat.det([list(r) for r in coords]))


def watson_corpus(seed, count):
    rng = seeded(seed)
    out = []
    while len(out) < count:
        L = random_lattice(rng, rng.randint(1, 5), 20, normalized=True)
        out.append((L, rng.choice([2, 3, 5])))
    return out


def test_lambda_examples():
    E = watson_lambda(diagonal_lattice(2, 2), 4)
    assert index_in(E.coords) == 2
    assert intmat.same_row_lattice(E.coords, [[1, 1], [1, -1]])
    assert same_class(E.sub_gram, (4, 4))

    E = watson_lambda(diagonal_lattice(2, 6), 6)
    assert intmat.same_row_lattice(E.coords, [[3, 0], [0, 1]])
    assert gram_of(E) == [[18, 0], [0, 6]]

    E = watson_lambda(diagonal_lattice(6, 6), 6)
    assert index_in(E.coords) == 1


def test_lambda_rejects_bad_input():
    with pytest.raises(UnsupportedModulus):
        watson_lambda(diagonal_lattice(2, 2), 8)
    with pytest.raises(UnsupportedModulus):
        watson_lambda(diagonal_lattice(2, 2), 18)
    with pytest.raises(NotNormalized):
        watson_lambda(diagonal_lattice(1, 2), 6)


def test_lambda_normalized_examples():
    new, r, _ = lambda_normalized(diagonal_lattice(2, 6), 3)
    assert r == Fraction(1, 3) and same_class(new, (2, 6))
    new, r, _ = lambda_normalized(diagonal_lattice(6, 6), 3)
    assert r == Fraction(1, 3) and same_class(new, (2, 2))
    new, r, _ = lambda_normalized(diagonal_lattice(2, 2), 2)
    assert r == Fraction(1, 2) and same_class(new, (2, 2))


def test_lambda_matches_coset_definition():
    for L, p in watson_corpus(11, 60):
        E = watson_lambda(L, 2 * p)
        X, ok = lambda_bruteforce(L.gram, p)
        member = row_lattice_membership(X, E.coords)
        assert np.array_equal(ok, member), (L.gram, p)


def test_sandwich_and_minima_distortion():
    for L, p in watson_corpus(12, 60):
        E = watson_lambda(L, 2 * p)
        n = L.rank
        assert intmat.solve_in_basis([[2 * p * int(i == j) for j in range(n)] for i in range(n)],
                                     E.coords) is not None
        mu = successive_minima(L).minima
        nu = successive_minima(E.sub_gram).minima
        for a, b in zip(mu, nu):
            assert a <= b <= 4 * p * p * a


def test_normalized_step_factor_and_discriminant():
    for L, p in watson_corpus(13, 60):
        new, r, step = lambda_normalized(L, p)
        assert r in (Fraction(1, p), Fraction(1, p * p))
        assert new.is_normalized
        assert abs(new.discriminant) <= (2 * p) ** (2 * L.rank) * L.discriminant


def test_even_scale_lambda4_is_the_4z_part():
    rng = seeded(14)
    for _ in range(30):
        n = rng.randint(1, 3)
        L = random_lattice(rng, n, 10)
        L = Lattice(tuple(tuple(2 * x for x in row) for row in L.gram))
        E = watson_lambda(L, 4)
        X = np.indices((7,) * n).reshape(n, -1).T - 3
        member = row_lattice_membership(X, E.coords)
        q = np.einsum("ti,ij,tj->t", X, np.array(L.gram), X)
        assert np.array_equal(member, q % 4 == 0)


def random_primitive(rng, L, k):
    U = random_unimodular(L.rank, rng)
    return SublatticeEmbedding(tuple(map(tuple, U[:k])), L)


def in_l_coords(E, step_coords):
    return intmat.matmul([list(r) for r in E.coords], [list(r) for r in step_coords])


def hypothesis_corpus(seed, count):
    rng = seeded(seed)
    out = []
    while len(out) < count:
        L = random_lattice(rng, rng.randint(2, 5), 20, normalized=True)
        p = rng.choice([2, 3, 5])
        if lemma_hypothesis_holds(L, p):
            out.append((rng, L, p))
    return out


def test_transform_is_functorial_and_keeps_primitivity():
    for rng, L, p in hypothesis_corpus(15, 40):
        E = random_primitive(rng, L, rng.randint(1, L.rank))
        U = random_unimodular(L.rank, rng)
        Lu = Lattice(intmat.as_tuple(intmat.congruent(U, L.gram)))
        Uinv = [[int(x) for x in row] for row in intmat.inverse(U)]
        Eu = SublatticeEmbedding(intmat.as_tuple(intmat.matmul([list(r) for r in E.coords], Uinv)), Lu)
        img = transform_sublattice(E, p)
        img_u = transform_sublattice(Eu, p)
        assert is_primitive_sublattice(img) and is_primitive_sublattice(img_u)
        a = in_l_coords(img, lambda_normalized(L, p)[2].coords)
        b = intmat.matmul(in_l_coords(img_u, lambda_normalized(Lu, p)[2].coords), U)
        assert intmat.same_row_lattice(a, b)
        # the image is Λ of M's own Gram, carried into L
        own = watson_lambda(E.sub_gram, 2 * p)
        assert intmat.same_row_lattice(a, intmat.matmul([list(r) for r in own.coords],
                                                        [list(r) for r in E.coords]))


def test_transform_examples():
    L = diagonal_lattice(2, 6)
    img = transform_sublattice(SublatticeEmbedding(((1, 0),), L), 3)
    assert img.sub_gram.gram == ((6,),)
    assert is_primitive_sublattice(img)
    whole = transform_sublattice(SublatticeEmbedding(((1, 0), (0, 1)), L), 3)
    assert index_in(whole.coords) == 1
    doubled = transform_sublattice(SublatticeEmbedding(((2, 0),), L), 3)
    assert doubled.sub_gram.gram == ((24,),)
    with pytest.raises(HypothesisUnmet):
        transform_sublattice(SublatticeEmbedding(((1, 0, 0, 0),), diagonal_lattice(2, 2, 2, 6)), 3)


def test_drive_examples():
    r = drive_to_full_norm(diagonal_lattice(2, 2, 2, 6), 3)
    assert r.sequence.steps == [] and r.lattice == diagonal_lattice(2, 2, 2, 6)
    with pytest.raises(CapExceeded) as exc:
        drive_to_full_norm(diagonal_lattice(2, 6), 3, cap=6)
    assert len(exc.value.partial.steps) == 6
    r = drive_to_full_norm(diagonal_lattice(2, 2, 18, 18), 3)
    assert norm_image_full(r.lattice, 3)
    assert all(c.scale <= 1 for c in jordan_decompose(r.lattice, 3).components)


def jordan_signature(L, q):
    comps = jordan_decompose(L, q).components
    return [(c.scale, c.rank, c.is_even if q == 2 else None) for c in comps], \
        [int(intmat.det(c.gram)) for c in comps]


def drive_corpus(seed, count):
    rng = seeded(seed)
    out = []
    while len(out) < count:
        p = rng.choice([2, 3, 5])
        A = random_lattice(rng, 2, 12, even=True)
        B = random_lattice(rng, 2, 12, even=True)
        L, _ = normalize(orthogonal_sum(A, rescale(B, p ** rng.randint(1, 3))))
        if L.is_normalized and not norm_image_full(L, p):
            out.append((L, p))
    return out


def test_drive_keeps_other_primes_and_reaches_full_norm():
    for L, p in drive_corpus(16, 30):
        res = drive_to_full_norm(L, p)
        assert res.sequence.steps
        assert norm_image_full(res.lattice, p)
        cur = L
        for step in res.sequence.steps:
            assert step.r in (Fraction(1, p), Fraction(1, p * p))
            assert step.lattice.is_normalized
            assert step.lattice == Lattice(intmat.as_tuple(
                [[x * step.r for x in row] for row in intmat.congruent(step.coords, cur.gram)]))
            cur = step.lattice
        total = 1
        for r in res.sequence.factors:
            total *= r
        back = rescale(res.lattice, 1 / total)
        for q in prime_factors(2 * L.discriminant * back.discriminant):
            if q == p:
                continue
            s1, d1 = jordan_signature(L, q)
            s2, d2 = jordan_signature(back, q)
            assert s1 == s2
            assert is_local_square(Fraction(L.discriminant, back.discriminant), q)
            if q != 2:
                assert all(is_local_square(Fraction(a, b), q) for a, b in zip(d1, d2))
