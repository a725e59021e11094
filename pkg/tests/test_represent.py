import time

import pytest

from oracles import (number_represented_bruteforce, random_lattice, random_unimodular,
                     represents_bruteforce, seeded)
from qfkit import (PrecisionUnstable, Status, diagonal_lattice, genus_represents,
                   global_represents, intmat, local_represents, make_lattice, make_witness,
                   verify_witness)
from qfkit._localrep import hensel_precision
from qfkit.lattice import Lattice
from qfkit.errors import ResourceLimit
from qfkit.represent import (RepresentationWitness, _confirm_by_lifting, _jordan_target, _lifts, _oracle,
                             _split_unimodular, _unary_by_unimodular, _unimodular_verdict,
                             _witt_index)

L111 = diagonal_lattice(1, 11)


def conj(L, U):
    return Lattice(intmat.as_tuple(intmat.congruent(U, L.gram)))


def test_verify_witness_examples():
    assert verify_witness(make_witness([[1, 0]], diagonal_lattice(1), L111))
    w = make_witness([[2, 0]], diagonal_lattice(4), L111)
    assert verify_witness(w) and not w.primitive
    w = make_witness([[1, 1]], diagonal_lattice(12), L111)
    assert verify_witness(w) and w.primitive
    # wrong Gram or a false primitivity flag is rejected
    assert not verify_witness(RepresentationWitness(((1, 1),), diagonal_lattice(11), L111, True))
    assert not verify_witness(RepresentationWitness(((2, 0),), diagonal_lattice(4), L111, True))
    assert not verify_witness(RepresentationWitness(((1, 0, 0),), diagonal_lattice(1), L111, True))


def test_motivating_pair():
    three = diagonal_lattice(3)
    ok, per = genus_represents(three, L111)
    assert ok and {2, 11} <= set(per)
    assert all(v.represented for v in per.values())
    res = global_represents(three, L111)
    assert res.status is Status.NOT_FOUND and res.witness is None


def test_local_examples():
    for p in [2, 3, 5, 7, 11, 13]:
        assert local_represents(diagonal_lattice(3), L111, p).represented
    v = local_represents(L111, L111, 11, primitive=True)
    assert v.represented and v.primitively_represented
    v = local_represents(diagonal_lattice(12), diagonal_lattice(4, 4), 2, primitive=True)
    assert v.represented is False or v.primitively_represented is False
    assert not v.primitively_represented
    assert represents_bruteforce([[12]], [[4, 0], [0, 4]], 2, 5, primitive=True) is False
    ok, per = genus_represents(diagonal_lattice(5), L111)
    assert ok and per[11].represented


def test_global_examples():
    res = global_represents(diagonal_lattice(1), L111)
    assert res.status is Status.FOUND and res.witness.T == ((1, 0),) and res.witness.primitive
    res = global_represents(diagonal_lattice(12), L111, primitive=True)
    assert res.status is Status.FOUND
    assert [abs(x) for x in res.witness.T[0]] == [1, 1]
    res = global_represents(diagonal_lattice(4), L111, primitive=True)
    assert res.status is Status.NOT_FOUND
    assert global_represents(diagonal_lattice(4), L111).status is Status.FOUND


def test_global_effort_bound():
    # all pairings in 2 I_6 are even, so [[6, 3], [3, 6]] is never matched;
    # the full search visits far more than five nodes
    L = diagonal_lattice(*[2] * 6)
    M = make_lattice([[6, 3], [3, 6]])
    assert global_represents(M, L).status is Status.NOT_FOUND
    res = global_represents(M, L, effort=5)
    assert res.status is Status.EXHAUSTED and res.witness is None


def test_local_matches_bruteforce_unary():
    rng = seeded(30)
    checked = 0
    while checked < 80:
        p = rng.choice([2, 3, 5])
        L = random_lattice(rng, rng.randint(1, 3), 12)
        c = rng.randint(1, 30)
        M = diagonal_lattice(c)
        k = hensel_precision(M.gram, p) + 1
        if p ** (k * L.rank) > 2 * 10 ** 6:
            continue
        for prim in [False, True]:
            v = local_represents(M, L, p, prim, oracle=True)
            got = v.primitively_represented if prim else v.represented
            assert got == represents_bruteforce(M.gram, L.gram, p, k, prim), (M, L, p, prim)
        checked += 1


def test_local_matches_bruteforce_binary():
    rng = seeded(31)
    checked = 0
    while checked < 40:
        p = rng.choice([2, 3])
        L = random_lattice(rng, rng.randint(2, 3), 8)
        M = random_lattice(rng, 2, 8)
        k = hensel_precision(M.gram, p) + 1
        if p ** (k * L.rank) > 5 * 10 ** 4:
            continue
        for prim in [False, True]:
            v = local_represents(M, L, p, prim, oracle=True)
            got = v.primitively_represented if prim else v.represented
            assert got == represents_bruteforce(M.gram, L.gram, p, k, prim), (M, L, p, prim)
        checked += 1


def test_local_matches_bruteforce_spread_scales():
    # diagonal targets whose Jordan scales differ, where the off-diagonal
    # precision is below the single-exponent rule
    rng = seeded(32)
    checked = 0
    while checked < 40:
        p = rng.choice([2, 3])
        t = rng.randint(1, 3 if p == 2 else 2)
        M = diagonal_lattice(rng.choice([1, 3, 5, 7]) if p == 2 else rng.choice([1, 2]),
                             p ** t * rng.choice([1, 3, 5, 7] if p == 2 else [1, 2]))
        L = random_lattice(rng, 2, 12) if rng.random() < 0.5 else \
            diagonal_lattice(*[rng.choice([1, 3, 5, 7, 2, 6, 4, 12, 9]) for _ in range(3)])
        k = hensel_precision(M.gram, p) + 1
        if p ** (k * L.rank) > 3 * 10 ** 5:
            continue
        for prim in [False, True]:
            v = local_represents(M, L, p, prim, oracle=True)
            got = v.primitively_represented if prim else v.represented
            assert got == represents_bruteforce(M.gram, L.gram, p, k, prim), (M, L, p, prim)
        checked += 1


def test_local_witness_is_a_congruence_solution():
    rng = seeded(32)
    for _ in range(40):
        p = rng.choice([2, 3, 5])
        L = random_lattice(rng, rng.randint(1, 4), 15)
        M = random_lattice(rng, rng.randint(1, min(2, L.rank)), 15)
        v = local_represents(M, L, p, primitive=True, oracle=True)
        if v.represented and v.witness is not None:
            q = p ** v.witness_precision
            X = [list(r) for r in v.witness]
            got = intmat.congruent(X, L.gram)
            assert all((a - b) % q == 0 for ra, rb in zip(got, M.gram) for a, b in zip(ra, rb))
        if v.primitively_represented and v.primitive_witness is not None:
            X = [list(r) for r in v.primitive_witness]
            from oracles import _rank_mod_p
            assert _rank_mod_p(X, p) == M.rank


def test_unimodular_rule_matches_oracle():
    rng = seeded(33)
    checked = 0
    while checked < 60:
        p = rng.choice([3, 5, 7])
        L = random_lattice(rng, rng.randint(1, 3), 10)
        M = random_lattice(rng, rng.randint(1, L.rank), 10)
        if (M.discriminant * L.discriminant) % p == 0:
            continue
        rule = _unimodular_verdict(M, L, p)
        orc = local_represents(M, L, p, primitive=True, oracle=True)
        assert (rule.represented, rule.primitively_represented) == \
            (orc.represented, orc.primitively_represented), (M, L, p)
        checked += 1


def test_primitive_implies_plain():
    rng = seeded(34)
    for _ in range(60):
        L = random_lattice(rng, rng.randint(1, 4), 12)
        M = random_lattice(rng, rng.randint(1, min(2, L.rank)), 12)
        okp, perp = genus_represents(M, L, primitive=True)
        ok, per = genus_represents(M, L)
        if okp:
            assert ok
        for p, v in perp.items():
            if v.primitively_represented:
                assert v.represented and per[p].represented
        g = global_represents(M, L, primitive=True)
        if g.status is Status.FOUND:
            assert global_represents(M, L).status is Status.FOUND


def test_global_witness_implies_genus():
    rng = seeded(35)
    for _ in range(60):
        L = random_lattice(rng, rng.randint(1, 4), 12)
        M = random_lattice(rng, rng.randint(1, min(3, L.rank)), 12)
        for prim in [False, True]:
            g = global_represents(M, L, prim)
            if g.status is Status.FOUND:
                assert verify_witness(g.witness)
                assert g.witness.primitive or not prim
                assert genus_represents(M, L, prim)[0]


def test_witness_transport_under_change_of_basis():
    rng = seeded(36)
    for _ in range(30):
        L = random_lattice(rng, rng.randint(2, 4), 12)
        M = random_lattice(rng, rng.randint(1, 2), 12)
        g = global_represents(M, L)
        U = random_unimodular(L.rank, rng)
        L2 = conj(L, U)
        h = global_represents(M, L2)
        assert (g.status is Status.FOUND) == (h.status is Status.FOUND)
        if g.status is Status.FOUND:
            # T for L becomes T U^{-1} for the new basis
            Uinv = [[int(x) for x in r] for r in intmat.inverse(U)]
            moved = make_witness(intmat.matmul([list(r) for r in g.witness.T], Uinv), M, L2)
            assert verify_witness(moved) and moved.primitive == g.witness.primitive


def test_stability_check_runs_clean():
    rng = seeded(37)
    for _ in range(40):
        L = random_lattice(rng, rng.randint(1, 4), 12)
        M = random_lattice(rng, rng.randint(1, min(2, L.rank)), 12)
        genus_represents(M, L, primitive=True, stability_check=True)


def test_split_route_agrees_with_table():
    rng = seeded(41)
    checked = 0
    while checked < 30:
        L = random_lattice(rng, rng.randint(2, 4), 15)
        M = random_lattice(rng, rng.randint(1, 2), 15)
        for p in (3, 5, 7):
            if M.discriminant % p == 0 or M.rank > L.rank:
                continue
            a = local_represents(M, L, p, True, oracle=True, split=False)
            b = _split_unimodular(M, L, p, 3, True)
            assert (a.represented, a.primitively_represented) == \
                (b.represented, b.primitively_represented), (M.gram, L.gram, p)
            checked += 1


def test_unary_by_unimodular_matches_bruteforce():
    rng = seeded(44)
    for _ in range(60):
        p = rng.choice([3, 5])
        units = [rng.randint(1, p - 1) for _ in range(rng.randint(0, 3))]
        e = rng.randint(1, 2)
        a = p ** e * rng.choice([u for u in range(1, p) if u % p])

        def prim_rep(c):
            # primitive solutions mod p^(ord+1) lift at odd p
            return bool(units) and number_represented_bruteforce(units, c, p, ord_p_int(c, p) + 1, True)

        plain = any(prim_rep(a // p ** (2 * f)) for f in range(e // 2 + 1))
        assert _unary_by_unimodular(a, units, p) == (plain, prim_rep(a)), (a, units, p)


def ord_p_int(c, p):
    e = 0
    while c % p == 0:
        c //= p
        e += 1
    return e


def test_lifted_witness_holds_at_higher_precision():
    rng = seeded(43)
    lifted = 0
    while lifted < 25:
        L = random_lattice(rng, rng.randint(2, 4), 12)
        M = random_lattice(rng, rng.randint(1, 2), 12)
        if M.rank > L.rank:
            continue
        v = _oracle(M, L, 2, 0, True)
        if not v.represented:
            continue
        jm, ks = _jordan_target(M, 2, 3)
        blocks = jm.full_blocks()
        assert _lifts(v.frame[0], L.gram, blocks, 2, ks, False)
        if v.primitively_represented:
            assert _lifts(v.frame[1], L.gram, blocks, 2, ks, True)
        assert _confirm_by_lifting(v, M, L, 2, 2, True)
        lifted += 1


def test_lift_rejects_a_non_solution():
    # x^2 ≡ 3 has no 2-adic solution, so no Newton lift can succeed
    assert not _lifts([[1]], [[1]], [[[3]]], 2, (5,), False)


def unary_gap_table(L, top):
    gaps = []
    for c in range(1, top + 1):
        M = diagonal_lattice(c)
        if genus_represents(M, L)[0] and global_represents(M, L).status is Status.NOT_FOUND:
            gaps.append(c)
    return gaps


def values_of(gram, top):
    from oracles import short_vectors_box
    return {q for q in short_vectors_box(gram, top).values()}


def test_unary_gap_set_for_x2_plus_11y2():
    # the other class in the genus of x^2 + 11y^2 is 3x^2 + 2xy + 4y^2;
    # the gaps are the numbers it represents that x^2 + 11 y^2 misses
    other = make_lattice([[3, 1], [1, 4]])
    assert genus_represents(other, L111)[0] and genus_represents(L111, other)[0]
    assert other.discriminant == L111.discriminant
    expected = sorted(values_of(other.gram, 20) - values_of(L111.gram, 20))
    assert unary_gap_table(L111, 20) == expected
    assert 3 in expected


def test_rank_mismatch():
    v = local_represents(diagonal_lattice(1, 1, 1), L111, 2)
    assert not v.represented
    assert genus_represents(diagonal_lattice(1, 1, 1), L111) == (False, {})
    assert global_represents(diagonal_lattice(1, 1, 1), L111).status is Status.NOT_FOUND


def test_scaled_targets_agree_with_table():
    # targets divisible by p have no unimodular part; the M/p recursion must match the table
    rng = seeded(46)
    checked = 0
    while checked < 40:
        p = rng.choice([3, 5])
        L = random_lattice(rng, rng.randint(1, 4), 8)
        if rng.random() < 0.25:
            L = Lattice(tuple(tuple(p * x for x in r) for r in L.gram))
        e = rng.randint(1, 2)
        M = Lattice(tuple(tuple(p ** e * x for x in r)
                          for r in random_lattice(rng, rng.randint(1, min(2, L.rank)), 4).gram))
        prim = rng.random() < 0.5
        try:
            a = local_represents(M, L, p, prim, oracle=True, split=False)
            b = _split_unimodular(M, L, p, a.precision, prim)
        except ResourceLimit:
            continue
        assert (a.represented, a.primitively_represented) == \
            (b.represented, b.primitively_represented), (p, M.gram, L.gram, prim)
        checked += 1


def test_witt_index():
    assert _witt_index([1, 1], 5) == 1
    assert _witt_index([1, 1], 3) == 0
    assert _witt_index([1, 1, 1], 3) == 1
    assert _witt_index([1, 1, 1, 1], 3) == 2
    assert _witt_index([1, 1, 1, 2], 3) == 1
