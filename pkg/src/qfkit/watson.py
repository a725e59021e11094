"""Watson transformations and normalized step sequences."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import intmat
from ._localrep import ord_p
from .errors import CapExceeded, HypothesisUnmet, NotNormalized, UnsupportedModulus
from .lattice import Lattice, SublatticeEmbedding, normalize
from .padic import (is_isotropic_space, is_local_square, jordan_decompose,
                    norm_image_full, prime_factors)


def _modulus_prime(m: int) -> int:
    if m == 4:
        return 2
    if m % 2 == 0 and m > 2:
        p = m // 2
        if prime_factors(p) == [p]:
            return p
    raise UnsupportedModulus(f"m must be 4 or twice a prime, got {m}")


def _lambda_coords(gram, p: int) -> list[list[int]]:
    """HNF basis (in L-coordinates) of {x : B(x, L) ⊆ pZ, Q(x)/2 ≡ 0 mod p} for an even Gram."""
    n = len(gram)
    # x G ≡ 0 (mod p): kernel of the stacked matrix [G; pI]
    stacked = [list(r) for r in gram] + [[p * int(i == j) for j in range(n)] for i in range(n)]
    k1 = intmat.hnf([row[:n] for row in intmat.left_kernel(stacked)])
    if p == 2:
        # Q/2 is additive mod 2 on k1 because the pairing is even there
        vals = [[intmat.congruent([row], gram)[0][0] // 2 % 2] for row in k1] + [[2]]
        coeffs = [row[:len(k1)] for row in intmat.left_kernel(vals)]
        k1 = intmat.hnf(intmat.matmul(coeffs, k1))
    return k1


def watson_lambda(L: Lattice, m: int) -> SublatticeEmbedding:
    """The sublattice Λ_m(L) = {x : Q(x + z) ≡ Q(z) mod m for all z in L}."""
    p = _modulus_prime(m)
    if L.norm % 2:
        raise NotNormalized("Watson transformations need an even lattice")
    return SublatticeEmbedding(tuple(map(tuple, _lambda_coords(L.gram, p))), L)


@dataclass(frozen=True)
class WatsonStep:
    r: Fraction
    lattice: Lattice                       # normalized result of the step
    coords: tuple                          # basis of the result in the previous basis

    def to_json(self) -> dict:
        return {"r": str(self.r), "gram": [list(row) for row in self.lattice.gram],
                "coords": [list(row) for row in self.coords]}


@dataclass
class WatsonSequence:
    p: int
    source: Lattice
    steps: list[WatsonStep] = field(default_factory=list)

    @property
    def result(self) -> Lattice:
        return self.steps[-1].lattice if self.steps else self.source

    @property
    def factors(self) -> list[Fraction]:
        return [s.r for s in self.steps]

    def to_json(self) -> dict:
        return {"p": self.p, "source": [list(r) for r in self.source.gram],
                "steps": [s.to_json() for s in self.steps]}


def lambda_normalized(L: Lattice, p: int) -> tuple[Lattice, Fraction, WatsonStep]:
    """Λ_{2p}(L) rescaled to norm 2Z, in its HNF basis."""
    E = watson_lambda(L, 2 * p)
    new, r = normalize(E.sub_gram)
    if L.is_normalized:
        assert r in (Fraction(1, p), Fraction(1, p * p)), r
    return new, r, WatsonStep(r, new, E.coords)


def _hyperbolic_at_zero(L: Lattice, p: int) -> bool:
    comps = jordan_decompose(L, p).components
    if comps[0].scale != 0:
        return False
    c = comps[0]
    if p == 2:
        return c.is_even and (c.rank >= 4 or "H" in c.block_kinds(p))
    if c.rank >= 3:
        return True
    return c.rank == 2 and is_local_square(-intmat.det(c.gram), p)


@dataclass
class DriveResult:
    sequence: WatsonSequence
    lattice: Lattice
    # None when L_p is anisotropic; otherwise whether the result splits H at exponent 0
    hyperbolic_split: bool | None


def default_cap(L: Lattice, p: int) -> int:
    return 2 * ord_p(L.discriminant, p) + 4


def drive_to_full_norm(L: Lattice, p: int, cap: int | None = None) -> DriveResult:
    """Apply normalized Λ_{2p} steps until Q(L_p) = 2Z_p."""
    if not L.is_normalized:
        raise NotNormalized("lattice must have norm ideal 2Z")
    if cap is None:
        cap = default_cap(L, p)
    seq = WatsonSequence(p, L)
    cur = L
    while not norm_image_full(cur, p):
        if len(seq.steps) >= cap:
            raise CapExceeded(f"no full norm image after {cap} steps", partial=seq)
        cur, _, step = lambda_normalized(cur, p)
        seq.steps.append(step)
    isotropic = is_isotropic_space(intmat.rational_diagonal(L.gram), p)
    return DriveResult(seq, cur, _hyperbolic_at_zero(cur, p) if isotropic else None)


def lemma_hypothesis_holds(L: Lattice, p: int) -> bool:
    """s(L) = 2Z when p = 2, or Q(L_p) != 2Z_p."""
    if not L.is_normalized:
        return False
    if p == 2 and L.scale == 2:
        return True
    return not norm_image_full(L, p)


def transform_sublattice(E: SublatticeEmbedding, p: int) -> SublatticeEmbedding:
    """Image of Λ_{2p}(M) inside the normalized Λ_{2p}(L), in the latter's basis."""
    L = E.ambient
    if not lemma_hypothesis_holds(L, p):
        raise HypothesisUnmet("need a normalized L with s(L) = 2Z at p = 2 or Q(L_p) != 2Z_p")
    new, _, step = lambda_normalized(L, p)
    m_coords = _lambda_coords(E.sub_gram.gram, p)
    image = intmat.matmul(m_coords, E.coords)
    coords = intmat.solve_in_basis(image, step.coords)
    if coords is None:
        raise HypothesisUnmet("Λ(M) is not contained in Λ(L)")
    return SublatticeEmbedding(tuple(map(tuple, coords)), new)
