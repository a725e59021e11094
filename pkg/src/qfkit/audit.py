"""Bounded audits of (strict) n-regularity and checks of successive-minima bounds."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import intmat
from .errors import CapExceeded, PrecisionUnstable, ResourceLimit
from .lattice import Lattice, SublatticeEmbedding, is_primitive_sublattice, orthogonal_complement
from .reduction import canonical_gram, successive_minima
from .represent import Status, genus_represents, global_represents

MAX_CANDIDATES = 2_000_000
MAX_AUDIT_RANK = 4


def _box_size(n: int, B: int) -> int:
    # crude upper bound on the number of coefficient boxes
    total = 0
    for diag in itertools.combinations_with_replacement(range(1, B + 1), n):
        prod = 1
        for i in range(n):
            for _ in range(i + 1, n):
                prod *= diag[i] + 1
        total += prod
        if total > MAX_CANDIDATES:
            break
    return total


def enumerate_candidates(n: int, B: int) -> Iterable[Lattice]:
    """Every positive definite n-ary Gram with a_11 <= ... <= a_nn <= B and |2 a_ij| <= a_ii.

    For n <= 4 each lattice with mu_n <= B has such a Gram (a Minkowski-reduced
    one), so the stream is complete up to isometry; it contains duplicates.
    """
    if not 1 <= n <= MAX_AUDIT_RANK:
        raise ValueError(f"n must lie in 1..{MAX_AUDIT_RANK}")
    if _box_size(n, B) > MAX_CANDIDATES:
        raise CapExceeded(f"more than {MAX_CANDIDATES} candidate Gram matrices for n={n}, B={B}")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for diag in itertools.combinations_with_replacement(range(1, B + 1), n):
        ranges = [range(-(diag[i] // 2), diag[i] // 2 + 1) for i, _ in pairs]
        for off in itertools.product(*ranges):
            g = [[0] * n for _ in range(n)]
            for i in range(n):
                g[i][i] = diag[i]
            for (i, j), x in zip(pairs, off):
                g[i][j] = g[j][i] = x
            if all(m > 0 for m in intmat.leading_minors(g)):
                yield Lattice(intmat.as_tuple(g))


def canonical_candidates(n: int, B: int, stream: Iterable[Lattice] | None = None) -> list[Lattice]:
    """Isometry classes from the stream, in a fixed order independent of the stream order."""
    if stream is None:
        stream = enumerate_candidates(n, B)
    seen = {canonical_gram(M) for M in stream}
    return [Lattice(g) for g in sorted(seen, key=lambda g: ([g[i][i] for i in range(len(g))], g))]


class Verdict(enum.Enum):
    VERIFIED = "VerifiedUpToBound"
    COUNTEREXAMPLE = "Counterexample"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class AuditReport:
    subject: Lattice
    n: int
    bound: int
    strict: bool
    verdict: Verdict
    counterexample: dict | None = None
    stats: dict = field(default_factory=dict)
    inconclusive: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "subject": [list(r) for r in self.subject.gram],
            "n": self.n,
            "bound": self.bound,
            "strict": self.strict,
            "verdict": self.verdict.value,
            "counterexample": self.counterexample,
            "stats": self.stats,
            "inconclusive": self.inconclusive,
        }


def audit_regularity(L: Lattice, n: int, B: int, strict: bool = False,
                     candidates: Iterable[Lattice] | None = None,
                     effort: int | None = None) -> AuditReport:
    """Check every n-ary M with mu_n(M) <= B that the genus of L (primitively) represents.

    The first failure in canonical candidate order is the counterexample; a
    candidate whose global search or local test could not finish makes the
    report Inconclusive unless a counterexample was found.
    """
    if L.rank < n:
        raise ValueError("the lattice rank must be at least n")
    pool = canonical_candidates(n, B, candidates)
    stats = {"enumerated": len(pool), "filtered": 0, "tested": 0}
    skipped = []
    kw = {} if effort is None else {"effort": effort}
    for M in pool:
        glob = global_represents(M, L, strict, **kw)
        if glob.status is Status.FOUND:
            # a global representation implies one by the genus
            stats["tested"] += 1
            continue
        try:
            ok, per = genus_represents(M, L, strict)
        except (ResourceLimit, PrecisionUnstable) as exc:
            skipped.append({"candidate": [list(r) for r in M.gram], "reason": str(exc)})
            continue
        if not ok:
            stats["filtered"] += 1
            continue
        stats["tested"] += 1
        if glob.status is Status.EXHAUSTED:
            skipped.append({"candidate": [list(r) for r in M.gram], "reason": glob.detail})
            continue
        cex = {
            "candidate": [list(r) for r in M.gram],
            "per_prime": {str(p): v.to_json() for p, v in per.items()},
            "global": glob.to_json(),
        }
        return AuditReport(L, n, B, strict, Verdict.COUNTEREXAMPLE, cex, stats, skipped)
    verdict = Verdict.INCONCLUSIVE if skipped else Verdict.VERIFIED
    return AuditReport(L, n, B, strict, verdict, None, stats, skipped)


# -- empirical consequences of strict regularity -------------------------------

@dataclass
class PropertyCheck:
    """``holds`` is None when the premise failed or a follow-up audit was Inconclusive."""

    name: str
    subject: Lattice
    applicable: bool
    holds: bool | None
    reports: list = field(default_factory=list)
    reason: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "subject": [list(r) for r in self.subject.gram],
                "applicable": self.applicable, "holds": self.holds, "reason": self.reason,
                "reports": [r.to_json() for r in self.reports]}


def _all_verified(reports) -> bool | None:
    if any(r.verdict is Verdict.COUNTEREXAMPLE for r in reports):
        return False
    if any(r.verdict is Verdict.INCONCLUSIVE for r in reports):
        return None
    return True


def regularity_cascade(L: Lattice, n: int, B: int) -> PropertyCheck:
    """Strictly n-regular up to B should give n-regular and strictly (n-1)-regular up to B//2."""
    base = audit_regularity(L, n, B, strict=True)
    if base.verdict is not Verdict.VERIFIED:
        return PropertyCheck("cascade", L, False, None, [base], f"premise audit: {base.verdict.value}")
    follow = [audit_regularity(L, n, B // 2, strict=False)]
    if n > 1:
        follow.append(audit_regularity(L, n - 1, B // 2, strict=True))
    return PropertyCheck("cascade", L, True, _all_verified(follow), [base] + follow)


def watson_preservation(L: Lattice, n: int, B: int, p: int) -> PropertyCheck:
    """Strictly n-regular up to B should carry over to the normalized Λ_{2p}(L) up to B // 4p^2."""
    from .watson import lambda_normalized, lemma_hypothesis_holds

    if not lemma_hypothesis_holds(L, p):
        return PropertyCheck("preservation", L, False, None, reason=f"hypothesis fails at p={p}")
    bound = B // (4 * p * p)
    if bound < 1:
        return PropertyCheck("preservation", L, False, None, reason="bound below 1")
    base = audit_regularity(L, n, B, strict=True)
    if base.verdict is not Verdict.VERIFIED:
        return PropertyCheck("preservation", L, False, None, [base], f"premise audit: {base.verdict.value}")
    image, _, _ = lambda_normalized(L, p)
    after = audit_regularity(image, n, bound, strict=True)
    return PropertyCheck("preservation", L, True, _all_verified([after]), [base, after])


# -- successive minima inequalities --------------------------------------------

@dataclass
class InequalityCheck:
    name: str
    applicable: bool
    holds: bool | None = None
    lhs: Fraction | int | None = None
    rhs: Fraction | int | None = None
    reason: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "applicable": self.applicable, "holds": self.holds,
                "lhs": None if self.lhs is None else str(self.lhs),
                "rhs": None if self.rhs is None else str(self.rhs), "reason": self.reason}


def complement_norm_bound(E: SublatticeEmbedding) -> InequalityCheck:
    """mu_{k+1}(L) >= a / d(M)^2 where a generates the norm ideal of M^perp."""
    name = "complement_norm_bound"
    L, k = E.ambient, E.rank
    if k >= L.rank:
        return InequalityCheck(name, False, reason="M has full rank, so M^perp is zero")
    _, a = orthogonal_complement(E)
    lhs = successive_minima(L).minima[k]
    rhs = Fraction(a, E.sub_gram.discriminant ** 2)
    return InequalityCheck(name, True, lhs >= rhs, lhs, rhs)


def escape_bound(E: SublatticeEmbedding, K: Lattice, primitive: bool = False) -> InequalityCheck:
    """mu_{m+1}(L) <= max(mu_k(K), mu_m(M)) for K represented by L but not by M (ranks <= 4)."""
    name = "escape_bound"
    L, m = E.ambient, E.rank
    M = E.sub_gram
    if not is_primitive_sublattice(E):
        return InequalityCheck(name, False, reason="M is not primitive in L")
    if m >= L.rank:
        return InequalityCheck(name, False, reason="M has full rank")
    if max(K.rank, m) > 4:
        return InequalityCheck(name, False, reason="ranks above 4")
    by_l = global_represents(K, L, primitive)
    if by_l.status is not Status.FOUND:
        return InequalityCheck(name, False, reason=f"K is not shown to be represented by L ({by_l.status.value})")
    by_m = global_represents(K, M, primitive)
    if by_m.status is not Status.NOT_FOUND:
        return InequalityCheck(name, False, reason=f"K is not shown to be unrepresented by M ({by_m.status.value})")
    lhs = successive_minima(L).minima[m]
    rhs = max(successive_minima(K).minima[-1], successive_minima(M).minima[-1])
    return InequalityCheck(name, True, lhs <= rhs, lhs, rhs)


@dataclass
class MinimaReport:
    checks: list[InequalityCheck]

    @property
    def violations(self) -> list[InequalityCheck]:
        return [c for c in self.checks if c.applicable and not c.holds]

    def to_json(self) -> dict:
        return {"checks": [c.to_json() for c in self.checks]}


def check_minima_inequalities(E: SublatticeEmbedding, K: Lattice | None = None,
                              primitive: bool = False) -> MinimaReport:
    checks = [complement_norm_bound(E)]
    if K is not None:
        checks.append(escape_bound(E, K, primitive))
    return MinimaReport(checks)
