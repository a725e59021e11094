"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI reports.
"""


class QFError(Exception):
    code = "error"


class LatticeError(QFError, ValueError):
    code = "bad_lattice"


class NotSymmetric(LatticeError):
    code = "not_symmetric"


class NotPositiveDefinite(LatticeError):
    code = "not_positive_definite"


class NotIntegral(LatticeError):
    code = "not_integral"


class NotIntegralAfterScaling(LatticeError):
    code = "not_integral_after_scaling"


class RankTooLarge(QFError, ValueError):
    code = "rank_too_large"


class BoundTooLarge(QFError, ValueError):
    code = "bound_too_large"


class NotNormalized(QFError, ValueError):
    code = "not_normalized"


class UnsupportedModulus(QFError, ValueError):
    code = "unsupported_modulus"


class IsotropicInput(QFError, ValueError):
    code = "isotropic_input"


class PreconditionViolation(QFError, ValueError):
    code = "precondition_violation"


class HypothesisUnmet(QFError, ValueError):
    code = "hypothesis_unmet"


class SearchExhausted(QFError, RuntimeError):
    code = "search_exhausted"


class CapExceeded(QFError, RuntimeError):
    code = "cap_exceeded"

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class PrecisionUnstable(QFError, RuntimeError):
    code = "precision_unstable"


class ResourceLimit(QFError, RuntimeError):
    """A local computation would need a table larger than the configured cap."""

    code = "resource_limit"
