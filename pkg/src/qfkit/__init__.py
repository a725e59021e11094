"""qfkit: exact computations with positive definite integral quadratic lattices."""
from .errors import (BoundTooLarge, CapExceeded, HypothesisUnmet, IsotropicInput, LatticeError,
                     NotIntegral, NotIntegralAfterScaling, NotNormalized, NotPositiveDefinite,
                     NotSymmetric, PrecisionUnstable, PreconditionViolation, QFError,
                     RankTooLarge, ResourceLimit, SearchExhausted, UnsupportedModulus)
from .lattice import (Lattice, SublatticeEmbedding, diagonal_lattice, discriminant, embed,
                      is_primitive_sublattice, k_section, make_lattice, norm_ideal, normalize,
                      orthogonal_complement, orthogonal_sum, rescale, saturate, scale_ideal)
from .reduction import (MinimaProfile, canonical_gram, lll, minkowski_reduce, short_vectors,
                        successive_minima)
from .padic import (INF, CharacteristicPrimeSet, JordanComponent, JordanSplitting,
                    anisotropic_primes_quaternary, characteristic_primes, hasse_invariant,
                    hilbert_symbol, is_anisotropic_lattice, is_isotropic_space, jordan_decompose,
                    last_scale, norm_image_full, primitive_norm_gap)
from .watson import (WatsonSequence, WatsonStep, drive_to_full_norm, lambda_normalized,
                     transform_sublattice, watson_lambda)
from .represent import (GlobalResult, LocalVerdict, RepresentationWitness, Status,
                        genus_represents, global_represents, local_represents, make_witness,
                        verify_witness)
from .audit import (AuditReport, Verdict, audit_regularity, check_minima_inequalities,
                    enumerate_candidates)

__version__ = "0.1.0"
