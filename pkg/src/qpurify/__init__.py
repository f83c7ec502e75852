"""Exact LOCC purification of pairs of two-qubit mixed states.

A two-qubit mixed state is purifiable to a maximally entangled pure state
(given a partner state, or a second copy) exactly when its range is
two-dimensional and contains a single product ray.  The package classifies
ranges, reduces purifiable states to their normal form, builds and applies
the optimal pair of local filters, and independently verifies both the
classification and the optimality claim by brute-force sampling and a
seeded random-restart filter search.
"""

from .canonical import (InvalidParameters, NotWClass, RankDeficientPeel,
                        WCanonicalForm, random_w_form, reconstruct,
                        w_canonicalize)
from .protocol import (InvalidForm, NotMaximallyEntangled, OutputNotRankOne,
                       ProbabilityMismatch, ProtocolError, ProtocolOperators,
                       ProductState, PurificationReport, apply_protocol,
                       build_protocol, optimal_probability, procrustean_step,
                       purify_pair)
from .ranges import (DegenerateBasis, ProductRay, RangeClass, RangeKind,
                     Subspace, classify_2d_subspace, classify_range,
                     product_basis_dim3, purifiable_n_copies,
                     purifiable_single_copy, range_basis)
from .search import (ProductZeroCount, SearchConfig, SearchResult,
                     sample_product_zeros, search_best_protocol)
from .states import (DensityMatrix, NotHermitian, NotNormalized, NotPositive,
                     StateError, TraceNotOne, haar_unitary, hermitian_eig,
                     ket, kron, partial_transpose, permute_systems,
                     permute_vector, product_determinant, projector,
                     pure_density, reshape_to_matrix, schmidt_decompose,
                     validate_density, PHI_PLUS, PSI_MINUS, PSI_PLUS)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
