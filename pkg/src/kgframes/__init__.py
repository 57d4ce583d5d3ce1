"""Computational K-g-frame theory in finite-dimensional complex Hilbert spaces.

Classify operator families as Bessel / g-frame / K-g-frame systems with
optimal bounds, construct canonical K-dual Bessel g-sequences through
Douglas-type factorization, build and validate atomic systems, and run
seeded randomized verification campaigns.
"""

from .atomic import (
    AtomicCertificate,
    CombinedBound,
    atomic_coefficients,
    combine_linear,
    combine_product,
    is_atomic_system,
    k_g_frame_via_frame_operator,
    operator_weighted_sum,
    parseval_sum,
    perturb_sum,
    positive_perturbation,
)
from .douglas import DouglasFactor, douglas_factor, min_majorization_constant, range_included
from .duality import (
    KDualPair,
    canonical_k_dual,
    dual_minimality_check,
    is_k_dual,
    subspace_dual_implies_k_g_frame,
)
from .errors import (
    CommutationViolated,
    ConvergenceFailure,
    DegenerateCombination,
    DimensionMismatch,
    HypothesisViolated,
    InsufficientCoefficientDim,
    KGFrameError,
    NotADual,
    NotAtomicForInputs,
    NotHermitian,
    NotKGFrame,
    NotParseval,
    NotPositive,
    NotSurjective,
    OrthogonalityViolated,
    RangeHypothesisViolated,
    RangeNotIncluded,
    RankTooLarge,
    SpecFormatError,
    UnknownTheorem,
)
from .gframe import (
    CoefficientVector,
    FrameBounds,
    GFrameSystem,
    InducedFrame,
    analysis,
    classify,
    frame_operator,
    induced_frame,
    induced_frame_bounds,
    optimal_k_lower_bound,
    synthesis,
)
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    adjoint,
    hermitian_eig,
    null_basis,
    operator_norm,
    orth_projector,
    pinv,
    psd_min_shift,
    range_basis,
    rank,
    svd,
)
from .verifier import (
    THEOREM_IDS,
    CampaignSpec,
    DimensionRanges,
    VerificationReport,
    gen_commuting_surjective,
    gen_k_with_range_in,
    gen_orthogonal_pair,
    gen_parseval,
    gen_parseval_pair,
    gen_system,
    run_campaign,
)

__version__ = "0.1.0"
