"""Exception vocabulary shared across the package.

Every mathematically meaningful refusal derives from :class:`KGFrameError`,
so callers (and the CLI) can distinguish "the answer is no" from genuine
input errors, which raise :class:`SpecFormatError` or plain ``ValueError``.
"""


class KGFrameError(Exception):
    """Base class for all domain-level failures."""


class DimensionMismatch(KGFrameError):
    """Operands have incompatible shapes for the requested operation."""


class NotHermitian(KGFrameError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class ConvergenceFailure(KGFrameError):
    """An iterative matrix factorization exceeded its iteration cap."""


class RangeNotIncluded(KGFrameError):
    """range(U) is not contained in range(V), so no factor U = VQ exists."""


class NotKGFrame(KGFrameError):
    """The operator family is not a K-g-frame for the given K."""


class NotADual(KGFrameError):
    """A supposed alternate dual fails the duality identity."""


class HypothesisViolated(KGFrameError):
    """A named hypothesis of a theorem-shaped check failed.

    ``hypothesis`` carries the name of the failed premise so reports can
    say exactly which one broke.
    """

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        message = hypothesis if not detail else f"{hypothesis}: {detail}"
        super().__init__(message)


class NotAtomicForInputs(KGFrameError):
    """The system is not an atomic system for one of the given operators."""


class DegenerateCombination(KGFrameError):
    """The combined operator is zero; the result is trivially atomic."""


class OrthogonalityViolated(KGFrameError):
    """The two synthesis operators are not mutually orthogonal."""


class CommutationViolated(KGFrameError):
    """The surjective candidate does not commute with the adjoint of K."""


class NotSurjective(KGFrameError):
    """Neither weighting operator is surjective."""


class RangeHypothesisViolated(KGFrameError):
    """A required range inclusion between synthesis operators failed."""


class NotPositive(KGFrameError):
    """The perturbing operator is not Hermitian positive semidefinite."""


class NotParseval(KGFrameError):
    """A system required to be Parseval for K is not."""


class RankTooLarge(KGFrameError):
    """Requested range rank exceeds the rank of the target operator."""


class InsufficientCoefficientDim(KGFrameError):
    """The coefficient space is too small to carry a co-isometry onto H."""


class UnknownTheorem(KGFrameError):
    """The campaign identifier does not name a known verification campaign."""


class SpecFormatError(KGFrameError):
    """A frame-spec document is malformed; the message names the field."""

    def __init__(self, field: str, detail: str):
        self.field = field
        super().__init__(f"{field}: {detail}")
