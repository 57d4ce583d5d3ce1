"""Atomic systems and the constructors that preserve them.

A Bessel family is an atomic system for K when every K f admits a
norm-controlled coefficient representation through the family; in finite
dimensions this is the same as being a K-g-frame, and the minimal-norm
coefficients come from the pseudoinverse of the synthesis operator.  The
constructors combine systems or weight them by operators and report both a
predicted lower bound (from the relevant inequality) and the measured
optimal bound of the result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .douglas import min_majorization_constant, range_included
from .duality import canonical_k_dual
from .errors import (
    CommutationViolated,
    DegenerateCombination,
    DimensionMismatch,
    NotAtomicForInputs,
    NotHermitian,
    NotKGFrame,
    NotParseval,
    NotPositive,
    NotSurjective,
    OrthogonalityViolated,
    RangeHypothesisViolated,
)
from .gframe import (
    CoefficientVector,
    GFrameSystem,
    analysis,
    classify,
    frame_operator,
    optimal_k_lower_bound,
    synthesis,
)
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    _hermitian_part,
    _singular_values,
    adjoint,
    as_matrix,
    as_vector,
    operator_norm,
    pinv,
    psd_min_shift,
    rank,
)

__all__ = [
    "AtomicCertificate",
    "CombinedBound",
    "atomic_coefficients",
    "is_atomic_system",
    "combine_linear",
    "combine_product",
    "perturb_sum",
    "parseval_sum",
    "operator_weighted_sum",
    "positive_perturbation",
    "k_g_frame_via_frame_operator",
]


@dataclass(frozen=True, eq=False)
class AtomicCertificate:
    """Atomicity verdict with the coefficient bound and a witness dual.

    coefficient_bound is |pinv(T) K|, the smallest constant c such that the
    minimal coefficients satisfy |a| <= c |f|.  witness_dual is the
    canonical K-dual when the system is atomic, None otherwise.
    """

    is_atomic: bool
    coefficient_bound: float
    witness_dual: GFrameSystem | None


@dataclass(frozen=True)
class CombinedBound:
    """Predicted versus measured frame bounds for a combined system.

    holds is true iff predicted_lower <= measured_lower + psd_rel and
    measured_upper <= predicted_upper + psd_rel.  uncorrected_lower, when
    set, stores the lower-bound constant without the parallelogram factor
    of 2, kept for reporting.
    """

    predicted_lower: float
    predicted_upper: float
    measured_lower: float
    measured_upper: float
    holds: bool
    uncorrected_lower: float | None = None


def _check_square(sys: GFrameSystem, m, name: str) -> np.ndarray:
    m = as_matrix(m, name)
    n = sys.ambient_dim
    if m.shape != (n, n):
        raise DimensionMismatch(f"{name} has shape {m.shape}, expected ({n}, {n})")
    return m


def _require_atomic(sys: GFrameSystem, k: np.ndarray, tol: ToleranceConfig, label: str) -> None:
    if not range_included(k, synthesis(sys), tol):
        raise NotAtomicForInputs(f"the system is not an atomic system for {label}")


def atomic_coefficients(
    sys: GFrameSystem, k, f, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[CoefficientVector, float]:
    """Minimal-norm coefficients a with T a = K f, plus the bound constant.

    a = (pinv(T) K) f satisfies |a| <= c |f| with c = |pinv(T) K|, and any
    other coefficient vector reproducing K f has norm at least |a|.
    Raises NotKGFrame when no representation exists.
    """
    k = _check_square(sys, k, "K")
    f = as_vector(f, "f")
    if f.shape[0] != sys.ambient_dim:
        raise DimensionMismatch(f"f has length {f.shape[0]}, expected {sys.ambient_dim}")
    t = synthesis(sys)
    if not range_included(k, t, tol):
        raise NotKGFrame("range(K) escapes range(synthesis)")
    g = pinv(t, tol) @ k
    a = CoefficientVector.from_flat(sys.block_dims, g @ f)
    return a, operator_norm(g)


def is_atomic_system(sys: GFrameSystem, k, tol: ToleranceConfig = DEFAULT_TOL) -> AtomicCertificate:
    """Atomicity certificate: verdict, coefficient bound, witness dual."""
    k = _check_square(sys, k, "K")
    t = synthesis(sys)
    atomic = range_included(k, t, tol)
    bound = operator_norm(pinv(t, tol) @ k)
    witness = canonical_k_dual(sys, k, tol).dual if atomic else None
    return AtomicCertificate(is_atomic=atomic, coefficient_bound=bound, witness_dual=witness)


def _bound_holds(
    predicted_lower: float,
    predicted_upper: float,
    bounds,
    tol: ToleranceConfig,
) -> CombinedBound:
    holds = (
        predicted_lower <= bounds.lower + tol.psd_rel
        and bounds.upper <= predicted_upper + tol.psd_rel
        and bounds.is_k_g_frame
    )
    return CombinedBound(
        predicted_lower=predicted_lower,
        predicted_upper=predicted_upper,
        measured_lower=bounds.lower,
        measured_upper=bounds.upper,
        holds=holds,
    )


def combine_linear(
    sys: GFrameSystem, k1, k2, alpha, beta, tol: ToleranceConfig = DEFAULT_TOL
) -> CombinedBound:
    """Bound check for the combined operator alpha K1 + beta K2.

    predicted_lower = A1 A2 / (2 (A2 |alpha|^2 + A1 |beta|^2)), which is
    sharp in the scalar equality case; the constant without the factor 2
    is kept in uncorrected_lower for reporting.  Raises
    DegenerateCombination when the combination is the zero operator (the
    result is then trivially atomic and there is no inequality to check).
    """
    k1 = _check_square(sys, k1, "K1")
    k2 = _check_square(sys, k2, "K2")
    alpha = complex(alpha)
    beta = complex(beta)
    _require_atomic(sys, k1, tol, "K1")
    _require_atomic(sys, k2, tol, "K2")
    combined_k = alpha * k1 + beta * k2
    if np.linalg.norm(combined_k) == 0.0:
        raise DegenerateCombination(
            "alpha K1 + beta K2 = 0: trivially atomic; by the K = 0 convention "
            "the lower bound equals the Bessel bound"
        )
    a1 = optimal_k_lower_bound(sys, k1, tol)
    a2 = optimal_k_lower_bound(sys, k2, tol)
    denom = a2 * abs(alpha) ** 2 + a1 * abs(beta) ** 2
    predicted = a1 * a2 / (2.0 * denom) if denom > 0.0 else 0.0
    uncorrected = a1 * a2 / denom if denom > 0.0 else 0.0
    bounds = classify(sys, combined_k, tol)
    result = _bound_holds(predicted, bounds.upper, bounds, tol)
    return CombinedBound(
        predicted_lower=result.predicted_lower,
        predicted_upper=result.predicted_upper,
        measured_lower=result.measured_lower,
        measured_upper=result.measured_upper,
        holds=result.holds,
        uncorrected_lower=uncorrected,
    )


def combine_product(sys: GFrameSystem, k1, k2, tol: ToleranceConfig = DEFAULT_TOL) -> CombinedBound:
    """Bound check for the product operator K1 K2.

    predicted_lower = A1 / |K2*|^2; only atomicity for K1 is needed, K2 may
    be anything.  A zero product is trivially atomic and reports the
    measured bounds as the prediction.
    """
    k1 = _check_square(sys, k1, "K1")
    k2 = _check_square(sys, k2, "K2")
    _require_atomic(sys, k1, tol, "K1")
    product = k1 @ k2
    bounds = classify(sys, product, tol)
    if np.linalg.norm(product) == 0.0:
        return _bound_holds(bounds.lower, bounds.upper, bounds, tol)
    a1 = optimal_k_lower_bound(sys, k1, tol)
    predicted = a1 / operator_norm(k2) ** 2
    return _bound_holds(predicted, bounds.upper, bounds, tol)


def _check_same_structure(left: GFrameSystem, right: GFrameSystem) -> None:
    if left.ambient_dim != right.ambient_dim or left.block_dims != right.block_dims:
        raise DimensionMismatch("the two systems must share ambient and block dimensions")


def _cross_term_ok(left: GFrameSystem, right: GFrameSystem, tol: ToleranceConfig) -> bool:
    t_l = synthesis(left)
    t_g = synthesis(right)
    cross = np.linalg.norm(t_l @ adjoint(t_g))
    scale = max(operator_norm(t_l) * operator_norm(t_g), 1.0)
    return cross <= tol.residual_rel * scale


def _sigma_min(m: np.ndarray) -> float:
    s = _singular_values(m)
    return float(s[-1]) if s.size else 0.0


def perturb_sum(
    sys_l: GFrameSystem,
    sys_g: GFrameSystem,
    u,
    v,
    k,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[GFrameSystem, CombinedBound]:
    """Combined system with blocks L_i U + G_i V, under orthogonality.

    Requires T_L T_G* = 0 and at least one of U, V surjective and commuting
    with K*; the surviving witness side supplies the predicted lower bound
    A_w sigma_min(W)^2, and predicted_upper = B_L |U|^2 + B_G |V|^2.
    """
    _check_same_structure(sys_l, sys_g)
    u = _check_square(sys_l, u, "U")
    v = _check_square(sys_l, v, "V")
    k = _check_square(sys_l, k, "K")
    if not _cross_term_ok(sys_l, sys_g, tol):
        raise OrthogonalityViolated("T_L T_G* does not vanish within tolerance")

    n = sys_l.ambient_dim
    comm_tol = tol.residual_rel * max(np.linalg.norm(k), 1.0)

    def commutes(w: np.ndarray) -> bool:
        return np.linalg.norm(w @ adjoint(k) - adjoint(k) @ w) <= comm_tol

    surj_u = rank(u, tol) == n
    surj_v = rank(v, tol) == n
    if surj_u and commutes(u):
        witness_sys, witness_op = sys_l, u
    elif surj_v and commutes(v):
        witness_sys, witness_op = sys_g, v
    elif not (surj_u or surj_v):
        raise NotSurjective("neither U nor V is surjective")
    else:
        raise CommutationViolated("no surjective candidate commutes with K*")

    a_w = optimal_k_lower_bound(witness_sys, k, tol)
    predicted_lower = a_w * _sigma_min(witness_op) ** 2
    b_l = operator_norm(frame_operator(sys_l))
    b_g = operator_norm(frame_operator(sys_g))
    predicted_upper = b_l * operator_norm(u) ** 2 + b_g * operator_norm(v) ** 2

    blocks = tuple(
        op_l @ u + op_g @ v for op_l, op_g in zip(sys_l.operators, sys_g.operators)
    )
    combined = GFrameSystem(n, sys_l.block_dims, blocks)
    bounds = classify(combined, k, tol)
    return combined, _bound_holds(predicted_lower, predicted_upper, bounds, tol)


def parseval_sum(
    sys_l: GFrameSystem,
    sys_g: GFrameSystem,
    k,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[GFrameSystem, float]:
    """Blockwise sum of two orthogonal Parseval K-g-frames; 2-tight result.

    Both inputs must satisfy S = K K* within tolerance and have vanishing
    cross synthesis; the combined frame operator then equals 2 K K*, which
    is verified before returning tightness 2.
    """
    _check_same_structure(sys_l, sys_g)
    k = _check_square(sys_l, k, "K")
    kk = _hermitian_part(k @ adjoint(k))
    kk_scale = max(np.linalg.norm(kk), 1.0)
    for label, sys in (("first", sys_l), ("second", sys_g)):
        gap = np.linalg.norm(frame_operator(sys) - kk)
        if gap > tol.residual_rel * kk_scale:
            raise NotParseval(f"the {label} system is not Parseval for K (gap {gap:.3e})")
    if not _cross_term_ok(sys_l, sys_g, tol):
        raise OrthogonalityViolated("T_L T_G* does not vanish within tolerance")
    blocks = tuple(a + b for a, b in zip(sys_l.operators, sys_g.operators))
    combined = GFrameSystem(sys_l.ambient_dim, sys_l.block_dims, blocks)
    gap = np.linalg.norm(frame_operator(combined) - 2.0 * kk)
    if gap > tol.residual_rel * kk_scale:
        raise NotParseval(f"combined frame operator is not 2 K K* (gap {gap:.3e})")
    return combined, 2.0


def operator_weighted_sum(
    sys_l: GFrameSystem,
    sys_g: GFrameSystem,
    u1,
    u2,
    k,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[GFrameSystem, CombinedBound]:
    """Combined system with blocks L_i U1 + G_i U2 under range hypotheses.

    Each side must satisfy range(T_i) <= range(U_i* T_i); a side whose
    weighted synthesis U_i* T_i vanishes contributes nothing.  For each
    surviving side the majorization K K* <= lam_i (U_i* T_i)(U_i* T_i)*
    yields the predicted lower bound sum of 1 / lam_i.
    """
    _check_same_structure(sys_l, sys_g)
    u1 = _check_square(sys_l, u1, "U1")
    u2 = _check_square(sys_l, u2, "U2")
    k = _check_square(sys_l, k, "K")
    if not _cross_term_ok(sys_l, sys_g, tol):
        raise OrthogonalityViolated("T_L T_G* does not vanish within tolerance")

    sides = []
    for label, sys, u in (("first", sys_l, u1), ("second", sys_g, u2)):
        t = synthesis(sys)
        weighted = adjoint(u) @ t
        if not range_included(t, weighted, tol):
            raise RangeHypothesisViolated(
                f"range(T_{label}) escapes range(U_{label}* T_{label})"
            )
        if operator_norm(weighted) > 0.0:
            sides.append((label, weighted))

    n = sys_l.ambient_dim
    blocks = tuple(
        op_l @ u1 + op_g @ u2 for op_l, op_g in zip(sys_l.operators, sys_g.operators)
    )
    combined = GFrameSystem(n, sys_l.block_dims, blocks)
    bounds = classify(combined, k, tol)

    if np.linalg.norm(k) == 0.0:
        return combined, _bound_holds(bounds.lower, bounds.upper, bounds, tol)
    if not sides:
        raise RangeHypothesisViolated("both weighted synthesis operators vanish but K != 0")
    predicted_lower = 0.0
    for label, weighted in sides:
        if not range_included(k, weighted, tol):
            raise RangeHypothesisViolated(
                f"range(K) escapes range(U_{label}* T_{label})"
            )
        lam = min_majorization_constant(k, weighted, tol)
        predicted_lower += 1.0 / lam
    b_l = operator_norm(frame_operator(sys_l))
    b_g = operator_norm(frame_operator(sys_g))
    predicted_upper = b_l * operator_norm(u1) ** 2 + b_g * operator_norm(u2) ** 2
    return combined, _bound_holds(predicted_lower, predicted_upper, bounds, tol)


def positive_perturbation(
    sys: GFrameSystem,
    u,
    k,
    n_power: int = 1,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[GFrameSystem, float, float]:
    """Perturb blocks to L_i (I + U^n) for a positive operator U.

    Returns the combined system, the relative residual of the identity
    S_combined = (I + U^n)* S (I + U^n) (which holds unconditionally), and
    the measured optimal lower bound of the combined system for K.  The
    lower bound is reported without asserting it: whether positivity of U
    preserves the K-g-frame property in general is left to the campaigns.
    """
    u = _check_square(sys, u, "U")
    k = _check_square(sys, k, "K")
    if n_power < 1:
        raise ValueError("n_power must be at least 1")
    try:
        is_psd, _ = psd_min_shift(u, tol)
    except NotHermitian as exc:
        raise NotPositive(str(exc)) from exc
    if not is_psd:
        raise NotPositive("U has a negative eigenvalue beyond tolerance")
    _require_atomic(sys, k, tol, "K")

    n = sys.ambient_dim
    w = np.eye(n, dtype=np.complex128) + np.linalg.matrix_power(u, n_power)
    blocks = tuple(op @ w for op in sys.operators)
    combined = GFrameSystem(n, sys.block_dims, blocks)
    s = frame_operator(sys)
    predicted = adjoint(w) @ s @ w
    denom = np.linalg.norm(s)
    residual = float(np.linalg.norm(frame_operator(combined) - predicted) / (denom if denom > 0 else 1.0))
    measured_lower = optimal_k_lower_bound(combined, k, tol)
    return combined, residual, measured_lower


def k_g_frame_via_frame_operator(
    sys: GFrameSystem, k, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[bool, float]:
    """K-g-frame test through the operator inequality S >= lam K K*.

    Returns (holds, lambda_star) where lambda_star is the largest feasible
    constant; holds agrees with the range-test classification (K = 0 is
    vacuously positive).
    """
    k = _check_square(sys, k, "K")
    lambda_star = optimal_k_lower_bound(sys, k, tol)
    holds = bool(np.linalg.norm(k) == 0.0 or lambda_star > tol.psd_rel)
    return holds, lambda_star
