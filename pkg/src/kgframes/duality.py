"""K-dual Bessel g-sequences and the canonical minimal-norm dual.

A family G is a K-dual of L when K = T_L T_G*, i.e. K f = sum_i L_i* G_i f.
A K-dual exists iff the family is a K-g-frame, and among all K-duals there
is a unique pointwise-minimal one: feed U = K, V = T_L through the Douglas
factorization and read the dual blocks off the rows of the minimal factor.
Its squared synthesis norm is the reciprocal of the optimal lower frame
bound, and every other K-dual dominates it in norm on every vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .douglas import douglas_factor, range_included
from .errors import DimensionMismatch, HypothesisViolated, NotADual, NotKGFrame
from .gframe import (
    GFrameSystem,
    analysis,
    frame_operator,
    optimal_k_lower_bound,
    synthesis,
)
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    adjoint,
    as_matrix,
    operator_norm,
    orth_projector,
    range_basis,
)

__all__ = [
    "KDualPair",
    "is_k_dual",
    "canonical_k_dual",
    "dual_minimality_check",
    "subspace_dual_implies_k_g_frame",
]


@dataclass(frozen=True, eq=False)
class KDualPair:
    """A primal system, a dual system, and the operator they reconstruct.

    reconstruction_residual is |T_primal T_dual* - K|_F / max(|K|_F, 1) and
    stays below the residual tolerance for pairs built by this module.
    """

    primal: GFrameSystem
    dual: GFrameSystem
    K: np.ndarray
    reconstruction_residual: float

    def __post_init__(self):
        if (
            self.primal.ambient_dim != self.dual.ambient_dim
            or self.primal.block_dims != self.dual.block_dims
        ):
            raise DimensionMismatch("primal and dual must share ambient and block dimensions")


def _check_pair_shapes(primal: GFrameSystem, dual: GFrameSystem, k) -> np.ndarray:
    if primal.ambient_dim != dual.ambient_dim or primal.block_dims != dual.block_dims:
        raise DimensionMismatch("primal and dual must share ambient and block dimensions")
    k = as_matrix(k, "K")
    n = primal.ambient_dim
    if k.shape != (n, n):
        raise DimensionMismatch(f"K has shape {k.shape}, expected ({n}, {n})")
    return k


def _reconstruction_residual(primal: GFrameSystem, dual: GFrameSystem, k: np.ndarray) -> float:
    delta = synthesis(primal) @ analysis(dual) - k
    return float(np.linalg.norm(delta) / max(np.linalg.norm(k), 1.0))


def is_k_dual(primal: GFrameSystem, dual: GFrameSystem, k, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff K = T_primal T_dual* within the residual tolerance."""
    k = _check_pair_shapes(primal, dual, k)
    return _reconstruction_residual(primal, dual, k) <= tol.residual_rel


def canonical_k_dual(sys: GFrameSystem, k, tol: ToleranceConfig = DEFAULT_TOL) -> KDualPair:
    """Minimal-norm K-dual of a K-g-frame.

    The Douglas factor Q solving K = T Q is the analysis operator of the
    dual; block i of the dual is the i-th block row of Q.  Raises
    NotKGFrame when range(K) is not contained in range(T), in which case no
    K-dual exists at all.
    """
    k = as_matrix(k, "K")
    n = sys.ambient_dim
    if k.shape != (n, n):
        raise DimensionMismatch(f"K has shape {k.shape}, expected ({n}, {n})")
    t = synthesis(sys)
    if not range_included(k, t, tol):
        raise NotKGFrame("range(K) escapes range(synthesis); no K-dual exists")
    q = douglas_factor(k, t, tol).Q
    offsets = sys.block_offsets()
    blocks = tuple(q[offsets[i] : offsets[i + 1], :] for i in range(len(sys.block_dims)))
    dual = GFrameSystem(n, sys.block_dims, blocks)
    return KDualPair(
        primal=sys,
        dual=dual,
        K=k,
        reconstruction_residual=_reconstruction_residual(sys, dual, k),
    )


def dual_minimality_check(
    pair: KDualPair,
    alternates,
    probes,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> bool:
    """Check that the pair's dual is pointwise-minimal among the alternates.

    Every alternate must itself be a K-dual of the primal (NotADual
    otherwise).  Returns True iff for each alternate G and each probe f
    |T_dual* f| <= |T_G* f| + residual_rel |f|, and the synthesis operator
    norms satisfy the same inequality.
    """
    q = analysis(pair.dual)
    norm_q = operator_norm(q)
    probe_cols = (
        np.stack([np.asarray(p, dtype=np.complex128) for p in probes], axis=1)
        if probes
        else np.zeros((pair.primal.ambient_dim, 0), dtype=np.complex128)
    )
    q_norms = np.linalg.norm(q @ probe_cols, axis=0)
    f_norms = np.linalg.norm(probe_cols, axis=0)
    for alt in alternates:
        if not is_k_dual(pair.primal, alt, pair.K, tol):
            raise NotADual("alternate fails the K-dual identity")
        g = analysis(alt)
        if norm_q > operator_norm(g) + tol.residual_rel:
            return False
        g_norms = np.linalg.norm(g @ probe_cols, axis=0)
        if np.any(q_norms > g_norms + tol.residual_rel * f_norms):
            return False
    return True


def subspace_dual_implies_k_g_frame(
    sys: GFrameSystem,
    dual_on_range: GFrameSystem,
    k,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[bool, float, float]:
    """Lower-bound test for systems with a dual g-frame on range(K).

    Hypotheses checked (HypothesisViolated names the failed one):
      * duality on range(K): P (sum_i G_i* L_i) g = g for every g in an
        orthonormal basis of range(K), with P the orthogonal projector
        onto range(K);
      * invariance: S(range(K)) stays inside range(K).

    Returns (holds, predicted_lower, measured_lower) where predicted_lower
    is 1 / (D |K|^2) with D the Bessel bound of the dual family, and holds
    means the measured optimal lower bound is at least the prediction.
    """
    k = _check_pair_shapes(sys, dual_on_range, k)
    p = orth_projector(k, tol)
    s = frame_operator(sys)
    pairing = synthesis(dual_on_range) @ analysis(sys)

    basis = range_basis(k, tol)
    if basis.shape[1]:
        recon = p @ (pairing @ basis) - basis
        worst = float(np.max(np.linalg.norm(recon, axis=0)))
        if worst > tol.residual_rel:
            raise HypothesisViolated(
                "duality on range(K)",
                f"worst reconstruction error {worst:.3e} on the range basis",
            )
    n = sys.ambient_dim
    leak = np.linalg.norm((np.eye(n) - p) @ s @ p)
    if leak > tol.residual_rel * max(np.linalg.norm(s), 1.0):
        raise HypothesisViolated(
            "invariance of range(K) under the frame operator",
            f"leakage norm {leak:.3e}",
        )

    d = operator_norm(frame_operator(dual_on_range))
    k_norm = operator_norm(k)
    denom = d * k_norm**2
    predicted = 1.0 / denom if denom > 0.0 else 0.0
    measured = optimal_k_lower_bound(sys, k, tol)
    holds = measured >= predicted - tol.psd_rel
    return holds, predicted, measured
