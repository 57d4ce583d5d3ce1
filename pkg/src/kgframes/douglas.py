"""Douglas-type factorization: range inclusion tests and minimal factors.

For operators U, V with matching codomain the following are equivalent:
range inclusion R(U) <= R(V), majorization UU* <= mu VV* for some mu >= 0,
and existence of a factor Q with U = VQ.  When they hold there is a unique
minimal factor, realized here by the Moore-Penrose least-squares solution
Q = pinv(V) U: it is the one factor with R(Q) <= R(V*) and N(Q) = N(U),
and its squared operator norm equals the minimal majorization constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, RangeNotIncluded
from .numerics import (
    DEFAULT_TOL,
    _PENCIL_FLOOR,
    ToleranceConfig,
    _bisect_min_true,
    _hermitian_part,
    _singular_values,
    adjoint,
    as_matrix,
    operator_norm,
    pinv,
    psd_min_shift,
    range_basis,
    rank,
)

__all__ = ["DouglasFactor", "range_included", "douglas_factor", "min_majorization_constant"]


@dataclass(frozen=True, eq=False)
class DouglasFactor:
    """Minimal-norm solution of U = V Q.

    mu_star is the squared operator norm of Q, which equals the minimal
    constant mu with UU* <= mu VV*.  residual is the relative Frobenius
    reconstruction error of U = VQ.
    """

    Q: np.ndarray
    mu_star: float
    residual: float


def range_included(u, v, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff range(u) is contained in range(v).

    Decided as rank([v | u]) == rank(v) under the shared singular-value
    cutoff, so the answer matches what pinv and orth_projector see.
    """
    u = as_matrix(u, "U")
    v = as_matrix(v, "V")
    if u.shape[0] != v.shape[0]:
        raise DimensionMismatch(
            f"U and V must share a codomain: {u.shape[0]} rows vs {v.shape[0]} rows"
        )
    return rank(np.hstack([v, u]), tol) == rank(v, tol)


def douglas_factor(u, v, tol: ToleranceConfig = DEFAULT_TOL) -> DouglasFactor:
    """Minimal factor Q with U = V Q, or RangeNotIncluded if none exists.

    Q = pinv(V) U is the unique solution whose range lies in range(V*);
    any other solution Q' satisfies |Q'|_F^2 = |Q|_F^2 + |Q' - Q|_F^2.
    """
    u = as_matrix(u, "U")
    v = as_matrix(v, "V")
    if not range_included(u, v, tol):
        raise RangeNotIncluded("range(U) is not contained in range(V)")
    q = pinv(v, tol) @ u
    residual = float(np.linalg.norm(u - v @ q) / max(np.linalg.norm(u), 1.0))
    if residual > tol.residual_rel:
        raise RangeNotIncluded(
            f"factor reconstruction residual {residual:.3e} exceeds tolerance; "
            "the rank test and the numeric factorization disagree"
        )
    return DouglasFactor(Q=q, mu_star=operator_norm(q) ** 2, residual=residual)


def min_majorization_constant(u, v, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """inf{mu >= 0 : UU* <= mu VV*}, by bisection on the smallest eigenvalue.

    The pencil mu VV* - UU* is deflated onto range(V) before the eigenvalue
    test; outside that subspace both quadratic forms vanish once the range
    test has passed, and deflation keeps the pencil nonsingular so the
    feasibility cut can sit near machine precision.  The search is capped at
    (|U| / sigma_min^+(V))^2 + 1; a cap miss is reported as RangeNotIncluded
    so the numeric and rank-based range answers stay consistent.
    """
    u = as_matrix(u, "U")
    v = as_matrix(v, "V")
    if not range_included(u, v, tol):
        raise RangeNotIncluded("range(U) is not contained in range(V)")
    norm_u = operator_norm(u)
    if norm_u == 0.0:
        return 0.0
    s = _singular_values(v)
    smin = float(np.min(s[s >= tol.rank_rel * s[0]]))
    cap = (norm_u / smin) ** 2 + 1.0

    b = range_basis(v, tol)
    wu = adjoint(u) @ b
    wv = adjoint(v) @ b
    uu = _hermitian_part(wu.conj().T @ wu)
    vv = _hermitian_part(wv.conj().T @ wv)
    # Feasibility cut near machine precision: absorbs eigensolver roundoff
    # only, well below psd_rel, so the result agrees with the closed-form
    # |Q|^2 to ~1e-12 relative.
    floor = -_PENCIL_FLOOR * max(operator_norm(uu), 1.0)

    def feasible(mu: float) -> bool:
        _, lam_min = psd_min_shift(mu * vv - uu, tol)
        return lam_min >= floor

    if not feasible(cap):
        raise RangeNotIncluded(
            "no majorization constant below the search cap; range inclusion fails numerically"
        )
    return _bisect_min_true(feasible, 0.0, cap)
