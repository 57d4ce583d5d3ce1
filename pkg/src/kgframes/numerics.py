"""Dense complex-matrix engine with an explicit tolerance policy.

Operators are plain ``numpy.ndarray`` values of dtype ``complex128`` in
row-major layout; this module is the only place that talks to LAPACK.
Every yes/no decision on floating-point data (rank, positivity, equality
of operators) routes through one shared :class:`ToleranceConfig` so that
range and rank answers stay consistent across the whole package.

All equality checks are relative-residual checks with an absolute floor
of 1: exact operator identities are unattainable in floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, NotHermitian

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOL",
    "as_matrix",
    "as_vector",
    "adjoint",
    "hermitian_eig",
    "svd",
    "pinv",
    "operator_norm",
    "psd_min_shift",
    "rank",
    "orth_projector",
    "range_basis",
    "null_basis",
]

# Relative floor used by the bisection feasibility cuts.  It only has to
# absorb eigensolver roundoff (~1e-16 * scale), so it sits well below the
# user-facing psd_rel and keeps bisection results accurate to ~1e-12.
_PENCIL_FLOOR = 1e-13


@dataclass(frozen=True)
class ToleranceConfig:
    """Shared tolerance policy.

    rank_rel
        Relative singular-value cutoff for all rank decisions (pinv, rank,
        orth_projector, range tests).  One cutoff everywhere keeps range
        inclusion answers self-consistent across modules.
    psd_rel
        Relative eigenvalue floor for positive-semidefiniteness verdicts.
    residual_rel
        Relative residual bound for operator equality checks.
    """

    rank_rel: float = 1e-10
    psd_rel: float = 1e-9
    residual_rel: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "psd_rel", "residual_rel"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise ValueError(f"{name} must lie strictly between 0 and 1, got {value}")


DEFAULT_TOL = ToleranceConfig()


def as_matrix(value, name: str = "matrix") -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting non-finite entries."""
    arr = np.asarray(value, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    return arr


def as_vector(value, name: str = "vector") -> np.ndarray:
    """Coerce to a 1-D complex128 array, rejecting non-finite entries."""
    arr = np.asarray(value, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-dimensional, got ndim={arr.ndim}")
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    return arr


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def _hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def _require_hermitian(m: np.ndarray, tol: ToleranceConfig, name: str) -> np.ndarray:
    if m.shape[0] != m.shape[1]:
        raise NotHermitian(f"{name} is not square: shape {m.shape}")
    scale = np.linalg.norm(m)
    if np.linalg.norm(m - m.conj().T) > tol.residual_rel * max(scale, 1.0):
        raise NotHermitian(f"{name} deviates from its adjoint beyond tolerance")
    return _hermitian_part(m)


def hermitian_eig(m, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with real eigenvalues in
    ascending order and unitary eigenvector columns, so that
    ``m @ V == V @ diag(w)`` up to the residual tolerance.

    Raises NotHermitian when ``m`` deviates from its adjoint beyond
    ``residual_rel`` relative to its Frobenius norm.
    """
    m = as_matrix(m)
    h = _require_hermitian(m, tol, "matrix")
    if h.size == 0:
        return np.zeros(h.shape[0]), np.zeros(h.shape, dtype=np.complex128)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails here
        raise ConvergenceFailure(str(exc)) from exc
    return w, v


def svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin singular value decomposition ``m = U @ diag(s) @ V.conj().T``.

    Singular values come back in descending order; U and V carry
    orthonormal columns.
    """
    m = as_matrix(m)
    if m.size == 0:
        k = min(m.shape)
        return (
            np.zeros((m.shape[0], k), dtype=np.complex128),
            np.zeros(k),
            np.zeros((m.shape[1], k), dtype=np.complex128),
        )
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD did not converge: {exc}") from exc
    return u, s, vh.conj().T


def _singular_values(m: np.ndarray) -> np.ndarray:
    if m.size == 0:
        return np.zeros(0)
    try:
        return np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD did not converge: {exc}") from exc


def pinv(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse with the shared rank cutoff.

    Singular values below ``rank_rel * sigma_max`` are treated as zero, so
    pinv, rank and orth_projector agree on what the range of a matrix is.
    A zero matrix maps to the zero matrix of transposed shape.
    """
    m = as_matrix(m)
    if m.size == 0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=np.complex128)
    u, s, v = svd(m)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((m.shape[1], m.shape[0]), dtype=np.complex128)
    keep = s >= tol.rank_rel * s[0]
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return (v * inv) @ u.conj().T


def operator_norm(m) -> float:
    """Largest singular value (spectral norm); 0 for empty matrices."""
    s = _singular_values(as_matrix(m))
    return float(s[0]) if s.size else 0.0


def psd_min_shift(m, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[bool, float]:
    """Positive-semidefiniteness verdict plus the smallest eigenvalue.

    ``is_psd`` is true iff ``lambda_min >= -psd_rel * max(lambda_max, 1)``,
    a relative floor so that matrices that are PSD up to roundoff pass.
    Raises NotHermitian for inputs that are not Hermitian within tolerance.
    """
    m = as_matrix(m)
    h = _require_hermitian(m, tol, "matrix")
    if h.size == 0:
        return True, 0.0
    w = np.linalg.eigvalsh(h)
    lam_min = float(w[0])
    lam_max = float(w[-1])
    return lam_min >= -tol.psd_rel * max(lam_max, 1.0), lam_min


def rank(m, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Numerical rank: count of singular values >= rank_rel * sigma_max."""
    s = _singular_values(as_matrix(m))
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s >= tol.rank_rel * s[0]))


def range_basis(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of range(m) as columns (rank-revealing SVD)."""
    m = as_matrix(m)
    u, s, _ = svd(m)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((m.shape[0], 0), dtype=np.complex128)
    r = int(np.count_nonzero(s >= tol.rank_rel * s[0]))
    return u[:, :r]


def null_basis(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the null space of m as columns."""
    m = as_matrix(m)
    if m.size == 0:
        return np.eye(m.shape[1], dtype=np.complex128)
    u, s, vh = np.linalg.svd(m, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        r = 0
    else:
        r = int(np.count_nonzero(s >= tol.rank_rel * s[0]))
    return vh.conj().T[:, r:]


def orth_projector(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto range(m): Hermitian, idempotent."""
    b = range_basis(m, tol)
    if b.shape[1] == 0:
        return np.zeros((b.shape[0], b.shape[0]), dtype=np.complex128)
    return b @ b.conj().T


def _bisect_max_true(predicate, lo: float, hi: float, iters: int = 60) -> float:
    """Largest x in [lo, hi] with predicate true, for predicates that are
    true on an initial segment [lo, x*] and false beyond it."""
    if predicate(hi):
        return hi
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _bisect_min_true(predicate, lo: float, hi: float, iters: int = 60) -> float:
    """Smallest x in [lo, hi] with predicate true, for predicates that are
    false on an initial segment and true from x* onward."""
    if predicate(lo):
        return lo
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return hi
