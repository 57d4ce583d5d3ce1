"""g-frame systems over finite-dimensional complex Hilbert spaces.

A g-frame system is a finite family of operators ``L_i : C^n -> C^{m_i}``.
Its synthesis operator stacks the adjoints ``[L_1* | ... | L_N*]`` and maps
the coefficient space (the direct sum of the C^{m_i}) back into C^n; the
frame operator is S = sum_i L_i* L_i.  Classification answers, for a given
n x n operator K, whether the family satisfies

    A |K* f|^2  <=  sum_i |L_i f|^2  <=  B |f|^2     for all f,

together with the optimal constants.  The lower constant is the largest
``lam`` with S >= lam K K* (a generalized eigenvalue problem solved by
bisection over positive-semidefiniteness of the pencil), and positivity of
that constant is equivalent to range(K) <= range(synthesis).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .douglas import range_included
from .errors import DimensionMismatch
from .numerics import (
    DEFAULT_TOL,
    _PENCIL_FLOOR,
    ToleranceConfig,
    _bisect_max_true,
    _hermitian_part,
    adjoint,
    as_matrix,
    as_vector,
    operator_norm,
    psd_min_shift,
    range_basis,
    rank,
)

__all__ = [
    "GFrameSystem",
    "CoefficientVector",
    "FrameBounds",
    "InducedFrame",
    "synthesis",
    "analysis",
    "frame_operator",
    "classify",
    "optimal_k_lower_bound",
    "induced_frame",
    "induced_frame_bounds",
]


@dataclass(frozen=True, eq=False)
class GFrameSystem:
    """Finite family of block operators L_i of shape (m_i, n)."""

    ambient_dim: int
    block_dims: tuple[int, ...]
    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.ambient_dim < 0:
            raise ValueError("ambient_dim must be nonnegative")
        dims = tuple(int(m) for m in self.block_dims)
        if len(dims) < 1:
            raise ValueError("a system needs at least one block")
        ops = tuple(as_matrix(op, f"operator[{i}]") for i, op in enumerate(self.operators))
        if len(ops) != len(dims):
            raise DimensionMismatch(
                f"{len(ops)} operators for {len(dims)} block dimensions"
            )
        for i, (m, op) in enumerate(zip(dims, ops)):
            if op.shape != (m, self.ambient_dim):
                raise DimensionMismatch(
                    f"operator[{i}] has shape {op.shape}, expected ({m}, {self.ambient_dim})"
                )
        for op in ops:
            op.setflags(write=False)
        object.__setattr__(self, "block_dims", dims)
        object.__setattr__(self, "operators", ops)

    @classmethod
    def from_operators(cls, operators) -> "GFrameSystem":
        """Build a system from a nonempty list of (m_i, n) arrays."""
        ops = [as_matrix(op, f"operator[{i}]") for i, op in enumerate(operators)]
        if not ops:
            raise ValueError("a system needs at least one block")
        n = ops[0].shape[1]
        return cls(n, tuple(op.shape[0] for op in ops), tuple(ops))

    @property
    def coefficient_dim(self) -> int:
        return sum(self.block_dims)

    def block_offsets(self) -> list[int]:
        """Start offsets of each block inside the stacked coefficient space."""
        offsets = [0]
        for m in self.block_dims:
            offsets.append(offsets[-1] + m)
        return offsets


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """Element of the coefficient space, kept in per-block form."""

    block_dims: tuple[int, ...]
    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = tuple(int(m) for m in self.block_dims)
        blocks = tuple(as_vector(b, f"block[{i}]") for i, b in enumerate(self.blocks))
        if len(blocks) != len(dims):
            raise DimensionMismatch(f"{len(blocks)} blocks for {len(dims)} block dimensions")
        for i, (m, b) in enumerate(zip(dims, blocks)):
            if b.shape != (m,):
                raise DimensionMismatch(f"block[{i}] has length {b.shape[0]}, expected {m}")
        for b in blocks:
            b.setflags(write=False)
        object.__setattr__(self, "block_dims", dims)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_flat(cls, block_dims, flat) -> "CoefficientVector":
        flat = as_vector(flat, "coefficients")
        dims = tuple(int(m) for m in block_dims)
        if flat.shape[0] != sum(dims):
            raise DimensionMismatch(
                f"flat vector of length {flat.shape[0]} does not fill blocks of total {sum(dims)}"
            )
        blocks, pos = [], 0
        for m in dims:
            blocks.append(flat[pos : pos + m].copy())
            pos += m
        return cls(dims, tuple(blocks))

    def to_flat(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros(0, dtype=np.complex128)
        return np.concatenate(self.blocks)

    def norm(self) -> float:
        return float(np.linalg.norm(self.to_flat()))


@dataclass(frozen=True)
class FrameBounds:
    """Optimal constants and classification flags for one (system, K) pair.

    ``lower`` is the largest constant in the weighted lower inequality and
    ``upper`` the smallest Bessel constant.  For K = 0 every family
    qualifies vacuously and ``lower`` is reported as ``upper`` by
    convention.  ``tightness`` is the constant t with S = t K K* when one
    exists (1 for Parseval), else None.
    """

    lower: float
    upper: float
    is_bessel: bool
    is_g_frame: bool
    is_k_g_frame: bool
    is_parseval: bool
    tightness: float | None = None

    def __post_init__(self):
        if self.lower < 0 or self.upper < 0:
            raise ValueError("frame bounds must be nonnegative")
        if self.is_parseval and self.tightness != 1.0:
            raise ValueError("a Parseval classification must carry tightness 1")


@dataclass(frozen=True, eq=False)
class InducedFrame:
    """Plain vector frame carrying the columns of the block adjoints.

    Vectors are ordered block-major: block i contributes the columns of
    L_i* against the standard basis of C^{m_i}.
    """

    vectors: tuple[np.ndarray, ...]

    def __post_init__(self):
        vecs = tuple(as_vector(v, f"vector[{i}]") for i, v in enumerate(self.vectors))
        for v in vecs:
            v.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)


def synthesis(sys: GFrameSystem) -> np.ndarray:
    """Synthesis operator [L_1* | ... | L_N*], shape (n, sum m_i).

    Applied to a stacked coefficient vector it returns sum_i L_i* f_i.
    """
    return np.hstack([adjoint(op) for op in sys.operators])


def analysis(sys: GFrameSystem) -> np.ndarray:
    """Analysis operator, the adjoint of synthesis: f maps to the stack of L_i f."""
    return np.vstack(list(sys.operators))


def frame_operator(sys: GFrameSystem) -> np.ndarray:
    """Frame operator S = sum_i L_i* L_i, Hermitian positive semidefinite."""
    n = sys.ambient_dim
    s = np.zeros((n, n), dtype=np.complex128)
    for op in sys.operators:
        s += adjoint(op) @ op
    return _hermitian_part(s)


def _check_k(sys: GFrameSystem, k, name: str = "K") -> np.ndarray:
    k = as_matrix(k, name)
    n = sys.ambient_dim
    if k.shape != (n, n):
        raise DimensionMismatch(f"{name} has shape {k.shape}, expected ({n}, {n})")
    return k


def _lambda_max(h: np.ndarray) -> float:
    if h.size == 0:
        return 0.0
    return float(max(np.linalg.eigvalsh(_hermitian_part(h))[-1], 0.0))


def optimal_k_lower_bound(sys: GFrameSystem, k, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Largest lam >= 0 with S >= lam K K*, by PSD bisection on the pencil.

    Returns 0 when range(K) escapes range(synthesis) (no positive constant
    exists), and lambda_max(S) when K = 0 (every constant works; the value
    is capped at the Bessel bound by convention).  The pencil is deflated
    onto range(synthesis) so rank-deficient systems do not poison the
    eigenvalue test.  Cross-checkable against 1 / |pinv(T) K|^2.
    """
    k = _check_k(sys, k)
    s = frame_operator(sys)
    upper = _lambda_max(s)
    if np.linalg.norm(k) == 0.0:
        return upper
    t = synthesis(sys)
    if not range_included(k, t, tol):
        return 0.0
    m = _hermitian_part(k @ adjoint(k))
    eig_m = np.linalg.eigvalsh(m)
    positive = eig_m[eig_m >= tol.rank_rel * eig_m[-1]]
    lam_plus = float(positive[0])
    hi = upper / lam_plus if lam_plus > 0 else 0.0
    if hi <= 0.0:
        return 0.0

    b = range_basis(t, tol)
    w = adjoint(t) @ b
    s_r = _hermitian_part(w.conj().T @ w)
    m_r = _hermitian_part(b.conj().T @ m @ b)
    floor = -_PENCIL_FLOOR * max(operator_norm(s_r), 1.0)

    def feasible(lam: float) -> bool:
        _, lam_min = psd_min_shift(s_r - lam * m_r, tol)
        return lam_min >= floor

    return _bisect_max_true(feasible, 0.0, hi)


def _tightness(s: np.ndarray, kkadj: np.ndarray, tol: ToleranceConfig) -> float | None:
    trace_m = float(np.trace(kkadj).real)
    if trace_m <= 0.0:
        return None
    t = float(np.trace(s).real) / trace_m
    if np.linalg.norm(s - t * kkadj) <= tol.residual_rel * max(np.linalg.norm(s), 1.0):
        return t
    return None


def classify(sys: GFrameSystem, k, tol: ToleranceConfig = DEFAULT_TOL) -> FrameBounds:
    """Full classification of a system against a fixed operator K.

    upper is lambda_max(S), the optimal Bessel constant; every finite
    family with finite entries is Bessel.  The K-g-frame verdict is the
    range test range(K) <= range(synthesis); lower is the optimal constant
    from :func:`optimal_k_lower_bound`.  Parseval means S = K K* within the
    residual tolerance.
    """
    k = _check_k(sys, k)
    t = synthesis(sys)
    s = frame_operator(sys)
    upper = _lambda_max(s)
    is_kgf = range_included(k, t, tol)
    lower = optimal_k_lower_bound(sys, k, tol) if is_kgf else 0.0
    is_gf = rank(t, tol) == sys.ambient_dim
    kkadj = _hermitian_part(k @ adjoint(k))
    is_parseval = bool(
        np.linalg.norm(s - kkadj) <= tol.residual_rel * max(np.linalg.norm(kkadj), 1.0)
    )
    tightness = 1.0 if is_parseval else _tightness(s, kkadj, tol)
    return FrameBounds(
        lower=lower,
        upper=upper,
        is_bessel=True,
        is_g_frame=is_gf,
        is_k_g_frame=is_kgf,
        is_parseval=is_parseval,
        tightness=tightness,
    )


def induced_frame(sys: GFrameSystem) -> InducedFrame:
    """Vector frame induced by the system against standard block bases.

    Vector (i, j) is column j of L_i*; the choice of orthonormal block
    bases does not move frame bounds, so the standard ones are fixed.
    """
    vectors = []
    for op in sys.operators:
        a = adjoint(op)
        for j in range(a.shape[1]):
            vectors.append(a[:, j].copy())
    return InducedFrame(tuple(vectors))


def induced_frame_bounds(ind: InducedFrame, tol: ToleranceConfig = DEFAULT_TOL) -> FrameBounds:
    """Optimal frame bounds of the induced vector family.

    These are the eigenvalue extremes of G = sum_k u_k u_k*, and they agree
    with the g-frame bounds of the source system.
    """
    if not ind.vectors:
        raise ValueError("induced frame has no vectors")
    n = ind.vectors[0].shape[0]
    g = np.zeros((n, n), dtype=np.complex128)
    for u in ind.vectors:
        g += np.outer(u, u.conj())
    g = _hermitian_part(g)
    if g.size == 0:
        eigs = np.zeros(0)
    else:
        eigs = np.linalg.eigvalsh(g)
    upper = float(max(eigs[-1], 0.0)) if eigs.size else 0.0
    is_frame = rank(g, tol) == n
    lower = float(max(eigs[0], 0.0)) if (eigs.size and is_frame) else 0.0
    eye = np.eye(n, dtype=np.complex128)
    is_parseval = bool(np.linalg.norm(g - eye) <= tol.residual_rel * max(float(np.sqrt(n)), 1.0))
    tightness = 1.0 if is_parseval else _tightness(g, eye, tol)
    return FrameBounds(
        lower=lower,
        upper=upper,
        is_bessel=True,
        is_g_frame=is_frame,
        is_k_g_frame=is_frame,
        is_parseval=is_parseval,
        tightness=tightness,
    )
