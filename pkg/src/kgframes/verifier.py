"""Seeded randomized verification campaigns.

Each campaign generates instances that satisfy a statement's hypotheses,
re-audits those hypotheses, evaluates the conclusion numerically, and
aggregates pass/fail counts with the worst residual and replayable
counterexamples.  All randomness flows through numpy's PCG64 generator
(``numpy.random.default_rng``); trial t of a campaign uses the derived
seed ``seed XOR t``, so reports are independent of execution order and of
the number of worker threads.

Random matrix entries are i.i.d. complex standard normal scaled by
1/sqrt(n), which keeps spectra O(1) across sizes and the tolerance policy
dimension-stable.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import atomic as atomic_mod
from . import duality as duality_mod
from .douglas import douglas_factor, min_majorization_constant, range_included
from .errors import (
    DegenerateCombination,
    HypothesisViolated,
    InsufficientCoefficientDim,
    KGFrameError,
    NotKGFrame,
    RangeNotIncluded,
    RankTooLarge,
    UnknownTheorem,
)
from .gframe import (
    GFrameSystem,
    analysis,
    classify,
    frame_operator,
    induced_frame,
    induced_frame_bounds,
    optimal_k_lower_bound,
    synthesis,
)
from .jsonio import matrix_to_json, system_to_json
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    _hermitian_part,
    adjoint,
    as_matrix,
    null_basis,
    operator_norm,
    pinv,
    rank,
)

__all__ = [
    "DimensionRanges",
    "CampaignSpec",
    "VerificationReport",
    "THEOREM_IDS",
    "gen_system",
    "gen_k_with_range_in",
    "gen_orthogonal_pair",
    "gen_parseval",
    "gen_parseval_pair",
    "gen_commuting_surjective",
    "run_campaign",
]

_MAX_SEED = 2**63 - 1


@dataclass(frozen=True)
class DimensionRanges:
    """Inclusive ranges for ambient dimension, block count and block sizes."""

    ambient: tuple[int, int] = (2, 6)
    blocks: tuple[int, int] = (1, 3)
    block_dim: tuple[int, int] = (1, 3)
    cap: int = 16

    def __post_init__(self):
        for name in ("ambient", "blocks", "block_dim"):
            lo, hi = getattr(self, name)
            if lo < 1 or hi < lo:
                raise ValueError(f"{name} range ({lo}, {hi}) is empty or below 1")
        if self.ambient[1] > self.cap:
            raise ValueError(f"ambient upper bound {self.ambient[1]} exceeds cap {self.cap}")


@dataclass(frozen=True)
class CampaignSpec:
    """One campaign: which statement, how many trials, from which seed."""

    theorem_id: str
    trials: int
    seed: int
    dims: DimensionRanges = field(default_factory=DimensionRanges)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not (0 <= self.seed <= _MAX_SEED):
            raise ValueError("seed must fit in an unsigned 63-bit integer")


@dataclass
class VerificationReport:
    """Aggregated campaign outcome with replayable counterexamples."""

    theorem_id: str
    trials_run: int
    passes: int
    failures: int
    worst_residual: float
    counterexamples: list
    conclusion_tally: dict | None = None

    def to_json(self) -> dict:
        out = {
            "theorem": self.theorem_id,
            "trials": self.trials_run,
            "passes": self.passes,
            "failures": self.failures,
            "worst_residual": self.worst_residual,
            "counterexamples": self.counterexamples,
        }
        if self.conclusion_tally is not None:
            out["conclusion_tally"] = self.conclusion_tally
        return out


@dataclass
class _TrialOutcome:
    passed: bool
    residual: float
    detail: dict | None = None
    conclusion: bool | None = None
    conclusion_detail: dict | None = None


def _complex_normal(rng: np.random.Generator, shape, scale: float) -> np.ndarray:
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) * (scale / math.sqrt(2.0))


def _sub_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(0, _MAX_SEED))


def gen_system(seed: int, n: int, block_dims) -> GFrameSystem:
    """Random system with i.i.d. complex normal entries scaled by 1/sqrt(n).

    Deterministic: the same seed yields a bit-identical system.
    """
    rng = np.random.default_rng(seed)
    scale = 1.0 / math.sqrt(max(n, 1))
    dims = tuple(int(m) for m in block_dims)
    ops = tuple(_complex_normal(rng, (m, n), scale) for m in dims)
    return GFrameSystem(n, dims, ops)


def gen_k_with_range_in(seed: int, t, r: int, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Random n x n operator K of rank r with range(K) inside range(t).

    K is an orthonormal basis of a random rank-r subspace of range(t)
    times a random r x n factor, normalized to unit operator norm so bound
    scales stay O(1).  Raises RankTooLarge when r exceeds rank(t).
    """
    t = as_matrix(t, "T")
    n = t.shape[0]
    rank_t = rank(t, tol)
    if r > rank_t:
        raise RankTooLarge(f"requested rank {r} exceeds rank {rank_t} of the target")
    if r == 0:
        return np.zeros((n, n), dtype=np.complex128)
    rng = np.random.default_rng(seed)
    u, s, _ = np.linalg.svd(t, full_matrices=False)
    basis = u[:, :rank_t]
    mix = basis @ _complex_normal(rng, (rank_t, r), 1.0)
    q, _ = np.linalg.qr(mix)
    k = q @ _complex_normal(rng, (r, n), 1.0 / math.sqrt(n))
    norm = operator_norm(k)
    return k / norm if norm > 0 else k


def gen_orthogonal_pair(seed: int, n: int, block_dims, split: int) -> tuple[GFrameSystem, GFrameSystem]:
    """Two systems on the same block structure with disjoint block support.

    The first carries random blocks strictly below ``split`` and zero
    blocks from ``split`` on; the second is the complement, so the cross
    product of their synthesis operators is exactly zero.
    """
    dims = tuple(int(m) for m in block_dims)
    if not (1 <= split < len(dims)):
        raise ValueError(f"split must lie strictly inside [1, {len(dims)}), got {split}")
    rng = np.random.default_rng(seed)
    scale = 1.0 / math.sqrt(max(n, 1))
    ops_l, ops_g = [], []
    for i, m in enumerate(dims):
        block = _complex_normal(rng, (m, n), scale)
        zero = np.zeros((m, n), dtype=np.complex128)
        if i < split:
            ops_l.append(block)
            ops_g.append(zero)
        else:
            ops_l.append(zero)
            ops_g.append(block)
    return (
        GFrameSystem(n, dims, tuple(ops_l)),
        GFrameSystem(n, dims, tuple(ops_g)),
    )


def gen_parseval(seed: int, k, block_dims, tol: ToleranceConfig = DEFAULT_TOL) -> GFrameSystem:
    """Parseval system for K: synthesis = K W with W a random co-isometry.

    The co-isometry comes from the first n rows of a Haar-ish unitary (QR
    of a complex normal matrix), so the frame operator equals K K* up to
    roundoff.  Requires the coefficient space to be at least n-dimensional.
    """
    k = as_matrix(k, "K")
    n = k.shape[0]
    dims = tuple(int(m) for m in block_dims)
    total = sum(dims)
    if total < n:
        raise InsufficientCoefficientDim(
            f"coefficient dimension {total} is below the ambient dimension {n}"
        )
    rng = np.random.default_rng(seed)
    g = _complex_normal(rng, (total, total), 1.0)
    q, _ = np.linalg.qr(g)
    w = q.conj().T[:n, :]
    t = k @ w
    ops, pos = [], 0
    for m in dims:
        ops.append(adjoint(t[:, pos : pos + m]))
        pos += m
    return GFrameSystem(n, dims, tuple(ops))


def gen_parseval_pair(
    seed: int, k, block_dims, split: int, tol: ToleranceConfig = DEFAULT_TOL
) -> tuple[GFrameSystem, GFrameSystem]:
    """Two Parseval systems for K with disjoint block support.

    Blocks below ``split`` carry the first system, blocks from ``split`` on
    carry the second; each group hosts its own co-isometry, so both systems
    are Parseval and their cross synthesis vanishes exactly.
    """
    k = as_matrix(k, "K")
    dims = tuple(int(m) for m in block_dims)
    if not (1 <= split < len(dims)):
        raise ValueError(f"split must lie strictly inside [1, {len(dims)}), got {split}")
    n = k.shape[0]
    rng = np.random.default_rng(seed)
    group_l, group_g = dims[:split], dims[split:]
    sys_l_core = gen_parseval(_sub_seed(rng), k, group_l, tol)
    sys_g_core = gen_parseval(_sub_seed(rng), k, group_g, tol)
    zeros = [np.zeros((m, n), dtype=np.complex128) for m in dims]
    ops_l = list(sys_l_core.operators) + zeros[split:]
    ops_g = zeros[:split] + list(sys_g_core.operators)
    return GFrameSystem(n, dims, tuple(ops_l)), GFrameSystem(n, dims, tuple(ops_g))


def gen_commuting_surjective(seed: int, k) -> np.ndarray:
    """Surjective operator commuting with K*: U = alpha I + beta K*.

    alpha is shifted past |beta K*| so the smallest singular value stays
    at least 0.5; commutation is exact because U is a polynomial in K*.
    """
    k = as_matrix(k, "K")
    n = k.shape[0]
    rng = np.random.default_rng(seed)
    beta = complex(*rng.standard_normal(2)) / math.sqrt(2.0)
    alpha = 0.5 + abs(beta) * operator_norm(k)
    return alpha * np.eye(n, dtype=np.complex128) + beta * adjoint(k)


def _draw_dims(rng: np.random.Generator, dims: DimensionRanges) -> tuple[int, tuple[int, ...]]:
    n = int(rng.integers(dims.ambient[0], dims.ambient[1] + 1))
    count = int(rng.integers(dims.blocks[0], dims.blocks[1] + 1))
    block_dims = tuple(
        int(rng.integers(dims.block_dim[0], dims.block_dim[1] + 1)) for _ in range(count)
    )
    return n, block_dims


def _draw_rank(rng: np.random.Generator, upper: int, allow_zero: bool = False) -> int:
    lo = 0 if allow_zero else 1
    if upper < lo:
        return 0
    return int(rng.integers(lo, upper + 1))


def _pair_dims(rng: np.random.Generator, dims: DimensionRanges, n: int) -> tuple[tuple[int, ...], int]:
    """Two-group block structure where each group's total is at least n."""
    count = max(2, int(rng.integers(dims.blocks[0], dims.blocks[1] + 1)))
    split = int(rng.integers(1, count))
    block_dims = [
        int(rng.integers(dims.block_dim[0], dims.block_dim[1] + 1)) for _ in range(count)
    ]
    for group in (range(split), range(split, count)):
        idx = list(group)
        while sum(block_dims[i] for i in idx) < n:
            block_dims[idx[int(rng.integers(0, len(idx)))]] += 1
    return tuple(block_dims), split


def _random_k(rng: np.random.Generator, n: int) -> np.ndarray:
    k = _complex_normal(rng, (n, n), 1.0 / math.sqrt(n))
    norm = operator_norm(k)
    return k / norm if norm > 0 else k


def _serialize_instance(**parts) -> dict:
    out = {}
    for name, value in parts.items():
        if value is None:
            continue
        if isinstance(value, GFrameSystem):
            out[name] = system_to_json(value)
        elif isinstance(value, np.ndarray):
            out[name] = matrix_to_json(value)
        elif isinstance(value, complex):
            out[name] = {"re": value.real, "im": value.imag}
        else:
            out[name] = value
    return out


# ---------------------------------------------------------------------------
# Per-campaign trial functions.  Each returns a _TrialOutcome; hypothesis
# audits run before conclusions, and an audit miss counts as a failure.
# ---------------------------------------------------------------------------


def _trial_bounds_equivalence(rng, dims, tol) -> _TrialOutcome:
    n, block_dims = _draw_dims(rng, dims)
    sys = gen_system(_sub_seed(rng), n, block_dims)
    eye = np.eye(n, dtype=np.complex128)
    by_system = classify(sys, eye, tol)
    by_vectors = induced_frame_bounds(induced_frame(sys), tol)
    scale = max(by_system.upper, 1.0)
    residual = max(
        abs(by_system.lower - by_vectors.lower), abs(by_system.upper - by_vectors.upper)
    ) / scale
    passed = residual <= tol.residual_rel and by_system.is_g_frame == by_vectors.is_g_frame
    detail = None if passed else _serialize_instance(system=sys)
    return _TrialOutcome(passed, residual, detail)


def _trial_range_characterization(rng, dims, tol) -> _TrialOutcome:
    n, block_dims = _draw_dims(rng, dims)
    sys = gen_system(_sub_seed(rng), n, block_dims)
    t = synthesis(sys)
    kind = int(rng.integers(0, 3))
    if kind == 0:
        k = gen_k_with_range_in(_sub_seed(rng), t, _draw_rank(rng, rank(t, tol)), tol)
    elif kind == 1:
        k = _random_k(rng, n)
    else:
        k = np.zeros((n, n), dtype=np.complex128)
    included = range_included(k, t, tol)
    lower = optimal_k_lower_bound(sys, k, tol)
    positive = bool(np.linalg.norm(k) == 0.0 or lower > tol.psd_rel)
    passed = included == positive
    detail = None if passed else _serialize_instance(system=sys, K=k, lower=lower)
    return _TrialOutcome(passed, 0.0 if passed else 1.0, detail)


def _trial_dual_existence(rng, dims, tol) -> _TrialOutcome:
    n, block_dims = _draw_dims(rng, dims)
    sys = gen_system(_sub_seed(rng), n, block_dims)
    t = synthesis(sys)
    if int(rng.integers(0, 2)):
        k = gen_k_with_range_in(_sub_seed(rng), t, _draw_rank(rng, rank(t, tol)), tol)
    else:
        k = _random_k(rng, n)
    expected = classify(sys, k, tol).is_k_g_frame
    residual = 0.0
    try:
        pair = duality_mod.canonical_k_dual(sys, k, tol)
        exists = True
        residual = pair.reconstruction_residual
    except NotKGFrame:
        exists = False
    passed = exists == expected and residual <= tol.residual_rel
    detail = None if passed else _serialize_instance(system=sys, K=k)
    return _TrialOutcome(passed, residual, detail)


def _random_factor_in_row_space(rng, v: np.ndarray, cols: int, tol) -> np.ndarray:
    """Random factor whose range lies inside range(v*)."""
    basis = null_basis(v, tol)
    p = v.shape[1]
    full = np.eye(p, dtype=np.complex128)
    if basis.shape[1]:
        full = full - basis @ basis.conj().T
    return full @ _complex_normal(rng, (p, cols), 1.0 / math.sqrt(max(p, 1)))


def _trial_factorization(rng, dims, tol) -> _TrialOutcome:
    m = int(rng.integers(dims.ambient[0], dims.ambient[1] + 1))
    p = int(rng.integers(1, dims.ambient[1] + 1))
    q_cols = int(rng.integers(1, dims.ambient[1] + 1))
    v = _complex_normal(rng, (m, p), 1.0 / math.sqrt(m))
    q0 = _random_factor_in_row_space(rng, v, q_cols, tol)
    u = v @ q0

    if not range_included(u, v, tol):
        return _TrialOutcome(False, 1.0, _serialize_instance(V=v, Q0=q0, reason="range test"))
    factor = douglas_factor(u, v, tol)
    mu_bisect = min_majorization_constant(u, v, tol)
    agree = abs(mu_bisect - factor.mu_star) / max(factor.mu_star, 1e-12)
    minimal = operator_norm(factor.Q) <= operator_norm(q0) + tol.residual_rel
    residual = max(factor.residual, agree if factor.mu_star > 1e-12 else 0.0)
    passed = factor.residual <= tol.residual_rel and minimal and (
        factor.mu_star <= 1e-12 or agree <= 1e-6
    )

    # Complementary direction: pushing U outside range(V) must be detected.
    if passed and rank(v, tol) < m:
        u_out = u.copy()
        basis = null_basis(adjoint(v), tol)
        u_out = u_out + basis[:, :1] @ np.ones((1, u.shape[1]), dtype=np.complex128)
        if range_included(u_out, v, tol):
            passed = False
        else:
            try:
                min_majorization_constant(u_out, v, tol)
                passed = False
            except RangeNotIncluded:
                pass
    detail = None if passed else _serialize_instance(V=v, Q0=q0)
    return _TrialOutcome(passed, residual, detail)


def _alternate_duals(rng, sys, pair, count: int, tol) -> list[GFrameSystem]:
    t = synthesis(sys)
    kernel = null_basis(t, tol)
    if kernel.shape[1] == 0:
        return []
    q = analysis(pair.dual)
    alts = []
    for _ in range(count):
        noise = kernel @ _complex_normal(rng, (kernel.shape[1], sys.ambient_dim), 1.0)
        stacked = q + noise
        offsets = sys.block_offsets()
        blocks = tuple(
            stacked[offsets[i] : offsets[i + 1], :] for i in range(len(sys.block_dims))
        )
        alts.append(GFrameSystem(sys.ambient_dim, sys.block_dims, blocks))
    return alts


def _trial_canonical_dual(rng, dims, tol) -> _TrialOutcome:
    n, block_dims = _draw_dims(rng, dims)
    sys = gen_system(_sub_seed(rng), n, block_dims)
    t = synthesis(sys)
    k = gen_k_with_range_in(_sub_seed(rng), t, _draw_rank(rng, rank(t, tol)), tol)
    pair = duality_mod.canonical_k_dual(sys, k, tol)
    a_opt = optimal_k_lower_bound(sys, k, tol)
    norm_sq = operator_norm(analysis(pair.dual)) ** 2
    product_gap = abs(a_opt * norm_sq - 1.0)
    alts = _alternate_duals(rng, sys, pair, 3, tol)
    probes = [_complex_normal(rng, (n,), 1.0) for _ in range(10)]
    minimal = duality_mod.dual_minimality_check(pair, alts, probes, tol)
    residual = max(pair.reconstruction_residual, product_gap)
    passed = pair.reconstruction_residual <= tol.residual_rel and product_gap <= 1e-6 and minimal
    detail = None if passed else _serialize_instance(system=sys, K=k)
    return _TrialOutcome(passed, residual, detail)


def _subspace_dual_instance(rng, dims, tol):
    n, _ = _draw_dims(rng, dims)
    n = max(n, 2)
    r = int(rng.integers(1, n + 1))
    g = _complex_normal(rng, (n, n), 1.0)
    basis, _ = np.linalg.qr(g)
    b1, b2 = basis[:, :r], basis[:, r:]

    inner = max(r, int(rng.integers(r, r + 3)))
    ops = [
        _complex_normal(rng, (inner, r), 1.0 / math.sqrt(n)) @ b1.conj().T
    ]
    if n - r > 0:
        outer = max(1, int(rng.integers(1, 3)))
        ops.append(_complex_normal(rng, (outer, n - r), 1.0 / math.sqrt(n)) @ b2.conj().T)
    sys = GFrameSystem.from_operators(ops)

    k = b1 @ _complex_normal(rng, (r, n), 1.0 / math.sqrt(n))
    norm = operator_norm(k)
    if norm > 0:
        k = k / norm
    s = frame_operator(sys)
    p = b1 @ b1.conj().T
    w = pinv(_hermitian_part(p @ s @ p), tol)
    dual = GFrameSystem(
        sys.ambient_dim, sys.block_dims, tuple(op @ w for op in sys.operators)
    )
    return sys, dual, k


def _trial_subspace_dual(rng, dims, tol) -> _TrialOutcome:
    sys, dual, k = _subspace_dual_instance(rng, dims, tol)
    try:
        holds, predicted, measured = duality_mod.subspace_dual_implies_k_g_frame(
            sys, dual, k, tol
        )
    except HypothesisViolated as exc:
        return _TrialOutcome(
            False, 1.0, _serialize_instance(system=sys, dual=dual, K=k, hypothesis=exc.hypothesis)
        )
    residual = max(0.0, (predicted - measured) / max(predicted, 1.0))
    detail = None if holds else _serialize_instance(system=sys, dual=dual, K=k)
    return _TrialOutcome(holds, residual, detail)


def _trial_atomic_equivalence(rng, dims, tol) -> _TrialOutcome:
    n, block_dims = _draw_dims(rng, dims)
    sys = gen_system(_sub_seed(rng), n, block_dims)
    t = synthesis(sys)
    kind = int(rng.integers(0, 3))
    if kind == 0:
        k = gen_k_with_range_in(_sub_seed(rng), t, _draw_rank(rng, rank(t, tol), True), tol)
    elif kind == 1:
        k = _random_k(rng, n)
    else:
        k = np.zeros((n, n), dtype=np.complex128)
    cert = atomic_mod.is_atomic_system(sys, k, tol)
    expected = classify(sys, k, tol).is_k_g_frame
    try:
        duality_mod.canonical_k_dual(sys, k, tol)
        dual_exists = True
    except NotKGFrame:
        dual_exists = False
    passed = cert.is_atomic == expected == dual_exists
    residual = 0.0
    if passed and cert.is_atomic:
        passed = duality_mod.is_k_dual(sys, cert.witness_dual, k, tol)
        f = _complex_normal(rng, (n,), 1.0)
        coeff, c = atomic_mod.atomic_coefficients(sys, k, f, tol)
        recon = np.linalg.norm(synthesis(sys) @ coeff.to_flat() - k @ f)
        residual = recon / max(np.linalg.norm(k @ f), 1.0)
        passed = passed and residual <= tol.residual_rel
        passed = passed and coeff.norm() <= c * np.linalg.norm(f) + tol.residual_rel
    detail = None if passed else _serialize_instance(system=sys, K=k)
    return _TrialOutcome(passed, residual, detail)


def _trial_linear_product(rng, dims, tol) -> _TrialOutcome:
    n, block_dims = _draw_dims(rng, dims)
    sys = gen_system(_sub_seed(rng), n, block_dims)
    t = synthesis(sys)
    r = rank(t, tol)
    k1 = gen_k_with_range_in(_sub_seed(rng), t, _draw_rank(rng, r), tol)
    k2 = gen_k_with_range_in(_sub_seed(rng), t, _draw_rank(rng, r), tol)
    alpha = complex(*rng.standard_normal(2))
    beta = complex(*rng.standard_normal(2))
    try:
        linear = atomic_mod.combine_linear(sys, k1, k2, alpha, beta, tol)
    except DegenerateCombination:
        return _TrialOutcome(True, 0.0)
    k_any = _random_k(rng, n)
    product = atomic_mod.combine_product(sys, k1, k_any, tol)
    passed = linear.holds and product.holds
    residual = max(
        max(0.0, linear.predicted_lower - linear.measured_lower),
        max(0.0, product.predicted_lower - product.measured_lower),
    )
    detail = (
        None
        if passed
        else _serialize_instance(system=sys, K1=k1, K2=k2, alpha=alpha, beta=beta)
    )
    return _TrialOutcome(passed, residual, detail)


def _orthogonal_full_pair(rng, dims, tol):
    n, _ = _draw_dims(rng, dims)
    block_dims, split = _pair_dims(rng, dims, n)
    sys_l, sys_g = gen_orthogonal_pair(_sub_seed(rng), n, block_dims, split)
    return n, sys_l, sys_g


def _trial_perturb_sum(rng, dims, tol, zero_side: bool = False) -> _TrialOutcome:
    n, sys_l, sys_g = _orthogonal_full_pair(rng, dims, tol)
    k = _random_k(rng, n)
    u = gen_commuting_surjective(_sub_seed(rng), k)
    if zero_side:
        sys_g = GFrameSystem(
            n, sys_l.block_dims, tuple(np.zeros_like(op) for op in sys_l.operators)
        )
        v = np.zeros((n, n), dtype=np.complex128)
    else:
        v = _complex_normal(rng, (n, n), 1.0 / math.sqrt(n))

    # Hypothesis audit: exact cross-term cancellation on a random probe.
    f = _complex_normal(rng, (n,), 1.0)
    lvec = analysis(sys_l) @ (u @ f)
    gvec = analysis(sys_g) @ (v @ f)
    cross = abs(np.vdot(gvec, lvec))
    if cross > tol.residual_rel:
        return _TrialOutcome(False, cross, _serialize_instance(system=sys_l, system2=sys_g))

    combined, bound = atomic_mod.perturb_sum(sys_l, sys_g, u, v, k, tol)
    residual = max(cross, max(0.0, bound.predicted_lower - bound.measured_lower))
    detail = (
        None
        if bound.holds
        else _serialize_instance(system=sys_l, system2=sys_g, U=u, V=v, K=k)
    )
    return _TrialOutcome(bound.holds, residual, detail)


def _trial_parseval_sum(rng, dims, tol) -> _TrialOutcome:
    n, _ = _draw_dims(rng, dims)
    block_dims, split = _pair_dims(rng, dims, n)
    k = _random_k(rng, n) if int(rng.integers(0, 8)) else np.zeros((n, n), dtype=np.complex128)
    sys_l, sys_g = gen_parseval_pair(_sub_seed(rng), k, block_dims, split)
    combined, tightness = atomic_mod.parseval_sum(sys_l, sys_g, k, tol)
    kk = k @ adjoint(k)
    residual = float(
        np.linalg.norm(frame_operator(combined) - 2.0 * kk) / max(np.linalg.norm(kk), 1.0)
    )
    passed = tightness == 2.0 and residual <= tol.residual_rel
    detail = None if passed else _serialize_instance(system=sys_l, system2=sys_g, K=k)
    return _TrialOutcome(passed, residual, detail)


def _shifted_invertible(rng, n: int) -> np.ndarray:
    a = _complex_normal(rng, (n, n), 1.0 / math.sqrt(n))
    return a + (operator_norm(a) + 0.5) * np.eye(n, dtype=np.complex128)


def _trial_single_weighting(rng, dims, tol) -> _TrialOutcome:
    return _trial_perturb_sum(rng, dims, tol, zero_side=True)


def _trial_weighted_sum(rng, dims, tol) -> _TrialOutcome:
    n, sys_l, sys_g = _orthogonal_full_pair(rng, dims, tol)
    k = _random_k(rng, n)
    u1 = _shifted_invertible(rng, n)
    u2 = _shifted_invertible(rng, n)
    combined, bound = atomic_mod.operator_weighted_sum(sys_l, sys_g, u1, u2, k, tol)
    residual = max(0.0, bound.predicted_lower - bound.measured_lower)
    detail = (
        None
        if bound.holds
        else _serialize_instance(system=sys_l, system2=sys_g, U=u1, V=u2, K=k)
    )
    return _TrialOutcome(bound.holds, residual, detail)


def _trial_frame_operator_inequality(rng, dims, tol) -> _TrialOutcome:
    n, block_dims = _draw_dims(rng, dims)
    sys = gen_system(_sub_seed(rng), n, block_dims)
    t = synthesis(sys)
    kind = int(rng.integers(0, 3))
    if kind == 0:
        k = gen_k_with_range_in(_sub_seed(rng), t, _draw_rank(rng, rank(t, tol), True), tol)
    elif kind == 1:
        k = _random_k(rng, n)
    else:
        k = np.zeros((n, n), dtype=np.complex128)
    holds, _ = atomic_mod.k_g_frame_via_frame_operator(sys, k, tol)
    expected = classify(sys, k, tol).is_k_g_frame
    passed = holds == expected
    detail = None if passed else _serialize_instance(system=sys, K=k)
    return _TrialOutcome(passed, 0.0 if passed else 1.0, detail)


def _trial_positive_perturbation(rng, dims, tol) -> _TrialOutcome:
    n, block_dims = _draw_dims(rng, dims)
    sys = gen_system(_sub_seed(rng), n, block_dims)
    s = frame_operator(sys)
    commuting = bool(int(rng.integers(0, 2)))
    if commuting:
        # K and U drawn as polynomials in S: simultaneously diagonalizable
        # with both S and K K*, the regime where the lower bound must not
        # shrink.
        k = s.copy()
        norm = operator_norm(k)
        if norm > 0:
            k = k / norm
        u = _hermitian_part(s @ s + s)
    else:
        t = synthesis(sys)
        k = gen_k_with_range_in(_sub_seed(rng), t, _draw_rank(rng, rank(t, tol)), tol)
        a = _complex_normal(rng, (n, n), 1.0 / math.sqrt(n))
        u = _hermitian_part(a @ adjoint(a))
    # unit-norm U keeps the perturbed spectra O(1), like every generator here
    u_norm = operator_norm(u)
    if u_norm > 0:
        u = u / u_norm
    n_power = int(rng.integers(1, 4))
    baseline = optimal_k_lower_bound(sys, k, tol)
    combined, residual, measured = atomic_mod.positive_perturbation(sys, u, k, n_power, tol)
    identity_ok = residual <= tol.residual_rel
    conclusion = bool(np.linalg.norm(k) == 0.0 or measured > tol.psd_rel)
    if commuting:
        conclusion = conclusion and measured >= baseline - tol.psd_rel * max(baseline, 1.0)
    detail = None if identity_ok else _serialize_instance(system=sys, U=u, K=k)
    conclusion_detail = (
        None if conclusion else _serialize_instance(system=sys, U=u, K=k, commuting=commuting)
    )
    return _TrialOutcome(identity_ok, residual, detail, conclusion, conclusion_detail)


_CAMPAIGNS = {
    "L2.3": ("g-frame bounds equal induced vector-frame bounds", _trial_bounds_equivalence),
    "L2.4": ("lower-bound positivity matches the range test", _trial_range_characterization),
    "L2.5": ("a K-dual exists exactly for K-g-frames", _trial_dual_existence),
    "L2.6": ("range inclusion, majorization and factorization agree", _trial_factorization),
    "T3.2": ("canonical dual reconstructs, is minimal, ties to the bound", _trial_canonical_dual),
    "T3.3": ("a dual on range(K) forces the predicted lower bound", _trial_subspace_dual),
    "T4.3": ("atomicity, K-g-frame property and dual existence agree", _trial_atomic_equivalence),
    "T4.4": ("linear and product combination bounds hold", _trial_linear_product),
    "T4.5": ("orthogonal perturbation keeps the predicted bound", _trial_perturb_sum),
    "C4.6": ("single-system surjective weighting keeps the bound", _trial_single_weighting),
    "C4.7": ("orthogonal Parseval sums are 2-tight", _trial_parseval_sum),
    "T4.8": ("operator-weighted sums keep the summed bound", _trial_weighted_sum),
    "L4.9": ("operator inequality matches the classification", _trial_frame_operator_inequality),
    "T4.10": ("positive perturbation: frame-operator identity and conclusion tally", _trial_positive_perturbation),
}

THEOREM_IDS = tuple(_CAMPAIGNS)


def campaign_description(theorem_id: str) -> str:
    if theorem_id not in _CAMPAIGNS:
        raise UnknownTheorem(f"unknown campaign {theorem_id!r}; known: {', '.join(THEOREM_IDS)}")
    return _CAMPAIGNS[theorem_id][0]


def _run_trial(spec: CampaignSpec, tol: ToleranceConfig, index: int) -> _TrialOutcome:
    rng = np.random.default_rng(spec.seed ^ index)
    trial_fn = _CAMPAIGNS[spec.theorem_id][1]
    try:
        return trial_fn(rng, spec.dims, tol)
    except KGFrameError as exc:
        return _TrialOutcome(False, float("inf"), {"error": f"{type(exc).__name__}: {exc}"})


def run_campaign(
    spec: CampaignSpec,
    tol: ToleranceConfig = DEFAULT_TOL,
    jobs: int = 1,
    counterexample_cap: int = 10,
) -> VerificationReport:
    """Run one campaign and aggregate a deterministic report.

    Identical specs produce identical reports regardless of ``jobs``: each
    trial derives its own generator from ``seed XOR index`` and reduction
    happens in index order with order-independent aggregates.
    """
    if spec.theorem_id not in _CAMPAIGNS:
        raise UnknownTheorem(
            f"unknown campaign {spec.theorem_id!r}; known: {', '.join(THEOREM_IDS)}"
        )
    cap = max(1, counterexample_cap)
    indices = range(spec.trials)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(lambda i: _run_trial(spec, tol, i), indices))
    else:
        outcomes = [_run_trial(spec, tol, i) for i in indices]

    passes = sum(1 for o in outcomes if o.passed)
    failures = spec.trials - passes
    finite = [o.residual for o in outcomes if math.isfinite(o.residual)]
    worst = max(finite) if finite else float("inf")
    counterexamples = []
    for i, o in enumerate(outcomes):
        if not o.passed and len(counterexamples) < cap:
            entry = {"trial": i, "residual": o.residual if math.isfinite(o.residual) else None}
            if o.detail:
                entry["instance"] = o.detail
            counterexamples.append(entry)

    tally = None
    if spec.theorem_id == "T4.10":
        concl_pass = sum(1 for o in outcomes if o.conclusion)
        concl_examples = []
        for i, o in enumerate(outcomes):
            if o.conclusion is False and len(concl_examples) < cap:
                entry = {"trial": i}
                if o.conclusion_detail:
                    entry["instance"] = o.conclusion_detail
                concl_examples.append(entry)
        tally = {
            "passes": concl_pass,
            "failures": spec.trials - concl_pass,
            "counterexamples": concl_examples,
        }

    return VerificationReport(
        theorem_id=spec.theorem_id,
        trials_run=spec.trials,
        passes=passes,
        failures=failures,
        worst_residual=worst,
        counterexamples=counterexamples,
        conclusion_tally=tally,
    )
