"""Canonical duals, minimality, and subspace-dual verification."""

import math

import numpy as np
import pytest

from kgframes import (
    GFrameSystem,
    HypothesisViolated,
    NotADual,
    NotKGFrame,
    analysis,
    canonical_k_dual,
    classify,
    dual_minimality_check,
    frame_operator,
    is_k_dual,
    null_basis,
    operator_norm,
    optimal_k_lower_bound,
    pinv,
    subspace_dual_implies_k_g_frame,
    synthesis,
)
from tests.conftest import rand_complex, rand_system


def scalar_system(value=2.0):
    return GFrameSystem.from_operators([np.array([[value]], dtype=complex)])


def identity_system(n=2):
    return GFrameSystem.from_operators([np.eye(n, dtype=complex)])


class TestIsKDual:
    def test_identity_pair(self):
        assert is_k_dual(identity_system(), identity_system(), np.eye(2))

    def test_scalar_product(self):
        assert is_k_dual(scalar_system(2.0), scalar_system(0.5), np.array([[1.0]]))

    def test_scalar_mismatch(self):
        assert not is_k_dual(scalar_system(2.0), scalar_system(1.0), np.array([[1.0]]))


class TestCanonicalKDual:
    def test_scalar(self):
        pair = canonical_k_dual(scalar_system(2.0), np.array([[1.0]]))
        np.testing.assert_allclose(pair.dual.operators[0], [[0.5]])
        norm_sq = operator_norm(analysis(pair.dual)) ** 2
        assert norm_sq == pytest.approx(0.25)
        a_opt = optimal_k_lower_bound(pair.primal, pair.K)
        assert a_opt * norm_sq == pytest.approx(1.0, rel=1e-9)

    def test_rank_deficient_k_reads_rows(self):
        sys = GFrameSystem.from_operators(
            [np.array([[1.0, 0.0]], dtype=complex), np.array([[0.0, 1.0]], dtype=complex)]
        )
        pair = canonical_k_dual(sys, np.diag([1.0, 0.0]))
        np.testing.assert_allclose(pair.dual.operators[0], [[1.0, 0.0]], atol=1e-12)
        np.testing.assert_allclose(pair.dual.operators[1], [[0.0, 0.0]], atol=1e-12)

    def test_identity_synthesis_copies_k(self, rng):
        k = rand_complex(rng, (3, 3))
        pair = canonical_k_dual(identity_system(3), k)
        np.testing.assert_allclose(pair.dual.operators[0], k, atol=1e-10)

    def test_refuses_non_frame(self):
        sys = GFrameSystem.from_operators([np.array([[1.0, 0.0]])])
        with pytest.raises(NotKGFrame):
            canonical_k_dual(sys, np.eye(2))

    def test_reconstruction_and_bound_identity(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 7))
            sys = rand_system(rng, n, tuple(int(rng.integers(1, 4)) for _ in range(int(rng.integers(1, 4)))))
            k = rand_complex(rng, (n, n), 1.0 / math.sqrt(n))
            bounds = classify(sys, k)
            if not bounds.is_k_g_frame:
                with pytest.raises(NotKGFrame):
                    canonical_k_dual(sys, k)
                continue
            pair = canonical_k_dual(sys, k)
            assert pair.reconstruction_residual <= 1e-10
            norm_sq = operator_norm(analysis(pair.dual)) ** 2
            assert bounds.lower * norm_sq == pytest.approx(1.0, rel=1e-6)

    def test_unique_among_row_space_duals(self, rng):
        # any K-dual whose analysis range lies inside range(T*) is the
        # canonical one
        sys = rand_system(rng, 3, (2, 3))
        k = rand_complex(rng, (3, 3), 1.0)
        pair = canonical_k_dual(sys, k)
        t = synthesis(sys)
        q = analysis(pair.dual)
        # project an arbitrary dual back onto the row space of T
        nb = null_basis(t)
        noise = nb @ rand_complex(rng, (nb.shape[1], 3))
        alt_q = q + noise
        projected = (np.eye(t.shape[1]) - nb @ nb.conj().T) @ alt_q
        np.testing.assert_allclose(projected, q, atol=1e-9)


class TestDualMinimality:
    def _pair_with_alternates(self, rng, n=3, dims=(2, 3)):
        sys = rand_system(rng, n, dims)
        k = rand_complex(rng, (n, n), 1.0)
        pair = canonical_k_dual(sys, k)
        t = synthesis(sys)
        nb = null_basis(t)
        q = analysis(pair.dual)
        alts = []
        offsets = sys.block_offsets()
        for _ in range(20):
            stacked = q + nb @ rand_complex(rng, (nb.shape[1], n))
            blocks = tuple(stacked[offsets[i] : offsets[i + 1]] for i in range(len(dims)))
            alts.append(GFrameSystem(n, sys.block_dims, blocks))
        return sys, k, pair, alts

    def test_self_alternate(self, rng):
        sys, k, pair, _ = self._pair_with_alternates(rng)
        probes = [rand_complex(rng, (3,)) for _ in range(10)]
        assert dual_minimality_check(pair, [pair.dual], probes)

    def test_null_space_alternates_dominate(self, rng):
        sys, k, pair, alts = self._pair_with_alternates(rng)
        probes = [rand_complex(rng, (3,)) for _ in range(50)]
        assert dual_minimality_check(pair, alts, probes)
        # strict domination generically: Pythagoras over null(T)
        q = analysis(pair.dual)
        g = analysis(alts[0])
        f = probes[0]
        lhs = np.linalg.norm(g @ f) ** 2
        rhs = np.linalg.norm(q @ f) ** 2 + np.linalg.norm((g - q) @ f) ** 2
        assert lhs == pytest.approx(rhs, rel=1e-8)

    def test_vacuous_when_no_alternates(self, rng):
        pair = canonical_k_dual(scalar_system(2.0), np.array([[1.0]]))
        assert dual_minimality_check(pair, [], [np.array([1.0 + 0j])])

    def test_rejects_non_dual(self, rng):
        sys, k, pair, _ = self._pair_with_alternates(rng)
        fake = rand_system(rng, 3, (2, 3))
        with pytest.raises(NotADual):
            dual_minimality_check(pair, [fake], [])


def subspace_instance(rng, n, r):
    """System with an invariant subspace, a K ranging over it, and a dual
    on that range (construction mirrors the verifier but is re-derived
    here step by step)."""
    g = rand_complex(rng, (n, n))
    basis, _ = np.linalg.qr(g)
    b1, b2 = basis[:, :r], basis[:, r:]
    ops = [rand_complex(rng, (r + 1, r), 1.0) @ b1.conj().T]
    if n - r:
        ops.append(rand_complex(rng, (n - r, n - r), 1.0) @ b2.conj().T)
    sys = GFrameSystem.from_operators(ops)
    k = b1 @ rand_complex(rng, (r, n), 1.0)
    k = k / operator_norm(k)
    s = frame_operator(sys)
    p = b1 @ b1.conj().T
    w = pinv(0.5 * (p @ s @ p + (p @ s @ p).conj().T))
    dual = GFrameSystem(n, sys.block_dims, tuple(op @ w for op in sys.operators))
    return sys, dual, k


class TestSubspaceDual:
    def test_identity_case(self):
        holds, predicted, measured = subspace_dual_implies_k_g_frame(
            identity_system(), identity_system(), np.eye(2)
        )
        assert holds
        assert predicted == pytest.approx(1.0)
        assert measured == pytest.approx(1.0, rel=1e-9)

    def test_scalar_case(self):
        holds, predicted, measured = subspace_dual_implies_k_g_frame(
            scalar_system(2.0), scalar_system(0.5), np.array([[1.0]])
        )
        assert holds
        assert predicted == pytest.approx(4.0, rel=1e-9)  # 1 / (0.25 * 1)
        assert measured == pytest.approx(4.0, rel=1e-9)

    def test_invariance_violation_detected(self, rng):
        # frame operator pushes range(K) off itself: hypothesis must fail
        sys = GFrameSystem.from_operators([np.array([[1.0, 1.0], [0.0, 1.0]], dtype=complex)])
        k = np.diag([1.0, 0.0]).astype(complex)
        dual = GFrameSystem.from_operators([np.eye(2, dtype=complex)])
        with pytest.raises(HypothesisViolated):
            subspace_dual_implies_k_g_frame(sys, dual, k)

    def test_constructed_instances_hold(self, rng):
        for _ in range(50):
            n = int(rng.integers(2, 7))
            r = int(rng.integers(1, n + 1))
            sys, dual, k = subspace_instance(rng, n, r)
            holds, predicted, measured = subspace_dual_implies_k_g_frame(sys, dual, k)
            assert holds
            assert measured >= predicted - 1e-9
