"""Factorization module: range tests, minimal factors, majorization."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgframes import (
    DimensionMismatch,
    RangeNotIncluded,
    adjoint,
    douglas_factor,
    min_majorization_constant,
    null_basis,
    operator_norm,
    range_included,
)
from tests.conftest import pencil_lower_oracle, rand_complex


def make_included_pair(rng, m, p, q):
    """V random, Q0 with range inside range(V*), U = V Q0."""
    v = rand_complex(rng, (m, p), 1.0 / math.sqrt(m))
    nb = null_basis(v)
    proj = np.eye(p) - nb @ nb.conj().T
    q0 = proj @ rand_complex(rng, (p, q), 1.0)
    return v, q0, v @ q0


class TestRangeIncluded:
    def test_orthogonal_ranges(self):
        assert not range_included(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))

    def test_invertible_target(self, rng):
        u = rand_complex(rng, (3, 3))
        v = np.eye(3) + 0.1 * rand_complex(rng, (3, 3))
        assert range_included(u, v)

    def test_reflexive(self, rng):
        u = rand_complex(rng, (4, 2))
        assert range_included(u, u)

    def test_row_count_mismatch(self):
        with pytest.raises(DimensionMismatch):
            range_included(np.eye(2), np.eye(3))


class TestDouglasFactor:
    def test_scalar_division(self):
        f = douglas_factor(np.array([[1.0]]), np.array([[2.0]]))
        np.testing.assert_allclose(f.Q, [[0.5]])
        assert f.mu_star == pytest.approx(0.25)

    def test_zero_numerator(self):
        f = douglas_factor(np.zeros((2, 2)), np.eye(2))
        np.testing.assert_array_equal(f.Q, np.zeros((2, 2)))
        assert f.mu_star == 0.0

    def test_identity_factor(self, rng):
        v = np.eye(3) + 0.2 * rand_complex(rng, (3, 3))
        f = douglas_factor(v, v)
        np.testing.assert_allclose(f.Q, np.eye(3), atol=1e-10)
        assert f.mu_star == pytest.approx(1.0, rel=1e-8)

    def test_raises_when_range_escapes(self):
        with pytest.raises(RangeNotIncluded):
            douglas_factor(np.diag([1.0, 1.0]), np.diag([1.0, 0.0]))

    def test_factor_range_inside_row_space(self, rng):
        for _ in range(50):
            v, q0, u = make_included_pair(
                rng, int(rng.integers(1, 7)), int(rng.integers(1, 7)), int(rng.integers(1, 5))
            )
            f = douglas_factor(u, v)
            # R(Q) inside R(V*): projecting off the row space leaves nothing
            nb = null_basis(v)
            if nb.shape[1]:
                assert np.linalg.norm(nb.conj().T @ f.Q) <= 1e-9 * max(
                    np.linalg.norm(f.Q), 1.0
                )
            assert f.residual <= 1e-8

    def test_null_space_identity(self, rng):
        # N(Q) = N(U): same rank, and Q kills a basis of null(U)
        for _ in range(30):
            v, q0, u = make_included_pair(rng, 5, 4, 3)
            f = douglas_factor(u, v)
            from kgframes import rank

            assert rank(f.Q) == rank(u)
            nu = null_basis(u)
            if nu.shape[1]:
                assert np.linalg.norm(f.Q @ nu) <= 1e-9

    def test_minimality_pythagoras(self, rng):
        # any other solution splits as Q + N with VN = 0 and Frobenius
        # norms adding in squares; wide V guarantees nontrivial N
        v, q0, u = make_included_pair(rng, 4, 6, 3)
        f = douglas_factor(u, v)
        nb = null_basis(v)
        assert nb.shape[1] >= 2
        for _ in range(50):
            noise = nb @ rand_complex(rng, (nb.shape[1], 3))
            q_alt = f.Q + noise
            np.testing.assert_allclose(v @ q_alt, u, atol=1e-10)
            lhs = np.linalg.norm(q_alt) ** 2
            rhs = np.linalg.norm(f.Q) ** 2 + np.linalg.norm(q_alt - f.Q) ** 2
            assert lhs == pytest.approx(rhs, rel=1e-9)
            assert operator_norm(q_alt) >= operator_norm(f.Q) - 1e-10


class TestMinMajorizationConstant:
    def test_scalar(self):
        assert min_majorization_constant(np.array([[1.0]]), np.array([[2.0]])) == pytest.approx(
            0.25, rel=1e-9
        )

    def test_equal_operators(self, rng):
        v = np.eye(3) + 0.2 * rand_complex(rng, (3, 3))
        assert min_majorization_constant(v, v) == pytest.approx(1.0, rel=1e-8)

    def test_zero_numerator(self):
        assert min_majorization_constant(np.zeros((2, 2)), np.eye(2)) == 0.0

    def test_raises_outside_range(self):
        with pytest.raises(RangeNotIncluded):
            min_majorization_constant(np.diag([0.0, 1.0]), np.diag([1.0, 0.0]))

    def test_agrees_with_factor_norm(self, rng):
        for _ in range(40):
            v, q0, u = make_included_pair(
                rng, int(rng.integers(2, 7)), int(rng.integers(2, 7)), int(rng.integers(1, 5))
            )
            f = douglas_factor(u, v)
            mu = min_majorization_constant(u, v)
            if f.mu_star > 1e-10:
                assert mu == pytest.approx(f.mu_star, rel=1e-6)

    def test_majorization_verdict_matches_oracle(self, rng):
        # independent eigenvalue-route oracle: mu_star = 1 / max-lambda of
        # the reversed pencil
        for _ in range(20):
            v, q0, u = make_included_pair(rng, 4, 4, 3)
            mu = min_majorization_constant(u, v)
            oracle = pencil_lower_oracle(v @ adjoint(v), u @ adjoint(u))
            if math.isfinite(oracle) and oracle > 0:
                assert mu == pytest.approx(1.0 / oracle, rel=1e-6)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_equivalence_of_three_statements(seed):
    """Constructed inclusion instances satisfy all three equivalent facts."""
    rng = np.random.default_rng(seed)
    v, q0, u = make_included_pair(rng, int(rng.integers(2, 6)), int(rng.integers(2, 6)), 2)
    assert range_included(u, v)
    f = douglas_factor(u, v)
    assert operator_norm(f.Q) <= operator_norm(q0) + 1e-10
    assert math.isfinite(min_majorization_constant(u, v))


def test_escaping_range_diverges_past_cap(rng):
    """A component outside range(V) defeats both the rank test and bisection."""
    v = np.zeros((3, 3), dtype=complex)
    v[0, 0] = 1.0
    u = np.zeros((3, 3), dtype=complex)
    u[1, 1] = 1.0
    assert not range_included(u, v)
    with pytest.raises(RangeNotIncluded):
        min_majorization_constant(u, v)
    with pytest.raises(RangeNotIncluded):
        douglas_factor(u, v)
