"""Shared fixtures and independent oracles for the test suite.

The oracles here stay independent of the library code paths they check:
the pencil bound oracle goes through an explicit square-root reduction and
plain dense eigensolves, never through the package's bisection or
pseudoinverse cross-check.
"""

import math

import numpy as np
import pytest


def rand_complex(rng, shape, scale=1.0):
    """I.i.d. complex standard normal entries times scale."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * (
        scale / math.sqrt(2.0)
    )


def rand_system(rng, n, block_dims):
    """Test-local random system builder (independent of the verifier's)."""
    from kgframes import GFrameSystem

    ops = [rand_complex(rng, (m, n), 1.0 / math.sqrt(n)) for m in block_dims]
    return GFrameSystem(n, tuple(block_dims), tuple(ops))


def eig2_oracle(m):
    """Eigenvalues of a 2x2 Hermitian matrix by the quadratic formula."""
    a = m[0, 0].real
    d = m[1, 1].real
    b = m[0, 1]
    tr = a + d
    det = a * d - (b * np.conj(b)).real
    disc = math.sqrt(max(tr * tr - 4.0 * det, 0.0))
    return sorted([(tr - disc) / 2.0, (tr + disc) / 2.0])


def pencil_lower_oracle(s, m, cutoff=1e-10):
    """Independent max{lam >= 0 : s - lam*m >= 0} for PSD s, m.

    Reduces through the pseudo square root of s: if m's quadratic form is
    nonzero on the null space of s the answer is 0; otherwise it equals
    1 / lambda_max(s^{+1/2} m s^{+1/2}).
    """
    s = 0.5 * (s + s.conj().T)
    m = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(s)
    top = w[-1] if w.size else 0.0
    if top <= 0.0:
        return float("inf") if np.linalg.norm(m) == 0 else 0.0
    keep = w >= cutoff * top
    null_vecs = v[:, ~keep]
    if null_vecs.size and np.linalg.norm(null_vecs.conj().T @ m @ null_vecs) > 1e-12 * max(
        np.linalg.norm(m), 1.0
    ):
        return 0.0
    inv_sqrt = v[:, keep] @ np.diag(1.0 / np.sqrt(w[keep])) @ v[:, keep].conj().T
    core = inv_sqrt @ m @ inv_sqrt
    lam_max = float(np.linalg.eigvalsh(0.5 * (core + core.conj().T))[-1])
    if lam_max <= 0.0:
        return float("inf")
    return 1.0 / lam_max


def psd_scan_oracle(s, m, hi, iters=80):
    """Second independent route: plain bisection with raw eigensolves."""

    def ok(lam):
        pencil = s - lam * m
        pencil = 0.5 * (pencil + pencil.conj().T)
        return np.linalg.eigvalsh(pencil)[0] >= -1e-12 * max(np.linalg.norm(pencil), 1.0)

    if ok(hi):
        return hi
    lo = 0.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
