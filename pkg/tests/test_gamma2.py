from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import hadamard

from glab.gamma2 import Gamma2Error, gamma2, weighted_trace_norm

from .conftest import seeds
from .oracles import gamma2_brute, gamma2_cvxpy


def rand_complex(n, seed):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def check_certificates(H, res, tol=1e-6):
    n = H.shape[0]
    Z = res.primal
    assert np.allclose(Z[:n, n:], H, atol=1e-12)
    assert np.linalg.eigvalsh(0.5 * (Z + Z.conj().T))[0] >= -1e-10 * max(1.0, res.upper)
    assert np.real(np.diag(Z)).max() == pytest.approx(res.upper, abs=1e-12)
    assert np.linalg.norm(res.u) == pytest.approx(1.0) and (res.u >= 0).all()
    assert np.linalg.norm(res.v) == pytest.approx(1.0) and (res.v >= 0).all()
    assert weighted_trace_norm(H, res.u, res.v) == pytest.approx(res.lower, abs=1e-12)
    # the witness is a contraction pairing to the lower bound
    assert np.linalg.norm(res.witness, 2) <= 1 + 1e-10
    paired = np.real(np.trace(res.witness.conj().T @ (res.u[:, None] * H * res.v[None, :])))
    assert paired == pytest.approx(res.lower, abs=1e-10)
    assert res.lower <= res.value <= res.upper
    assert res.upper - res.lower <= 2 * tol


def test_identity_and_ones():
    for n in (1, 2, 3, 5):
        assert gamma2(np.eye(n)).value == pytest.approx(1.0, abs=1e-9)
        assert gamma2(np.ones((n, n))).value == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_hadamard_is_sqrt_n(n):
    # H = H·I gives the upper bound, uniform weights the matching lower bound
    res = gamma2(hadamard(n))
    assert res.value == pytest.approx(np.sqrt(n), abs=2e-6)


@given(seed=seeds, n=st.integers(1, 5))
@settings(max_examples=20, deadline=None)
def test_psd_gives_max_diagonal(seed, n):
    A = rand_complex(n, seed)
    P = A @ A.conj().T
    res = gamma2(P)
    assert res.value == pytest.approx(np.real(np.diag(P)).max(), abs=2e-6 * (1 + np.abs(P).max()))


def test_zero_and_empty():
    assert gamma2(np.zeros((3, 3))).value == 0.0
    assert gamma2(np.zeros((0, 0))).value == 0.0


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        gamma2(np.ones((2, 3)))
    with pytest.raises(ValueError):
        gamma2(np.eye(2), tol=0)


def test_gap_failure_raises():
    with pytest.raises(Gamma2Error):
        gamma2(rand_complex(6, 1), max_iter=2)


@given(seed=seeds, n=st.integers(1, 6))
@settings(max_examples=30, deadline=None)
def test_certificates_are_valid(seed, n):
    H = rand_complex(n, seed)
    check_certificates(H, gamma2(H))


@given(seed=seeds, n=st.integers(2, 5))
@settings(max_examples=15, deadline=None)
def test_matches_conic_solver(seed, n):
    H = rand_complex(n, seed)
    assert gamma2(H).value == pytest.approx(gamma2_cvxpy(H), abs=2e-6 * (1 + np.abs(H).max()))


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("n", [2, 3])
def test_matches_brute_force_dual(n, seed):
    H = rand_complex(n, 100 + seed)
    brute = gamma2_brute(H)
    res = gamma2(H)
    # the brute-force search is a lower bound that local refinement makes tight
    assert brute <= res.upper + 1e-9
    assert res.value == pytest.approx(brute, abs=2e-6)


@given(seed=seeds, n=st.integers(1, 5), c=st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False))
@settings(max_examples=20, deadline=None)
def test_homogeneous_and_subadditive(seed, n, c):
    H, K = rand_complex(n, seed), rand_complex(n, seed + 1)
    g = gamma2(H).value
    assert gamma2(c * H).value == pytest.approx(abs(c) * g, abs=3e-6 * (1 + abs(c)) * (1 + np.abs(H).max()))
    assert gamma2(H + K).value <= g + gamma2(K).value + 3e-6 * (1 + np.abs(H).max() + np.abs(K).max())


@given(seed=seeds, n=st.integers(1, 5))
@settings(max_examples=20, deadline=None)
def test_bounded_by_spectral_and_entries(seed, n):
    # max |h_ij| ≤ γ₂(H) ≤ ‖H‖
    H = rand_complex(n, seed)
    v = gamma2(H).value
    assert np.abs(H).max() <= v + 2e-6
    assert v <= np.linalg.norm(H, 2) + 2e-6


def test_deterministic():
    H = rand_complex(5, 9)
    a, b = gamma2(H), gamma2(H)
    assert a.value == b.value and np.array_equal(a.primal, b.primal)


def test_to_dict_shape():
    d = gamma2(np.eye(2)).to_dict()
    assert set(d) >= {"value", "upper", "lower", "gap", "primal", "dual"}
    assert len(d["primal"]) == 4 and len(d["primal"][0][0]) == 2
