from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings

from glab.algebra import (
    ArrowFunction,
    GroupoidMismatch,
    adjoint,
    algebra_closure,
    bimodule_closure,
    conditional_expectation,
    convolve,
    decompose_partition_of_unity,
    delta,
    fourier_coefficients,
    from_coeffs,
    indicator,
    is_normalizer,
    normalizer_from_bisection,
    random_function,
    reduced_norm,
    rep_block,
    rep_blocks,
    sup_norm,
    support,
    zero,
)
from glab.groupoid import cover_by_bisections, disjoint_union, is_bisection, pair_groupoid

from .conftest import BUNDLED, groupoid_names, seeds

# -- independent oracles ---------------------------------------------------------


def convolve_oracle(f, g):
    """Dictionary convolution through the string-level compose map."""
    G = f.groupoid
    out = {c: 0j for c in G.arrows}
    for a in G.arrows:
        for b in G.arrows:
            c = G.compose(a, b)
            if c is not None:
                out[c] += f[a] * g[b]
    return np.array([out[c] for c in G.arrows])


def block_oracle(f, x):
    """π_x(f)δ_γ = Σ_{t ∈ G^{r(γ)}} f(t) δ_{tγ}, assembled column by column."""
    G = f.groupoid
    basis = [a for a in G.arrows if G.source(a) == x]
    pos = {a: i for i, a in enumerate(basis)}
    M = np.zeros((len(basis), len(basis)), dtype=complex)
    for j, g in enumerate(basis):
        for t in G.arrows:
            if G.source(t) == G.range(g):
                M[pos[G.compose(t, g)], j] += f[t]
    return M


def power_norm(A, iters=2000, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=A.shape[1]) + 1j * rng.normal(size=A.shape[1])
    for _ in range(iters):
        w = A.conj().T @ (A @ v)
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
    return float(np.linalg.norm(A @ v))


def rand_f(G, seed, centered=True):
    rng = np.random.default_rng(seed)
    f = random_function(G, rng)
    return ArrowFunction(G, f.coeffs - (0.5 + 0.5j)) if centered else f


# -- convolution and adjoint -------------------------------------------------------


def test_convolution_examples(r2, z2):
    assert convolve(delta(r2, "(p,q)"), delta(r2, "(q,p)")) == delta(r2, "(p,p)")
    assert convolve(delta(z2, "a"), delta(z2, "a")) == delta(z2, "e")


def test_unit_of_algebra(bundled):
    one = indicator(bundled, bundled.units)
    f = rand_f(bundled, 3)
    assert np.allclose(convolve(one, f).coeffs, f.coeffs, atol=0)
    assert np.allclose(convolve(f, one).coeffs, f.coeffs, atol=0)


@given(name=groupoid_names, seed=seeds)
@settings(max_examples=60, deadline=None)
def test_convolution_matches_oracle(name, seed):
    G = BUNDLED[name]
    f, g = rand_f(G, seed), rand_f(G, seed + 1)
    assert np.allclose(convolve(f, g).coeffs, convolve_oracle(f, g), atol=1e-13)


@given(name=groupoid_names, seed=seeds)
@settings(max_examples=40, deadline=None)
def test_convolution_associative_and_adjoint_antimultiplicative(name, seed):
    G = BUNDLED[name]
    f, g, h = (rand_f(G, seed + k) for k in range(3))
    assert np.allclose(((f @ g) @ h).coeffs, (f @ (g @ h)).coeffs, atol=1e-12)
    assert np.allclose(adjoint(f @ g).coeffs, (adjoint(g) @ adjoint(f)).coeffs, atol=1e-12)
    assert adjoint(adjoint(f)) == f


def test_adjoint_examples(r2, z2):
    assert adjoint(delta(r2, "(p,q)")) == delta(r2, "(q,p)")
    f = from_coeffs(r2, {"(p,p)": 2.0, "(q,q)": -1.0})
    assert adjoint(f) == f
    assert adjoint(delta(z2, "a") * 1j) == delta(z2, "a") * -1j


def test_groupoid_mismatch(r2, z2):
    with pytest.raises(GroupoidMismatch):
        convolve(delta(r2, "(p,p)"), delta(z2, "e"))


# -- representation blocks -------------------------------------------------------------


def test_regular_representation_of_z2(z2):
    blk = rep_block(z2, delta(z2, "a"), "e")
    assert blk.basis == ("e", "a")
    assert np.array_equal(blk.matrix, [[0, 1], [1, 0]])


def test_r2_block_of_delta_pq(r2):
    blk = rep_block(r2, delta(r2, "(p,q)"), "(p,p)")
    assert blk.basis == ("(p,p)", "(q,p)")
    # entry (γ, γ') = f(γγ'⁻¹) puts the 1 in row (p,p), column (q,p)
    assert np.array_equal(blk.matrix, [[0, 1], [0, 0]])
    assert np.array_equal(blk.matrix, block_oracle(delta(r2, "(p,q)"), "(p,p)"))


def test_unit_supported_gives_diagonal(bundled):
    rng = np.random.default_rng(1)
    f = random_function(bundled, rng, support=bundled.units)
    for x, blk in rep_blocks(bundled, f).items():
        expected = [f[bundled.range(g)] for g in blk.basis]
        assert np.array_equal(blk.matrix, np.diag(expected))


def test_rep_block_rejects_non_unit(r2):
    with pytest.raises(ValueError):
        rep_block(r2, delta(r2, "(p,p)"), "(p,q)")


@given(name=groupoid_names, seed=seeds)
@settings(max_examples=60, deadline=None)
def test_blocks_match_oracle_and_form_star_homomorphism(name, seed):
    G = BUNDLED[name]
    f, g = rand_f(G, seed), rand_f(G, seed + 7)
    for x in G.units:
        F, Gm = rep_block(G, f, x).matrix, rep_block(G, g, x).matrix
        assert np.array_equal(F, block_oracle(f, x))
        assert np.allclose(rep_block(G, f @ g, x).matrix, F @ Gm, atol=1e-12, rtol=0)
        assert np.allclose(rep_block(G, adjoint(f), x).matrix, F.conj().T, atol=1e-12, rtol=0)


# -- reduced norm ----------------------------------------------------------------------


def test_norm_examples(r2, z2, bundled):
    assert reduced_norm(z2, delta(z2, "e") + delta(z2, "a")) == pytest.approx(2.0, abs=1e-12)
    assert reduced_norm(r2, delta(r2, "(p,q)") + delta(r2, "(q,p)")) == pytest.approx(1.0, abs=1e-12)
    for x in bundled.units:
        assert reduced_norm(bundled, delta(bundled, x)) == pytest.approx(1.0, abs=1e-12)
    assert reduced_norm(bundled, zero(bundled)) == 0.0


def test_frozen_norm_of_sample_function(r2):
    # |[[1, 0.5-0.5i], [2, 0]]|_2, frozen from an SVD oracle run
    f = from_coeffs(r2, {"(p,p)": 1, "(p,q)": 0.5 - 0.5j, "(q,p)": 2})
    assert reduced_norm(r2, f) == pytest.approx(2.260198062784, abs=1e-11)


@given(name=groupoid_names, seed=seeds)
@settings(max_examples=40, deadline=None)
def test_norm_matches_svd_and_power_iteration(name, seed):
    G = BUNDLED[name]
    f = rand_f(G, seed)
    svd = max(np.linalg.norm(block_oracle(f, x), 2) for x in G.units)
    assert abs(reduced_norm(G, f) - svd) <= 1e-9 * (1 + svd)
    power = max(power_norm(block_oracle(f, x)) for x in G.units)
    assert power <= reduced_norm(G, f) + 1e-9
    assert abs(power - svd) <= 1e-6 * (1 + svd)


@given(name=groupoid_names, seed=seeds)
@settings(max_examples=40, deadline=None)
def test_c_star_identity_and_sup_bound(name, seed):
    G = BUNDLED[name]
    f = rand_f(G, seed)
    n = reduced_norm(G, f)
    assert abs(reduced_norm(G, adjoint(f) @ f) - n**2) <= 1e-8 * (1 + n**2)
    assert sup_norm(f) <= n + 1e-9


def test_disjoint_union_norm_is_max(r2, z2):
    U = disjoint_union(r2, z2)
    rng = np.random.default_rng(4)
    for _ in range(20):
        f1, f2 = random_function(r2, rng), random_function(z2, rng)
        f = ArrowFunction(U, np.concatenate([f1.coeffs, f2.coeffs]))
        assert reduced_norm(U, f) == pytest.approx(max(reduced_norm(r2, f1), reduced_norm(z2, f2)), abs=1e-12)


# -- evaluation map --------------------------------------------------------------------


def test_fourier_round_trip(bundled):
    f = rand_f(bundled, 11)
    assert fourier_coefficients(bundled, rep_blocks(bundled, f)) == f
    assert fourier_coefficients(bundled, rep_blocks(bundled, zero(bundled))) == zero(bundled)


def test_fourier_z2(z2):
    assert fourier_coefficients(z2, [rep_block(z2, delta(z2, "a"), "e")]) == delta(z2, "a")


def test_fourier_rejects_inconsistent_blocks(r2):
    blocks = rep_blocks(r2, delta(r2, "(p,q)"))
    other = rep_block(r2, delta(r2, "(q,q)"), "(q,q)")
    blocks["(q,q)"] = other
    with pytest.raises(ValueError):
        fourier_coefficients(r2, blocks)


# -- expectation, support, sup norm ------------------------------------------------


def test_conditional_expectation(z2, bundled):
    assert conditional_expectation(delta(z2, "a")) == zero(z2)
    assert conditional_expectation(delta(z2, "e")) == delta(z2, "e")
    rng = np.random.default_rng(2)
    for _ in range(20):
        f = random_function(bundled, rng)
        E = conditional_expectation(f)
        assert conditional_expectation(E) == E
        assert reduced_norm(bundled, E) <= reduced_norm(bundled, f) + 1e-12


def test_support_examples(z2):
    assert support(delta(z2, "a")) == {"a"}
    assert support(zero(z2)) == frozenset()
    with pytest.raises(ValueError):
        support(zero(z2), -1)


@given(name=groupoid_names, seed=seeds)
@settings(max_examples=30, deadline=None)
def test_support_of_sum(name, seed):
    G = BUNDLED[name]
    rng = np.random.default_rng(seed)
    f = random_function(G, rng, support=[a for a in G.arrows if rng.uniform() < 0.5])
    g = random_function(G, rng, support=[a for a in G.arrows if rng.uniform() < 0.5])
    assert support(f + g) <= support(f) | support(g)


def test_sup_norm_examples(z2):
    assert sup_norm(delta(z2, "a")) == 1
    assert sup_norm(delta(z2, "e") * 2 - delta(z2, "a")) == 2


@given(name=groupoid_names, seed=seeds)
@settings(max_examples=60, deadline=None)
def test_bisection_isometry_and_approximate_unit(name, seed):
    G = BUNDLED[name]
    rng = np.random.default_rng(seed)
    S = [a for a in G.arrows if rng.uniform() < 0.5]
    for B in cover_by_bisections(G, S):
        f = random_function(G, rng, support=B)
        assert abs(reduced_norm(G, f) - sup_norm(f)) <= 1e-9
        w = indicator(G, {G.source(b) for b in B})
        assert convolve(f, w) == f


# -- normalizers -------------------------------------------------------------------


def test_normalizer_examples(r2, z2):
    assert is_normalizer(r2, delta(r2, "(p,q)"))
    assert not is_normalizer(r2, delta(r2, "(p,q)") + delta(r2, "(p,p)"))
    # f ∗ f* = 2δ_e + 2δ_a leaves the diagonal
    f = delta(z2, "e") + delta(z2, "a")
    assert np.array_equal((f @ adjoint(f)).coeffs, [2, 2])
    assert not is_normalizer(z2, f)


def test_normalizer_from_bisection_examples(r2, z2):
    a = delta(r2, "(p,q)") + delta(r2, "(p,p)")
    assert normalizer_from_bisection(r2, a, {"(p,q)"}) == delta(r2, "(p,q)")
    assert normalizer_from_bisection(z2, delta(z2, "a"), {"a"}) == delta(z2, "a")
    with pytest.raises(ValueError):
        normalizer_from_bisection(z2, delta(z2, "a"), {"e"})
    with pytest.raises(ValueError):
        normalizer_from_bisection(r2, a + delta(r2, "(q,p)"), {"(p,p)", "(p,q)"})


@given(name=groupoid_names, seed=seeds)
@settings(max_examples=60, deadline=None)
def test_normalizer_closed_form(name, seed):
    G = BUNDLED[name]
    rng = np.random.default_rng(seed)
    a = rand_f(G, seed)
    cover = cover_by_bisections(G, support(a))
    B = cover[int(rng.integers(len(cover)))]
    m = normalizer_from_bisection(G, a, B)
    assert np.allclose(m.coeffs, a.coeffs * G.mask(B), atol=1e-14)
    assert support(m) == B
    assert is_normalizer(G, m)


# -- decomposition -----------------------------------------------------------------


def test_decompose_examples(r2):
    f = rand_f(r2, 5)
    pieces = decompose_partition_of_unity(r2, f)
    assert len(pieces) == 2
    g = delta(r2, "(p,q)") + delta(r2, "(q,p)") * 3
    assert decompose_partition_of_unity(r2, g) == [g]
    assert decompose_partition_of_unity(r2, zero(r2)) == []


@given(name=groupoid_names, seed=seeds)
@settings(max_examples=40, deadline=None)
def test_decompose_sums_exactly(name, seed):
    G = BUNDLED[name]
    f = rand_f(G, seed)
    pieces = decompose_partition_of_unity(G, f)
    assert np.array_equal(sum((p.coeffs for p in pieces), np.zeros(len(G), complex)), f.coeffs)
    assert all(is_bisection(G, support(p)) for p in pieces)


# -- closures --------------------------------------------------------------------------


def test_algebra_closure_examples(r2, z2):
    assert algebra_closure(r2, [delta(r2, "(p,q)")]).rank == 4
    assert algebra_closure(r2, []).rank == 2
    assert algebra_closure(z2, [delta(z2, "e")], adjoin_unit_algebra=False).rank == 1


def _closed_under_products(B):
    G = B.groupoid
    fs = B.functions()
    for f in fs:
        if not B.contains(adjoint(f).coeffs):
            return False
        for g in fs:
            if not B.contains((f @ g).coeffs):
                return False
    return True


@given(name=groupoid_names, seed=seeds)
@settings(max_examples=25, deadline=None)
def test_algebra_closure_is_star_closed(name, seed):
    G = BUNDLED[name]
    rng = np.random.default_rng(seed)
    gens = [random_function(G, rng, support=[a for a in G.arrows if rng.uniform() < 0.3])]
    B = algebra_closure(G, gens)
    assert _closed_under_products(B)
    assert np.allclose(B.vectors @ B.vectors.conj().T, np.eye(B.rank), atol=1e-10)
    assert all(B.contains(delta(G, x).coeffs) for x in G.units)


def test_bimodule_closure_examples(r2, z2):
    M = bimodule_closure(r2, [delta(r2, "(p,q)")])
    assert M.rank == 1 and M.contains(delta(r2, "(p,q)").coeffs)
    f = delta(z2, "e") + delta(z2, "a")
    M = bimodule_closure(z2, [f])
    assert M.rank == 1 and M.contains(f.coeffs)
    full = bimodule_closure(r2, [delta(r2, a) for a in r2.arrows])
    assert full.rank == 4


@given(name=groupoid_names, seed=seeds)
@settings(max_examples=25, deadline=None)
def test_bimodule_closure_closed_under_unit_action(name, seed):
    G = BUNDLED[name]
    gens = [rand_f(G, seed)]
    M = bimodule_closure(G, gens)
    for v in M.functions():
        for x in G.units:
            assert M.contains((delta(G, x) @ v).coeffs)
            assert M.contains((v @ delta(G, x)).coeffs)


def test_pair_groupoid_three_points_closure():
    G = pair_groupoid(["p", "q", "r"])
    B = algebra_closure(G, [delta(G, "(p,q)")])
    H = G.names(np.flatnonzero(B.coordinate_weight() > 1e-8))
    assert H == set(G.units) | {"(p,q)", "(q,p)"}
