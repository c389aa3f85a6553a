"""The convolution *-algebra of a finite groupoid and its regular representation.

In the finite case the evaluation map is a bijection, so elements of the
reduced C*-algebra are stored as plain coefficient vectors
(:class:`ArrowFunction`) and the representation blocks are derived views.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .groupoid import CapExceeded, FiniteGroupoid, cover_by_bisections, is_bisection

__all__ = [
    "ArrowFunction",
    "RepBlock",
    "SubspaceBasis",
    "delta",
    "indicator",
    "from_coeffs",
    "random_function",
    "convolve",
    "adjoint",
    "rep_block",
    "rep_blocks",
    "reduced_norm",
    "fourier_coefficients",
    "conditional_expectation",
    "support",
    "sup_norm",
    "is_normalizer",
    "normalizer_from_bisection",
    "decompose_partition_of_unity",
    "orthonormalize",
    "algebra_closure",
    "bimodule_closure",
    "RANK_RTOL",
    "NORM_ATOL",
]

RANK_RTOL = 1e-8
NORM_ATOL = 1e-9
MAX_ARROWS = 64
MAX_GENERATORS = 256


class GroupoidMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ArrowFunction:
    """A complex function on the arrows of ``groupoid``.

    Supports ``+``, ``-``, scalar multiplication and ``@`` for convolution.
    """

    groupoid: FiniteGroupoid
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (len(self.groupoid),):
            raise ValueError(f"expected {len(self.groupoid)} coefficients, got shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, arrow: str) -> complex:
        return complex(self.coeffs[self.groupoid.idx(arrow)])

    def _same(self, other: "ArrowFunction") -> None:
        if not isinstance(other, ArrowFunction):
            raise TypeError(f"expected ArrowFunction, got {type(other).__name__}")
        if other.groupoid != self.groupoid:
            raise GroupoidMismatch("functions live on different groupoids")

    def __add__(self, other):
        self._same(other)
        return ArrowFunction(self.groupoid, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._same(other)
        return ArrowFunction(self.groupoid, self.coeffs - other.coeffs)

    def __neg__(self):
        return ArrowFunction(self.groupoid, -self.coeffs)

    def __mul__(self, c):
        if isinstance(c, ArrowFunction):
            return NotImplemented
        return ArrowFunction(self.groupoid, complex(c) * self.coeffs)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return convolve(self, other)

    def __eq__(self, other):
        if not isinstance(other, ArrowFunction):
            return NotImplemented
        return self.groupoid == other.groupoid and np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def __repr__(self):
        terms = [f"{c:.4g}·δ[{a}]" for a, c in zip(self.groupoid.arrows, self.coeffs) if c != 0]
        return "ArrowFunction(" + (" + ".join(terms) or "0") + ")"

    def adjoint(self) -> "ArrowFunction":
        return adjoint(self)

    def to_dict(self) -> dict[str, list[float]]:
        return {
            a: [float(c.real), float(c.imag)]
            for a, c in zip(self.groupoid.arrows, self.coeffs)
            if c != 0
        }


def from_coeffs(G: FiniteGroupoid, coeffs: Mapping[str, complex]) -> ArrowFunction:
    v = np.zeros(len(G), dtype=complex)
    for a, c in coeffs.items():
        v[G.idx(a)] = complex(*c) if isinstance(c, (list, tuple)) else complex(c)
    return ArrowFunction(G, v)


def delta(G: FiniteGroupoid, arrow: str) -> ArrowFunction:
    v = np.zeros(len(G), dtype=complex)
    v[G.idx(arrow)] = 1.0
    return ArrowFunction(G, v)


def indicator(G: FiniteGroupoid, S: Iterable[str]) -> ArrowFunction:
    return ArrowFunction(G, G.mask(S).astype(complex))


def zero(G: FiniteGroupoid) -> ArrowFunction:
    return ArrowFunction(G, np.zeros(len(G), dtype=complex))


def random_function(
    G: FiniteGroupoid, rng: np.random.Generator, support: Iterable[str] | None = None
) -> ArrowFunction:
    """Coefficients uniform on the complex unit square, optionally restricted."""
    v = rng.uniform(0, 1, len(G)) + 1j * rng.uniform(0, 1, len(G))
    if support is not None:
        v = v * G.mask(support)
    return ArrowFunction(G, v)


# -- *-algebra operations ------------------------------------------------------


def convolve(f: ArrowFunction, g: ArrowFunction) -> ArrowFunction:
    """(f∗g)(γ) = Σ_{αβ=γ} f(α) g(β), summed over composable pairs."""
    f._same(g)
    G = f.groupoid
    a, b, c = G.pairs
    out = np.zeros(len(G), dtype=complex)
    np.add.at(out, c, f.coeffs[a] * g.coeffs[b])
    return ArrowFunction(G, out)


def adjoint(f: ArrowFunction) -> ArrowFunction:
    """f*(γ) = conj f(γ⁻¹)."""
    return ArrowFunction(f.groupoid, np.conj(f.coeffs[f.groupoid.inv]))


@dataclass(frozen=True, eq=False)
class RepBlock:
    """Matrix of π_x(f) on ℓ²(G_x) in the basis ``basis``."""

    unit: str
    basis: tuple[str, ...]
    matrix: np.ndarray


def rep_block(G: FiniteGroupoid, f: ArrowFunction, x: str) -> RepBlock:
    """Regular representation block with entry (γ, γ') equal to f(γ γ'⁻¹)."""
    if f.groupoid != G:
        raise GroupoidMismatch("function does not live on G")
    idx = G.block_index(x)
    basis = tuple(G.arrows[i] for i in G.fiber(x))
    return RepBlock(x, basis, f.coeffs[idx])


def rep_blocks(G: FiniteGroupoid, f: ArrowFunction) -> dict[str, RepBlock]:
    return {x: rep_block(G, f, x) for x in G.units}


def _spectral_norm(A: np.ndarray) -> float:
    if A.size == 0:
        return 0.0
    w = np.linalg.eigvalsh(A.conj().T @ A)
    return float(np.sqrt(max(w[-1], 0.0)))


def reduced_norm(G: FiniteGroupoid, f: ArrowFunction) -> float:
    """max over units x of ‖π_x(f)‖, via the top eigenvalue of π_x(f)†π_x(f)."""
    if f.groupoid != G:
        raise GroupoidMismatch("function does not live on G")
    return max((_spectral_norm(f.coeffs[G.block_index(x)]) for x in G.units), default=0.0)


def fourier_coefficients(
    G: FiniteGroupoid, blocks: Mapping[str, RepBlock] | Sequence[RepBlock], atol: float = 1e-12
) -> ArrowFunction:
    """Read off j(f)(g) = ⟨δ_g, π_{s(g)}(f) δ_{s(g)}⟩ from representation blocks.

    The blocks must all come from one element: after extraction every block
    is rebuilt and compared entrywise, raising ``ValueError`` otherwise.
    """
    if not isinstance(blocks, Mapping):
        blocks = {b.unit: b for b in blocks}
    if set(blocks) != set(G.units):
        raise ValueError("need exactly one block per unit")
    v = np.zeros(len(G), dtype=complex)
    for x, blk in blocks.items():
        fiber = G.fiber(x)
        if blk.matrix.shape != (len(fiber), len(fiber)):
            raise ValueError(f"block at {x} has the wrong shape")
        col = fiber.index(G.idx(x))
        v[list(fiber)] = blk.matrix[:, col]
    f = ArrowFunction(G, v)
    scale = max((np.abs(b.matrix).max(initial=0.0) for b in blocks.values()), default=0.0)
    for x, blk in blocks.items():
        if not np.allclose(rep_block(G, f, x).matrix, blk.matrix, rtol=0, atol=atol * (1 + scale)):
            raise ValueError(f"block at {x} is inconsistent with the others")
    return f


def conditional_expectation(f: ArrowFunction) -> ArrowFunction:
    """Restriction to the unit space."""
    return ArrowFunction(f.groupoid, f.coeffs * f.groupoid.unit_mask)


def support(f: ArrowFunction, tol: float = 0.0) -> frozenset[str]:
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    return f.groupoid.names(np.flatnonzero(np.abs(f.coeffs) > tol))


def sup_norm(f: ArrowFunction) -> float:
    return float(np.abs(f.coeffs).max(initial=0.0))


def is_normalizer(G: FiniteGroupoid, f: ArrowFunction, tol: float = NORM_ATOL) -> bool:
    """Whether f δ_x f* and f* δ_x f stay on the units for every unit x."""
    fs = adjoint(f)
    off = ~G.unit_mask
    for x in G.units:
        d = delta(G, x)
        for p in (convolve(convolve(f, d), fs), convolve(convolve(fs, d), f)):
            if np.abs(p.coeffs[off]).max(initial=0.0) > tol:
                return False
    return True


def normalizer_from_bisection(G: FiniteGroupoid, a: ArrowFunction, B: Iterable[str]) -> ArrowFunction:
    """The normalizer m = n ∗ E(n* ∗ a) with n the indicator of the bisection B.

    The result equals |n|²·a pointwise, so its support is exactly ``B``.
    """
    B = frozenset(B)
    if not is_bisection(G, B):
        raise ValueError("B is not a bisection")
    if not B <= support(a):
        raise ValueError("B is not contained in the support of a")
    n = indicator(G, B)
    return convolve(n, conditional_expectation(convolve(adjoint(n), a)))


def decompose_partition_of_unity(G: FiniteGroupoid, f: ArrowFunction, tol: float = 0.0) -> list[ArrowFunction]:
    """Split f into pieces supported on disjoint bisections covering supp(f)."""
    return [
        ArrowFunction(G, f.coeffs * G.mask(B)) for B in cover_by_bisections(G, support(f, tol))
    ]


# -- subspaces -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal basis (rows of ``vectors``) of a space of arrow functions.

    ``kind`` records the structure the span was closed under: ``"algebra"``,
    ``"unital-algebra"`` (contains every δ_x), ``"bimodule"`` or
    ``"subspace"``.
    """

    groupoid: FiniteGroupoid
    vectors: np.ndarray
    tol: float = RANK_RTOL
    kind: str = "subspace"

    @property
    def rank(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def functions(self) -> list[ArrowFunction]:
        return [ArrowFunction(self.groupoid, v) for v in self.vectors]

    def projector(self) -> np.ndarray:
        return self.vectors.T @ self.vectors.conj()

    def project(self, v: np.ndarray) -> np.ndarray:
        return self.vectors.T @ (self.vectors.conj() @ v)

    def residual(self, v) -> float:
        """Distance from ``v`` (array or ArrowFunction) to the span."""
        v = v.coeffs if isinstance(v, ArrowFunction) else np.asarray(v)
        return float(np.linalg.norm(v - self.project(v)))

    def contains(self, v, tol: float = 1e-8) -> bool:
        return self.residual(v) <= tol

    def mutual_residual(self, other: "SubspaceBasis") -> float:
        """Largest distance of a unit vector of either space from the other."""
        a = orthonormalize(self.vectors)
        b = orthonormalize(other.vectors)
        r = 0.0
        for x, y in ((a, b), (b, a)):
            if x.shape[0] == 0:
                continue
            if y.shape[0] == 0:
                r = max(r, 1.0)
                continue
            proj = (x @ y.conj().T) @ y
            r = max(r, float(np.linalg.norm(x - proj, axis=1).max()))
        return r

    def same_space(self, other: "SubspaceBasis", tol: float = 1e-8) -> bool:
        return self.rank == other.rank and self.mutual_residual(other) <= tol

    def coordinate_weight(self) -> np.ndarray:
        """Norm of each coordinate column; positive exactly on the joint support."""
        return np.linalg.norm(self.vectors, axis=0)


def orthonormalize(vectors: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal rows spanning the row space, dropping directions below ``rtol``."""
    vectors = np.atleast_2d(np.asarray(vectors, dtype=complex))
    if vectors.shape[0] == 0:
        return vectors.reshape(0, vectors.shape[1])
    _, s, vh = np.linalg.svd(vectors, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((0, vectors.shape[1]), dtype=complex)
    r = int(np.count_nonzero(s > rtol * s[0]))
    return vh[:r]


def _check_caps(G: FiniteGroupoid, generators: Sequence[ArrowFunction]) -> None:
    if len(G) > MAX_ARROWS:
        raise CapExceeded(f"{len(G)} arrows exceeds the closure cap {MAX_ARROWS}")
    if len(generators) > MAX_GENERATORS:
        raise CapExceeded(f"{len(generators)} generators exceeds the cap {MAX_GENERATORS}")
    for g in generators:
        if g.groupoid != G:
            raise GroupoidMismatch("generator does not live on G")


def _products(G: FiniteGroupoid, Q: np.ndarray) -> np.ndarray:
    """All convolutions Q[i] ∗ Q[j], flattened to rows."""
    a, b, c = G.pairs
    k, n = Q.shape
    inc = np.zeros((len(c), n))
    inc[np.arange(len(c)), c] = 1.0
    terms = Q[:, None, a] * Q[None, :, b]
    return (terms @ inc).reshape(k * k, n)


def algebra_closure(
    G: FiniteGroupoid, generators: Sequence[ArrowFunction], adjoin_unit_algebra: bool = True,
    rtol: float = RANK_RTOL,
) -> SubspaceBasis:
    """Smallest *-subalgebra containing ``generators`` (and every δ_x if asked).

    Grows the span by adjoints and pairwise products until the numerical
    rank stops increasing.
    """
    _check_caps(G, generators)
    rows = [g.coeffs for g in generators]
    if adjoin_unit_algebra:
        rows += [delta(G, x).coeffs for x in G.units]
    n = len(G)
    Q = orthonormalize(np.array(rows).reshape(len(rows), n), rtol)
    for _ in range(n + 2):
        if Q.shape[0] == 0:
            break
        adj = np.conj(Q[:, G.inv])
        cand = np.vstack([Q, adj, _products(G, Q)])
        Q2 = orthonormalize(cand, rtol)
        if Q2.shape[0] == Q.shape[0]:
            Q = Q2
            break
        Q = Q2
    else:  # pragma: no cover - rank is bounded by len(G)
        raise AssertionError("span growth did not reach a fixed point")
    kind = "unital-algebra" if adjoin_unit_algebra else "algebra"
    return SubspaceBasis(G, Q, rtol, kind)


def bimodule_closure(
    G: FiniteGroupoid, generators: Sequence[ArrowFunction], rtol: float = RANK_RTOL
) -> SubspaceBasis:
    """Smallest span closed under δ_x ∗ · and · ∗ δ_y for all units x, y.

    δ_x ∗ f ∗ δ_y keeps the coefficients on arrows from y to x, so one pass
    over unit pairs reaches the fixed point; a second pass confirms it.
    """
    _check_caps(G, generators)
    n = len(G)
    Q = orthonormalize(np.array([g.coeffs for g in generators]).reshape(len(generators), n), rtol)
    units = list(G.unit_indices)
    masks = [(G.rng == x) & (G.src == y) for x in units for y in units]
    for _ in range(3):
        cand = np.vstack([Q] + [Q * m for m in masks if m.any()]) if Q.shape[0] else Q
        Q2 = orthonormalize(cand, rtol)
        if Q2.shape[0] == Q.shape[0]:
            Q = Q2
            break
        Q = Q2
    return SubspaceBasis(G, Q, rtol, "bimodule")
