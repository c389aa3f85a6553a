"""γ₂ factorization norm of a complex matrix, with primal and dual certificates.

For a Schur symbol H the completely bounded norm of A ↦ H ⊙ A equals

    γ₂(H) = min t  s.t.  Z = [[X, H], [H†, Y]] ⪰ 0,  diag(Z) ≤ t
          = max ‖diag(u) H diag(v)‖_tr  over unit vectors u, v ≥ 0.

The first program is solved by a primal-dual interior-point method (HKM
search direction with a Mehrotra predictor-corrector) working directly
on Hermitian matrices.  The returned upper bound comes from the primal
completion after its off-diagonal block is reset to H exactly and the
diagonal is shifted to restore positivity; the lower bound is the
weighted trace norm at the dual scaling vectors, polished by coordinate
ascent.  Both bounds are valid regardless of how accurately the
iteration converged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla

__all__ = ["Gamma2Result", "Gamma2Error", "gamma2", "weighted_trace_norm"]

log = logging.getLogger(__name__)

MAX_ITER = 10_000


class Gamma2Error(RuntimeError):
    """The duality gap stayed above the requested tolerance."""


@dataclass(frozen=True, eq=False)
class Gamma2Result:
    """Value and certificates for γ₂(H).

    ``primal`` is a PSD matrix [[X, H], [H†, Y]] whose largest diagonal
    entry is ``upper``.  ``u``, ``v`` are unit nonnegative vectors and
    ``witness`` the polar factor W with Re tr(W† diag(u) H diag(v)) =
    ``lower``.
    """

    value: float
    upper: float
    lower: float
    primal: np.ndarray
    u: np.ndarray
    v: np.ndarray
    witness: np.ndarray
    iterations: int

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "upper": self.upper,
            "lower": self.lower,
            "gap": self.gap,
            "iterations": self.iterations,
            "primal": _cplx(self.primal),
            "dual": {"u": self.u.tolist(), "v": self.v.tolist(), "witness": _cplx(self.witness)},
        }


def _cplx(a: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(a)]


def weighted_trace_norm(H: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    """‖diag(u) H diag(v)‖_tr, a lower bound for γ₂(H) when ‖u‖ = ‖v‖ = 1."""
    return float(np.linalg.svd(u[:, None] * H * v[None, :], compute_uv=False).sum())


def _polish(H: np.ndarray, u: np.ndarray, v: np.ndarray, steps: int = 50):
    """Coordinate ascent on the weighted trace norm; never decreases it."""
    best = weighted_trace_norm(H, u, v)
    W = None
    for _ in range(steps):
        P, _, Qh = np.linalg.svd(u[:, None] * H * v[None, :])
        W = P @ Qh
        K = np.real(np.conj(W) * H)
        un = np.clip(K @ v, 0, None)
        if np.linalg.norm(un) == 0:
            break
        un /= np.linalg.norm(un)
        vn = np.clip(K.T @ un, 0, None)
        if np.linalg.norm(vn) == 0:
            break
        vn /= np.linalg.norm(vn)
        val = weighted_trace_norm(H, un, vn)
        if val <= best * (1 + 1e-15):
            break
        u, v, best = un, vn, val
    P, _, Qh = np.linalg.svd(u[:, None] * H * v[None, :])
    return u, v, best, P @ Qh


class _Problem:
    """min t  s.t.  Z_kk + s_k - t = 0,  Z[i, n+j] = H[i, j],  Z ⪰ 0,  (s, t) ≥ 0."""

    def __init__(self, H: np.ndarray):
        self.H = H
        self.n = n = H.shape[0]
        self.N = 2 * n
        self.nlp = self.N + 1
        self.m = self.N + 2 * n * n
        self.b = np.concatenate([np.zeros(self.N), H.real.ravel(), H.imag.ravel()])
        self.c = np.zeros(self.nlp)
        self.c[-1] = 1.0

    def op(self, Z: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Constraint map applied to (Hermitian part of Z, x)."""
        n = self.n
        Zs = 0.5 * (Z + Z.conj().T)
        off = Zs[:n, n:]
        diag = np.real(np.diag(Zs)) + x[:-1] - x[-1]
        return np.concatenate([diag, off.real.ravel(), off.imag.ravel()])

    def adj(self, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        n, N = self.n, self.N
        Z = np.diag(y[:N]).astype(complex)
        nn = n * n
        blk = (y[N : N + nn] + 1j * y[N + nn :]).reshape(n, n) / 2
        Z[:n, n:] = blk
        Z[n:, :n] = blk.conj().T
        x = np.concatenate([y[:N], [-y[:N].sum()]])
        return Z, x

    @cached_property
    def _basis(self):
        """Adjoint images of the coordinate vectors: (m, N, N) and (m, nlp)."""
        eye = np.eye(self.m)
        mats, lps = zip(*(self.adj(e) for e in eye))
        return np.stack(mats), np.stack(lps)

    def schur(self, X, x, Sinv, s) -> np.ndarray:
        """M[:, l] = A(X A*(e_l) S⁻¹, x ∘ a*(e_l) / s), batched over l."""
        n = self.n
        Az, al = self._basis
        T = X @ Az @ Sinv
        T = 0.5 * (T + np.conj(np.swapaxes(T, 1, 2)))
        diag = np.real(np.diagonal(T, axis1=1, axis2=2)) + (x * al / s)[:, :-1] - (x * al / s)[:, -1:]
        off = T[:, :n, n:].reshape(self.m, n * n)
        M = np.concatenate([diag, off.real, off.imag], axis=1).T
        return 0.5 * (M + M.T)


def _max_step(X: np.ndarray, D: np.ndarray) -> float:
    L = np.linalg.cholesky(X)
    Li = sla.solve_triangular(L, np.eye(len(L)), lower=True)
    lam = np.linalg.eigvalsh(Li @ D @ Li.conj().T)[0]
    return np.inf if lam >= 0 else -1.0 / lam


def _max_step_lp(x: np.ndarray, d: np.ndarray) -> float:
    neg = d < 0
    return np.inf if not neg.any() else float(np.min(-x[neg] / d[neg]))


def _ipm(P: _Problem, max_iter: int, eps: float = 1e-11, gap_stop: float = 1e-10):
    """Iterate until converged; return the iterate with the smallest certified gap.

    Steps taken at the rounding floor can lose feasibility, so the final
    iterate is not necessarily the best one.
    """
    N, nlp = P.N, P.nlp
    X = np.eye(N, dtype=complex)
    x = np.ones(nlp)
    S = np.eye(N, dtype=complex)
    s = np.ones(nlp)
    y = np.zeros(P.m)
    nu = N + nlp
    herm = lambda A: 0.5 * (A + A.conj().T)  # noqa: E731
    best = (np.inf, X, y)
    it = 0
    for it in range(1, max_iter + 1):
        gap = _quick_gap(P.H, X, y)
        if gap < best[0]:
            best = (gap, X, y)
        if gap <= gap_stop:
            break
        rp = P.b - P.op(X, x)
        Az, al = P.adj(y)
        Rd = -S - Az
        rd = P.c - s - al
        mu = (np.real(np.trace(X @ S)) + x @ s) / nu
        pobj, dobj = x[-1], P.b @ y
        pinf = np.linalg.norm(rp) / (1 + np.linalg.norm(P.b))
        dinf = (np.linalg.norm(Rd) + np.linalg.norm(rd)) / 2
        if max(pinf, dinf) < eps and abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj)) < eps:
            break
        if mu < 1e-16:
            break
        try:
            step = _newton_step(P, X, x, S, s, rp, Rd, rd, mu, nu)
        except np.linalg.LinAlgError:
            # iterates sit at the rounding floor
            break
        X, x, y, S, s = (a + b for a, b in zip((X, x, y, S, s), step))
        X, S = herm(X), herm(S)
    gap = _quick_gap(P.H, X, y)
    if gap < best[0]:
        best = (gap, X, y)
    return best[1], best[2], it


def _bounds(H: np.ndarray, Z: np.ndarray, y: np.ndarray):
    """Upper bound from the repaired primal, dual vectors from y."""
    n = H.shape[0]
    Zr = Z.copy()
    Zr[:n, n:] = H
    Zr[n:, :n] = H.conj().T
    Zr = 0.5 * (Zr + Zr.conj().T)
    shift = max(0.0, -float(np.linalg.eigvalsh(Zr)[0]))
    Zr = Zr + shift * np.eye(2 * n)
    upper = float(np.real(np.diag(Zr)).max())
    p = np.clip(-y[: 2 * n], 0, None)
    u, v = np.sqrt(p[:n]), np.sqrt(p[n:])
    if np.linalg.norm(u) == 0 or np.linalg.norm(v) == 0:
        u = v = np.full(n, 1 / np.sqrt(n))
    return Zr, upper, u / np.linalg.norm(u), v / np.linalg.norm(v)


def _quick_gap(H: np.ndarray, Z: np.ndarray, y: np.ndarray) -> float:
    _, upper, u, v = _bounds(H, Z, y)
    return upper - weighted_trace_norm(H, u, v)


def _newton_step(P: _Problem, X, x, S, s, rp, Rd, rd, mu, nu):
    """Mehrotra predictor-corrector step with the HKM direction."""
    herm = lambda A: 0.5 * (A + A.conj().T)  # noqa: E731
    N, nlp = P.N, P.nlp
    Sinv = herm(np.linalg.inv(S))
    M = P.schur(X, x, Sinv, s)
    try:
        fac = sla.cho_factor(M)
        solve = lambda r: sla.cho_solve(fac, r)  # noqa: E731
    except (np.linalg.LinAlgError, ValueError):
        solve = lambda r: np.linalg.lstsq(M, r, rcond=None)[0]  # noqa: E731

    def direction(T, t):
        # ΔX = T S⁻¹ − X − X ΔS S⁻¹ with ΔS = Rd − A*(Δy), and A(ΔX) = rp
        base = P.op(T @ Sinv - X - X @ Rd @ Sinv, t / s - x - x * rd / s)
        dy = solve(rp - base)
        Az, al = P.adj(dy)
        dS = Rd - Az
        ds = rd - al
        dX = herm(T @ Sinv - X - X @ dS @ Sinv)
        dx = t / s - x - x * ds / s
        return dX, dx, dy, dS, ds

    I = np.eye(N)
    dX, dx, dy, dS, ds = direction(np.zeros((N, N), dtype=complex), np.zeros(nlp))
    ap = min(1.0, _max_step(X, dX), _max_step_lp(x, dx))
    ad = min(1.0, _max_step(S, dS), _max_step_lp(s, ds))
    mu_aff = (np.real(np.trace((X + ap * dX) @ (S + ad * dS))) + (x + ap * dx) @ (s + ad * ds)) / nu
    sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3
    T = sigma * mu * I - dX @ dS
    t = sigma * mu - dx * ds
    dX, dx, dy, dS, ds = direction(T, t)
    ap = min(1.0, 0.98 * _max_step(X, dX), 0.98 * _max_step_lp(x, dx))
    ad = min(1.0, 0.98 * _max_step(S, dS), 0.98 * _max_step_lp(s, ds))
    return ap * dX, ap * dx, ad * dy, ad * dS, ad * ds


def _certify(H: np.ndarray, Z: np.ndarray, y: np.ndarray):
    Zr, upper, u, v = _bounds(H, Z, y)
    u, v, lower, W = _polish(H, u, v)
    return Zr, upper, u, v, lower, W


def gamma2(H, tol: float = 1e-6, max_iter: int = MAX_ITER) -> Gamma2Result:
    """γ₂ norm of a square complex matrix with certificates.

    Raises :class:`Gamma2Error` when the certified gap exceeds ``2 * tol``.
    The reported value is the certified lower bound unless the gap exceeds
    ``tol``, in which case it is moved up so that both bounds lie within
    ``tol`` of it.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    H = np.atleast_2d(np.asarray(H, dtype=complex))
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("expected a square matrix")
    n = H.shape[0]
    scale = float(np.abs(H).max(initial=0.0))
    if n == 0 or scale == 0.0:
        e = np.ones(n) / np.sqrt(n) if n else np.zeros(0)
        return Gamma2Result(0.0, 0.0, 0.0, np.zeros((2 * n, 2 * n), complex), e, e,
                            np.zeros((n, n), complex), 0)
    Hs = H / scale
    P = _Problem(Hs)
    Z, y, iters = _ipm(P, max_iter)
    Zr, upper, u, v, lower, W = _certify(Hs, Z, y)
    upper, lower = upper * scale, lower * scale
    log.debug("gamma2 n=%d iters=%d upper=%.15g lower=%.15g", n, iters, upper, lower)
    if upper - lower > 2 * tol:
        raise Gamma2Error(f"duality gap {upper - lower:.3e} exceeds 2*tol after {iters} iterations")
    value = max(lower, upper - tol)
    return Gamma2Result(value, upper, lower, Zr * scale, u, v, W, iters)
