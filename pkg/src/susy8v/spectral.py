"""Eigen-solvers used by the verification checks.

Dense solvers wrap LAPACK through numpy. The symmetric Krylov solver is a
Lanczos recurrence with full reorthogonalization; converged vectors are locked
and later runs are kept orthogonal to them, so degenerate eigenvalues are found
with their multiplicity. Non-symmetric extremal problems go through ARPACK.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .hilbert import LinearMap

DEFAULT_SEED = 0x5EED_8B17_2001_0001
HERMITIAN_DIM_LIMIT = 1 << 12
GENERAL_DIM_LIMIT = 1 << 11

Operator = Union[LinearMap, np.ndarray, sp.spmatrix]


class ConvergenceError(RuntimeError):
    pass


class BudgetError(ValueError):
    """Dense solve requested above the configured dimension limit."""


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray
    clusters: list[tuple[complex, int]]
    method: str
    residual_bound: float
    eigenvectors: Optional[np.ndarray] = field(default=None, repr=False)

    def multiplicity_near(self, target: complex, tol: float) -> int:
        return int(np.sum(np.abs(self.eigenvalues - target) <= tol))


def _as_array(op: Operator) -> np.ndarray:
    if isinstance(op, LinearMap):
        return op.to_dense()
    if sp.issparse(op):
        return op.toarray()
    return np.asarray(op)


def cluster(values: Sequence[complex], tol: float) -> list[tuple[complex, int]]:
    """Single-linkage clusters of radius ``tol`` in the complex plane.

    Chains are merged: ``1, 1+2e-8, 1+4e-8`` with ``tol=3e-8`` form one cluster.
    Clusters are listed by decreasing real part of their first member; the
    representative is the cluster mean.
    """
    if tol <= 0:
        raise ValueError("cluster tolerance must be positive")
    vals = np.asarray(values, dtype=complex).ravel()
    n = vals.size
    if n == 0:
        return []
    order = np.lexsort((-vals.imag, -vals.real))
    v = vals[order]
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        j = i + 1
        while j < n and v[i].real - v[j].real <= tol:
            if abs(v[i] - v[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
            j += 1

    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = []
    for root in sorted(groups):
        members = v[groups[root]]
        rep = complex(members.mean())
        if abs(rep.imag) == 0.0:
            rep = complex(rep.real, 0.0)
        out.append((rep, len(members)))
    return out


def isolated_cluster(
    values: Sequence[complex], target: complex, tol: float, separation: float = 10.0
) -> tuple[int, float]:
    """Size of the cluster around ``target`` and its distance to the rest of the spectrum.

    Returns ``(0, nan)`` when no eigenvalue lies within ``tol`` of ``target``. A
    cluster is considered isolated when the returned distance exceeds
    ``separation * tol``.
    """
    vals = np.asarray(values, dtype=complex).ravel()
    if vals.size == 0 or np.min(np.abs(vals - target)) > tol:
        return 0, float("nan")
    seed = int(np.argmin(np.abs(vals - target)))
    member = np.zeros(vals.size, dtype=bool)
    member[seed] = True
    grew = True
    while grew:
        d = np.min(np.abs(vals[:, None] - vals[member][None, :]), axis=1)
        new = (d <= tol) & ~member
        grew = bool(new.any())
        member |= new
    rest = vals[~member]
    gap = float(np.min(np.abs(rest[:, None] - vals[member][None, :]))) if rest.size else float("inf")
    return int(member.sum()), gap


def eig_dense_hermitian(
    op: Operator,
    project: Optional[Union[np.ndarray, sp.spmatrix]] = None,
    hermitian_tol: float = 1e-10,
    max_dim: int = HERMITIAN_DIM_LIMIT,
    cluster_tol: float = 1e-8,
) -> SpectrumResult:
    """Full spectrum of a Hermitian operator, optionally restricted by an isometry.

    ``project`` is a matrix with orthonormal columns ``B``; the spectrum of
    ``B† A B`` is computed and eigenvectors are lifted back with ``B``.
    """
    if project is not None:
        B = project
        if isinstance(op, LinearMap):
            AB = op.apply(B.toarray() if sp.issparse(B) else np.asarray(B))
        else:
            AB = np.asarray(op @ B) if not sp.issparse(op) else np.asarray((op @ B).todense())
        A = np.asarray(B.conj().T @ AB)
    else:
        dim = op.shape[0]
        if dim > max_dim:
            raise BudgetError(f"dense Hermitian solve of dimension {dim} exceeds limit {max_dim}")
        A = _as_array(op)
    if A.shape[0] > max_dim:
        raise BudgetError(f"dense Hermitian solve of dimension {A.shape[0]} exceeds limit {max_dim}")
    scale = max(np.abs(A).max(initial=0.0), 1.0)
    asym = np.abs(A - A.conj().T).max(initial=0.0)
    if asym > hermitian_tol * scale:
        raise ValueError(f"operator is not Hermitian (asymmetry {asym:.3e})")
    A = 0.5 * (A + A.conj().T)
    w, V = np.linalg.eigh(A)
    w, V = w[::-1], V[:, ::-1]
    resid = np.linalg.norm(A @ V - V * w, axis=0).max(initial=0.0)
    if project is not None:
        V = np.asarray(project @ V)
    norm = max(np.abs(w).max(initial=0.0), 1.0)
    return SpectrumResult(
        w.astype(complex), cluster(w, cluster_tol * norm), "dense-hermitian", float(resid), V
    )


def eig_dense_general(
    op: Operator, max_dim: int = GENERAL_DIM_LIMIT, cluster_tol: float = 1e-8, vectors: bool = True
) -> SpectrumResult:
    """Full complex spectrum of a square operator (LAPACK Hessenberg + shifted QR)."""
    A = _as_array(op)
    if A.shape[0] > max_dim:
        raise BudgetError(f"dense general solve of dimension {A.shape[0]} exceeds limit {max_dim}")
    if not np.isfinite(A).all():
        raise ValueError("operator has non-finite entries")
    if vectors:
        w, V = np.linalg.eig(A)
    else:
        w, V = np.linalg.eigvals(A), None
    order = np.lexsort((-w.imag, -w.real))
    w = w[order]
    resid = 0.0
    if V is not None:
        V = V[:, order]
        resid = float(np.linalg.norm(A @ V - V * w, axis=0).max(initial=0.0))
    norm = max(np.abs(w).max(initial=0.0), 1e-300)
    return SpectrumResult(w, cluster(w, cluster_tol * norm), "dense-general", resid, V)


@dataclass
class PowerIterationResult:
    value: complex
    vector: np.ndarray = field(repr=False)
    iterations: int
    residual: float
    converged: bool


def power_iteration(
    apply: Callable[[np.ndarray], np.ndarray],
    v0: np.ndarray,
    tol: float = 1e-10,
    maxiter: int = 5000,
    strict: bool = True,
) -> PowerIterationResult:
    """Dominant eigenpair by repeated application; ``residual`` is ``|Av - λv| / |λ|``."""
    v = np.asarray(v0, dtype=complex)
    v = v / np.linalg.norm(v)
    lam, resid = 0.0, np.inf
    for it in range(1, maxiter + 1):
        w = apply(v)
        lam = np.vdot(v, w)
        resid = np.linalg.norm(w - lam * v) / max(abs(lam), 1e-300)
        nw = np.linalg.norm(w)
        if nw == 0:
            raise ConvergenceError("power iteration hit the null space")
        if resid < tol:
            return PowerIterationResult(complex(lam), v, it, float(resid), True)
        v = w / nw
    if strict:
        raise ConvergenceError(f"power iteration did not converge in {maxiter} steps (residual {resid:.2e})")
    return PowerIterationResult(complex(lam), v, maxiter, float(resid), False)


def _lanczos_single(apply, v0, locked, which, tol, maxiter, check_every=5):
    """One Lanczos run orthogonal to ``locked``; returns (ritz value, ritz vector, residual, norm estimate)."""

    def deflate(x):
        for u in locked:
            x = x - u * np.vdot(u, x)
        return x

    q = deflate(v0)
    q = q / np.linalg.norm(q)
    Q = [q]
    alphas, betas = [], []
    anorm = 0.0
    for it in range(maxiter):
        w = deflate(apply(Q[-1]))
        alpha = np.vdot(Q[-1], w).real
        alphas.append(alpha)
        w = w - alpha * Q[-1]
        if betas:
            w = w - betas[-1] * Q[-2]
        basis = np.array(Q).T
        for _ in range(2):
            w = w - basis @ (basis.conj().T @ w)
        w = deflate(w)
        beta = np.linalg.norm(w)
        m = len(alphas)
        last = it == maxiter - 1
        if m % check_every == 0 or beta < 1e-13 * max(anorm, 1.0) or last or m == v0.size - len(locked):
            T = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
            theta, S = np.linalg.eigh(T)
            anorm = max(anorm, np.abs(theta).max())
            idx = -1 if which == "largest" else 0
            ritz_resid = beta * abs(S[-1, idx])
            if ritz_resid < tol * max(anorm, 1e-300) or beta < 1e-13 * max(anorm, 1.0) or last:
                x = basis @ S[:, idx]
                x = x / np.linalg.norm(x)
                return theta[idx], x, ritz_resid, anorm
        betas.append(beta)
        Q.append(w / beta)
    raise ConvergenceError("Lanczos did not converge")


def lanczos_extremal(
    apply: Callable[[np.ndarray], np.ndarray],
    dim: int,
    k: int,
    which: str = "smallest",
    seed: int = DEFAULT_SEED,
    v0: Optional[np.ndarray] = None,
    tol: float = 1e-10,
    maxiter: int = 300,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``k`` extremal eigenpairs of a Hermitian operator with locking.

    A start vector ``v0`` confines the search to its invariant subspace (for
    instance one parity sector); otherwise a seeded random vector is used.
    """
    if which not in ("smallest", "largest"):
        raise ValueError("which must be 'smallest' or 'largest'")
    if k < 1 or k >= dim:
        raise ValueError("need 1 <= k < dim")
    rng = np.random.default_rng(seed)
    locked: list[np.ndarray] = []
    values, resids = [], []
    for i in range(k):
        if v0 is not None:
            start = np.asarray(v0, dtype=complex) + 1e-3 * (
                rng.standard_normal(dim) * (np.asarray(v0) != 0)
            )
        else:
            start = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        theta, x, _, anorm = _lanczos_single(apply, start, locked, which, tol, min(maxiter, dim))
        resid = np.linalg.norm(apply(x) - theta * x)
        locked.append(x)
        values.append(theta)
        resids.append(resid)
    return np.array(values), np.array(locked).T, np.array(resids)


def krylov_extremal(
    apply: Union[Callable[[np.ndarray], np.ndarray], LinearMap],
    dim: int,
    k: int,
    symmetric: bool,
    which: str = "largest",
    seed: int = DEFAULT_SEED,
    v0: Optional[np.ndarray] = None,
    tol: float = 1e-10,
    maxiter: int = 300,
) -> SpectrumResult:
    """``k`` extremal eigenvalues of a matrix-free operator.

    Symmetric problems use the Lanczos solver above; others use ARPACK's
    restarted Arnoldi with ``which`` in ``{"largest", "smallest"}`` by real part
    or ``"magnitude"``. Every returned pair is checked explicitly:
    ``|Av - λv| < 1e-8 * |A|_est`` or a ``ConvergenceError`` is raised.
    """
    f = apply.apply if isinstance(apply, LinearMap) else apply
    if symmetric:
        vals, vecs, resids = lanczos_extremal(f, dim, k, which, seed, v0, tol, maxiter)
        method = "krylov-extremal"
    else:
        rng = np.random.default_rng(seed)
        start = v0 if v0 is not None else rng.standard_normal(dim) + 0j
        op = spla.LinearOperator((dim, dim), matvec=f, dtype=complex)
        code = {"largest": "LR", "smallest": "SR", "magnitude": "LM"}[which]
        vals, vecs = spla.eigs(op, k=k, which=code, v0=start, tol=tol, maxiter=maxiter * dim)
        resids = np.linalg.norm(np.column_stack([f(vecs[:, i]) for i in range(k)]) - vecs * vals, axis=0)
        method = "krylov-extremal"
    anorm = max(np.abs(vals).max(), 1e-300)
    if np.max(resids) > 1e-8 * anorm:
        raise ConvergenceError(f"Krylov residual {np.max(resids):.2e} above 1e-8 * |A|")
    order = np.lexsort((-np.imag(vals), -np.real(vals)))
    vals = np.asarray(vals, dtype=complex)[order]
    vecs = vecs[:, order]
    return SpectrumResult(vals, cluster(vals, 1e-8 * anorm), method, float(np.max(resids)), vecs)
