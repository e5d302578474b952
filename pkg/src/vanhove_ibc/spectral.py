"""Hermitian eigensolvers: Lanczos with full reorthogonalisation and a dense fallback."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import InvalidArgumentError, InvalidOperatorError, ResourceLimitError
from .fock_space import SparseOperator

DENSE_LIMIT = 2000


@dataclass(frozen=True)
class EigResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns
    residual_norms: np.ndarray
    iterations: int
    converged: bool


def hermiticity_audit(op: SparseOperator) -> float:
    """Largest entry of |H - H^dagger|."""
    diff = (op.matrix - op.matrix.conj().T).tocsr()
    diff.eliminate_zeros()
    return float(np.abs(diff.data).max()) if diff.nnz else 0.0


def _residuals(op, vals, vecs):
    r = op.matrix @ vecs - vecs * vals
    return np.linalg.norm(r, axis=0)


def _require_hermitian(op: SparseOperator):
    defect = hermiticity_audit(op)
    scale = np.abs(op.matrix.data).max() if op.matrix.nnz else 1.0
    if defect > 1e-14 * max(scale, 1.0):
        raise InvalidOperatorError(f"operator is not Hermitian (max |H - H^+| = {defect:.3e})")


def dense_lowest(op: SparseOperator, k: int = 1) -> EigResult:
    """Lowest ``k`` eigenpairs from a full Hermitian eigendecomposition."""
    if op.dim > DENSE_LIMIT:
        raise ResourceLimitError(f"dense solver limited to dimension {DENSE_LIMIT}, got {op.dim}")
    if not 1 <= k <= op.dim:
        raise InvalidArgumentError(f"k must be in [1, {op.dim}], got {k}")
    vals, vecs = np.linalg.eigh(op.toarray())
    vals, vecs = vals[:k], vecs[:, :k]
    return EigResult(vals, vecs, _residuals(op, vals, vecs), iterations=0, converged=True)


def lanczos_lowest(
    op: SparseOperator,
    k: int = 1,
    tol: float = 1e-8,
    max_iter: int = 1000,
    seed: int = 0,
    check_every: int = 10,
) -> EigResult:
    """Lowest ``k`` eigenpairs of a Hermitian operator by Lanczos iteration.

    Every new Lanczos vector is orthogonalised against the whole basis by
    classical Gram-Schmidt, with a second pass whenever the first one cancels
    more than ~30% of the norm, so no spurious copies of converged Ritz values
    appear.  Convergence is declared when the residual norm
    ``||H x - theta x||`` of each of the ``k`` lowest Ritz pairs is below
    ``tol``.  The start vector is a seeded standard-normal draw (complex for
    complex operators, its real part for real ones).

    The Krylov basis is stored in full, so memory grows as
    ``max_iter * dim``; there is no restarting.
    """
    _require_hermitian(op)
    n = op.dim
    if k < 1 or k >= n:
        raise InvalidArgumentError(f"need 1 <= k < dim={n} (use dense_lowest for full spectra), got k={k}")
    if tol <= 0:
        raise InvalidArgumentError("tol must be positive")
    A = op.matrix
    real = not np.iscomplexobj(A.data)
    dtype = float if real else complex

    rng = np.random.default_rng(seed)
    start = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v = (start.real if real else start).astype(dtype)
    v /= np.linalg.norm(v)

    m = min(max_iter, n)
    V = np.empty((m + 1, n), dtype=dtype)
    V[0] = v
    alphas = np.zeros(m)
    betas = np.zeros(m)
    steps = 0
    theta = s = None
    for j in range(m):
        w = A @ V[j]
        alphas[j] = np.vdot(V[j], w).real
        w -= alphas[j] * V[j]
        if j > 0:
            w -= betas[j - 1] * V[j - 1]
        basis = V[: j + 1]
        before = np.linalg.norm(w)
        w -= basis.T @ (basis.conj() @ w)
        beta = np.linalg.norm(w)
        if beta < 0.7071 * before:
            # cancellation: one more pass restores orthogonality to working precision
            w -= basis.T @ (basis.conj() @ w)
            beta = np.linalg.norm(w)
        betas[j] = beta
        steps = j + 1
        exhausted = beta <= 1e-12 * max(1.0, np.abs(alphas[: j + 1]).max())
        if exhausted or steps % check_every == 0 or steps == m:
            theta, s = sla.eigh_tridiagonal(alphas[:steps], betas[: steps - 1])
            if steps >= k:
                est = beta * np.abs(s[-1, :k])
                if exhausted or (est <= tol).all():
                    break
        if exhausted:
            break
        V[j + 1] = w / beta

    kk = min(k, steps)
    vecs = V[:steps].T @ s[:, :kk]
    vecs /= np.linalg.norm(vecs, axis=0)
    vals = theta[:kk]
    res = _residuals(op, vals, vecs)
    converged = kk == k and bool((res <= tol).all())
    return EigResult(vals, vecs, res, iterations=steps, converged=converged)
