"""Shared numerical kernels.

Thin wrappers around LAPACK/ARPACK with the conventions the rest of the
package relies on: eigenvalues ascending, eigenvectors unit-norm with a
deterministic sign, explicit residual checks, and simple quadrature helpers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sparse
import scipy.sparse.linalg as spla
from scipy.linalg import eigh_tridiagonal

__all__ = [
    "TridiagonalOperator",
    "SparseSymmetricOperator",
    "NonConvergenceError",
    "tridiag_smallest_eigenpairs",
    "sparse_smallest_eigenpairs",
    "integrate_samples",
    "trapezoid_weights",
    "simpson_weights",
    "richardson",
]


class NonConvergenceError(RuntimeError):
    """Iterative eigensolver failed to meet its residual target."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix given by its diagonal and off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or len(d) < 2 or len(e) != len(d) - 1:
            raise ValueError("need diag of length N >= 2 and offdiag of length N-1")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def dimension(self) -> int:
        return len(self.diag)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def to_sparse(self) -> sparse.csr_matrix:
        return sparse.diags(
            [self.offdiag, self.diag, self.offdiag], [-1, 0, 1], format="csr"
        )


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    """Make the first component of largest magnitude positive, per column."""
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def tridiag_smallest_eigenpairs(op: TridiagonalOperator, k: int):
    """k smallest eigenpairs of a symmetric tridiagonal operator.

    Eigenvalues come from bisection on the Sturm sequence (LAPACK stebz) and
    eigenvectors from inverse iteration (stein); eigenvalues are ascending,
    eigenvectors have unit Euclidean norm and a deterministic sign.
    """
    n = op.dimension
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= {n}, got k={k}")
    vals, vecs = eigh_tridiagonal(
        op.diag, op.offdiag, select="i", select_range=(0, k - 1), lapack_driver="stebz"
    )
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    vecs /= np.linalg.norm(vecs, axis=0)
    return vals, _fix_signs(vecs)


@dataclass
class SparseSymmetricOperator:
    """Symmetric linear operator given by its action on vectors.

    Self-adjointness is spot-checked on random probes at construction:
    |<Av,w> - <v,Aw>| must not exceed 1e-10 * |Av||w| + |v||Aw| scale.
    """

    dimension: int
    apply: Callable[[np.ndarray], np.ndarray]
    matrix: sparse.spmatrix | None = field(default=None, repr=False)

    def __post_init__(self):
        rng = np.random.default_rng(0)
        for _ in range(3):
            v = rng.standard_normal(self.dimension)
            w = rng.standard_normal(self.dimension)
            av, aw = self.apply(v), self.apply(w)
            scale = (
                np.linalg.norm(av) * np.linalg.norm(w)
                + np.linalg.norm(v) * np.linalg.norm(aw)
                + 1e-300
            )
            if abs(av @ w - v @ aw) > 1e-10 * scale:
                raise ValueError("operator fails the self-adjointness probe check")

    @classmethod
    def from_matrix(cls, mat: sparse.spmatrix) -> "SparseSymmetricOperator":
        mat = mat.tocsr()
        return cls(dimension=mat.shape[0], apply=lambda v: mat @ v, matrix=mat)

    def as_linear_operator(self) -> spla.LinearOperator:
        return spla.LinearOperator(
            (self.dimension, self.dimension), matvec=self.apply, dtype=float
        )


def _cg_shift_inverse(op: SparseSymmetricOperator, shift: float) -> spla.LinearOperator:
    """(A - shift I)^{-1} through conjugate-gradient inner solves."""
    n = op.dimension
    cap = 20 * n

    def solve(b):
        def shifted(v):
            return op.apply(v) - shift * v

        lin = spla.LinearOperator((n, n), matvec=shifted, dtype=float)
        x, info = spla.cg(lin, b, rtol=1e-10, atol=0.0, maxiter=cap)
        if info != 0:
            raise NonConvergenceError(
                f"CG inner solve failed after {cap} iterations",
                float(np.linalg.norm(shifted(x) - b)),
            )
        return x

    return spla.LinearOperator((n, n), matvec=solve, dtype=float)


def sparse_smallest_eigenpairs(
    op: SparseSymmetricOperator,
    k: int,
    shift: float = 0.0,
    residual_tol: float = 1e-8,
    maxiter: int | None = None,
):
    """k smallest eigenpairs of a sparse symmetric operator.

    Shift-invert Lanczos about `shift`: a direct factorization when the
    operator carries an assembled matrix, conjugate-gradient inner solves
    otherwise.  Each returned pair satisfies |Av - lambda v| <=
    residual_tol * max(|lambda|, lambda_max_computed).
    """
    n = op.dimension
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= dimension-1 = {n - 1}, got k={k}")
    if maxiter is None:
        maxiter = 20 * n
    if op.matrix is not None:
        vals, vecs = spla.eigsh(op.matrix, k=k, sigma=shift, which="LM", maxiter=maxiter)
    else:
        vals, vecs = spla.eigsh(
            op.as_linear_operator(),
            k=k,
            sigma=shift,
            which="LM",
            OPinv=_cg_shift_inverse(op, shift),
            maxiter=maxiter,
        )
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    vecs /= np.linalg.norm(vecs, axis=0)
    vecs = _fix_signs(vecs)
    scale = np.max(np.abs(vals))
    for i, lam in enumerate(vals):
        res = np.linalg.norm(op.apply(vecs[:, i]) - lam * vecs[:, i])
        if res > residual_tol * max(abs(lam), scale):
            raise NonConvergenceError(
                f"eigenpair {i} (lambda={lam:.6g}) missed the residual target", res
            )
    return vals, vecs


def integrate_samples(values: np.ndarray, weights: np.ndarray) -> float:
    """Weighted dot product; the composite rule lives in the weights."""
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if values.shape != weights.shape:
        raise ValueError(f"length mismatch: {values.shape} vs {weights.shape}")
    return float(values @ weights)


def trapezoid_weights(grid: np.ndarray) -> np.ndarray:
    """Composite trapezoid weights for an arbitrary sorted grid."""
    grid = np.asarray(grid, dtype=float)
    w = np.zeros_like(grid)
    d = np.diff(grid)
    w[:-1] += d / 2.0
    w[1:] += d / 2.0
    return w


def simpson_weights(grid: np.ndarray) -> np.ndarray:
    """Composite Simpson weights; needs a uniform grid with an even cell count."""
    grid = np.asarray(grid, dtype=float)
    n = len(grid) - 1
    if n < 2 or n % 2 != 0:
        raise ValueError("Simpson rule needs an even number of uniform cells")
    h = (grid[-1] - grid[0]) / n
    if not np.allclose(np.diff(grid), h):
        raise ValueError("Simpson rule needs a uniform grid")
    w = np.ones_like(grid)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * h / 3.0


def richardson(coarse: float, fine: float, order: int = 2) -> float:
    """Richardson extrapolation for a quantity with O(h^order) error,
    computed at mesh widths h (coarse) and h/2 (fine)."""
    factor = 2.0**order
    return (factor * fine - coarse) / (factor - 1.0)
